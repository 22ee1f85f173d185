/**
 * @file special_functions.hpp
 * @brief Cylinder functions of complex order and complex argument.
 *
 * J, I, K and the Hankel pair are evaluated in double precision by one of
 * three regimes, chosen per call:
 *
 *  - ascending power series (J and I directly, the others through the
 *    J_{+-nu} / I_{+-nu} connection formulas), preferred for |z| <= 12;
 *  - Hankel's large-argument expansions, preferred for |z| >= 30;
 *  - the real-line integral K_nu(z) = int_0^inf exp(-z cosh t) cosh(nu t) dt
 *    (Re z > 0), which also yields H^(1) in the upper half plane through
 *    H^(1)_nu(w) = 2/(pi i) e^{-i nu pi/2} K_nu(-i w).
 *
 * Every evaluation reports the regime that produced it together with a
 * running-error estimate of its relative accuracy. A call throws
 * EvaluationError when no admissible regime gets below kMaxRelErr.
 *
 * All branches are principal: z^nu = exp(nu log z) with arg z in (-pi, pi].
 * The functions are pure and thread-safe.
 */

#ifndef PTEXP_SPECIAL_FUNCTIONS_HPP
#define PTEXP_SPECIAL_FUNCTIONS_HPP

#include <string_view>

#include "ptexp/types.hpp"

namespace ptexp::sf {

enum class Regime { series, asymptotic, integral };

std::string_view to_string(Regime r);

struct AccuracyReport {
    Complex value;
    double est_rel_err = 0.0;
    Regime regime = Regime::series;
};

/// Results at or below this estimate are accepted without trying other regimes.
inline constexpr double kTargetRelErr = 1e-13;
/// Results above this estimate are rejected.
inline constexpr double kMaxRelErr = 1e-6;

inline constexpr double kSeriesRadius = 12.0;
inline constexpr double kAsymptoticRadius = 30.0;

/// Stirling series after an upward shift to |z| >= 15, with reflection for
/// Re z < 1/2. Throws PoleError within 1e-12 of a non-positive integer.
Complex gamma(Complex z);

/// 1/Gamma(z); entire, so it returns 0 at the poles of gamma().
Complex rgamma(Complex z);

AccuracyReport bessel_j(Complex nu, Complex z);
AccuracyReport bessel_i(Complex nu, Complex z);
/// Requires z != 0; the integral regime needs Re z > 0.
AccuracyReport bessel_k(Complex nu, Complex z);
AccuracyReport hankel1(Complex nu, Complex z);
/// Computed as conj(H^(1)_{conj nu}(conj z)).
AccuracyReport hankel2(Complex nu, Complex z);

// Argument derivatives, from the order recurrences
//   C'_nu = C_{nu-1} - (nu/z) C_nu      (J, I, H^(1), H^(2))
//   K'_nu = -K_{nu-1} - (nu/z) K_nu
AccuracyReport bessel_j_dz(Complex nu, Complex z);
AccuracyReport bessel_i_dz(Complex nu, Complex z);
AccuracyReport bessel_k_dz(Complex nu, Complex z);
AccuracyReport hankel1_dz(Complex nu, Complex z);
AccuracyReport hankel2_dz(Complex nu, Complex z);

/// A function value and its argument derivative sharing one evaluation of C_nu.
struct ValueAndDerivative {
    Complex value;
    Complex derivative;
    double est_rel_err = 0.0;
};

ValueAndDerivative hankel1_with_dz(Complex nu, Complex z);
ValueAndDerivative hankel2_with_dz(Complex nu, Complex z);
ValueAndDerivative bessel_k_with_dz(Complex nu, Complex z);

/// Tricomi's confluent hypergeometric function U(a, b; z). Independent of the
/// Bessel routines above: polynomial form for a = -n, the M-series connection
/// for small |z|, the Laplace integral for Re a > 0 and Re z > 0, and the
/// large-|z| expansion.
AccuracyReport kummer_u(Complex a, Complex b, Complex z);

}  // namespace ptexp::sf

#endif
