/**
 * @file model.hpp
 * @brief The potential V(x) = i g sgn(x) |1 - e^{2|x|/a}| and its closed-form
 *        piecewise solutions, in units 2 mu = hbar^2 = 1.
 *
 * For x <= 0 the decaying solution is H^(1)_{ipa}(s a e^{-x/a}), for x >= 0 it
 * is K_{iqa}(s a e^{x/a}), with p = sqrt(E - i g), q = sqrt(E + i g) and
 * s = e^{i pi/4} sqrt(g). Both are normalised to 1 at the origin.
 *
 * Negative g is handled by reflection: V_{-g}(x) = V_g(-x), so the solutions
 * for -g are the mirror images of the solutions for |g| and every spectral
 * quantity is unchanged.
 */

#ifndef PTEXP_MODEL_HPP
#define PTEXP_MODEL_HPP

#include "ptexp/types.hpp"

namespace ptexp {

struct PotentialParams {
    double a = 1.0;
    double g = 1.0;
};

/// Throws InvalidArgument unless a > 0, g != 0 and both are finite.
void validate(const PotentialParams& params);

/// (a, |g|); the x axis is mirrored when the input had g < 0.
struct NormalizedParams {
    PotentialParams params;
    bool mirrored = false;
};

NormalizedParams normalize(const PotentialParams& params);

struct Wavenumbers {
    Complex p;  ///< sqrt(E - i g), principal branch
    Complex q;  ///< sqrt(E + i g), principal branch
    Complex s;  ///< e^{i pi/4} sqrt(g) for g > 0, its conjugate for g < 0
};

Complex potential(double x, const PotentialParams& params);

/// Throws SolverFailure if p^2 or q^2 misses its defining value by more than 1e-12.
Wavenumbers wavenumbers(Complex E, const PotentialParams& params);

/// psi_<(x), x <= 0. Throws InvalidArgument for x > 0, DivergenceError if the
/// normalising value at the origin is below 1e-300.
Complex psi_left(double x, Complex E, const PotentialParams& params);
/// psi_>(x), x >= 0.
Complex psi_right(double x, Complex E, const PotentialParams& params);

Complex psi_left_dx(double x, Complex E, const PotentialParams& params);
Complex psi_right_dx(double x, Complex E, const PotentialParams& params);

/// psi(x) assembled from both sides.
Complex psi(double x, Complex E, const PotentialParams& params);

/// The building blocks of the matching condition at x = 0 for g > 0:
///   h = H^(1)_{ipa}(sa), dh = H^(1)'_{ipa}(sa), k = K_{iqa}(sa), dk = K'_{iqa}(sa).
struct OriginValues {
    Complex s;
    Complex h, dh, k, dk;
    double est_rel_err = 0.0;
};

/// Evaluated at (a, |g|).
OriginValues origin_values(Complex E, const PotentialParams& params);

/// psi_<'(0) - psi_>'(0) = -s (h'/h + k'/k). Zero exactly at the eigenvalues;
/// unlike f it satisfies D(conj E) = conj D(E), so it is real for real E.
Complex log_derivative_mismatch(Complex E, const PotentialParams& params);

}  // namespace ptexp

#endif
