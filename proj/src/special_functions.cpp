/**
 * @file special_functions.cpp
 * @brief Regime implementations and dispatch for the cylinder functions.
 */

#include "ptexp/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "quadrature.hpp"

namespace ptexp::sf {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
const Complex kI{0.0, 1.0};

// Bernoulli terms B_{2k} / (2k (2k-1)) of the Stirling series.
constexpr std::array<double, 10> kStirling = {
    1.0 / 12.0,          -1.0 / 360.0,        1.0 / 1260.0,    -1.0 / 1680.0,       1.0 / 1188.0,
    -691.0 / 360360.0,   1.0 / 156.0,         -3617.0 / 122400.0, 43867.0 / 244188.0, -174611.0 / 125400.0};

// Gamma(z) for Re z >= 1/2: shift to |w| >= 15, Stirling series for log Gamma(w),
// then divide out the shift product.
Complex stirling_gamma(Complex z) {
    Complex w = z, prod = 1.0;
    while (std::abs(w) < 15.0) {
        prod *= w;
        w += 1.0;
    }
    const Complex inv = 1.0 / w, inv2 = inv * inv;
    Complex series = 0.0, p = inv;
    for (double c : kStirling) {
        series += c * p;
        p *= inv2;
    }
    const Complex lg = (w - 0.5) * std::log(w) - w + 0.5 * std::log(2.0 * kPi) + series;
    return std::exp(lg) / prod;
}

// sin(pi z) with the real part reduced first so large |Re z| keeps its accuracy.
Complex sin_pi(Complex z) {
    const double x = z.real() - 2.0 * std::round(0.5 * z.real());
    const double y = kPi * z.imag();
    return {std::sin(kPi * x) * std::cosh(y), std::cos(kPi * x) * std::sinh(y)};
}

std::optional<int> nonpositive_integer(Complex z, double tol) {
    if (z.real() > 0.5 || std::abs(z.imag()) > tol) return std::nullopt;
    const double n = std::round(z.real());
    if (n <= 0.0 && std::abs(z.real() - n) <= tol) return static_cast<int>(-n);
    return std::nullopt;
}

bool is_integer(Complex z, double tol) {
    return std::abs(z.imag()) <= tol && std::abs(z.real() - std::round(z.real())) <= tol;
}

Complex cpow(Complex base, Complex exponent) { return std::exp(exponent * std::log(base)); }

void require_finite(const AccuracyReport& r, const char* what) {
    if (!is_finite(r.value) || !std::isfinite(r.est_rel_err))
        throw EvaluationError(std::string(what) + ": non-finite result");
}

// Pick the first candidate that meets kTargetRelErr, otherwise the most
// accurate one that meets kMaxRelErr.
using Candidate = std::function<AccuracyReport()>;

AccuracyReport dispatch(const std::vector<Candidate>& candidates, const char* what) {
    std::optional<AccuracyReport> best;
    for (const auto& c : candidates) {
        AccuracyReport r;
        try {
            r = c();
        } catch (const EvaluationError&) {
            continue;
        }
        if (!is_finite(r.value) || !std::isfinite(r.est_rel_err)) continue;
        if (r.est_rel_err <= kTargetRelErr) return r;
        if (!best || r.est_rel_err < best->est_rel_err) best = r;
    }
    if (best && best->est_rel_err <= kMaxRelErr) return *best;
    throw EvaluationError(std::string(what) + ": no regime reached the accuracy floor" +
                          (best ? " (best estimate " + std::to_string(best->est_rel_err) + ")"
                                : ""));
}

// ---------------------------------------------------------------------------
// Ascending series
// ---------------------------------------------------------------------------

// (z/2)^nu sum_k (sign z^2/4)^k / (k! Gamma(nu+k+1)); sign = -1 gives J, +1 gives I.
AccuracyReport ascending_series(Complex nu, Complex z, double sign) {
    if (z == 0.0) {
        if (nu == 0.0) return {1.0, 0.0, Regime::series};
        if (nu.real() > 0.0) return {0.0, 0.0, Regime::series};
        throw EvaluationError("ascending series: z = 0 with Re(nu) <= 0");
    }
    if (auto n = nonpositive_integer(nu, 1e-14); n && *n > 0) {
        // C_{-n} = (-1)^n J_n or I_n.
        AccuracyReport r = ascending_series(static_cast<double>(*n), z, sign);
        if (sign < 0 && (*n % 2 == 1)) r.value = -r.value;
        return r;
    }
    const Complex half = 0.5 * z;
    const Complex w = sign * half * half;
    Complex term = cpow(half, nu) * rgamma(nu + 1.0);
    Complex sum = term;
    double abs_sum = std::abs(term);
    const double wabs = std::abs(w);
    int k = 1;
    for (; k < 1000; ++k) {
        term *= w / (static_cast<double>(k) * (nu + static_cast<double>(k)));
        sum += term;
        const double t = std::abs(term);
        abs_sum += t;
        if (k * k > wabs && t <= 0.25 * kEps * std::abs(sum)) break;
        if (t == 0.0) break;
    }
    const double mag = std::abs(sum);
    // The prefactor carries the rounding of nu log(z/2) and of log Gamma(nu + 1).
    const double pre = kEps * (std::abs(nu * std::log(half)) +
                               std::abs(nu + 1.0) * (std::log(std::abs(nu) + 16.0) + 1.0));
    const double err = mag > 0.0 ? (2.0 + 0.01 * k) * kEps * abs_sum / mag + 4.0 * kEps + pre : 1.0;
    return {sum, err, Regime::series};
}

void check_order_guard(Complex nu, const char* what) {
    if (std::abs(std::sin(kPi * nu)) < 1e-8)
        throw NearIntegerOrderError(std::string(what) + ": order too close to an integer");
}

// H^(1)_nu = (J_{-nu} - e^{-i pi nu} J_nu) / (i sin pi nu). kind = +1 or -1 (H^(2)).
AccuracyReport hankel_series_combo(Complex nu, Complex z, int kind) {
    check_order_guard(nu, "hankel series");
    const AccuracyReport jp = ascending_series(nu, z, -1.0);
    const AccuracyReport jm = ascending_series(-nu, z, -1.0);
    const Complex e = std::exp(-static_cast<double>(kind) * kI * kPi * nu);
    const Complex a = jm.value, b = e * jp.value;
    const Complex num = a - b;
    const double mag = std::abs(num);
    if (mag == 0.0) throw EvaluationError("hankel series: total cancellation");
    const double err = (std::abs(a) * (jm.est_rel_err + kEps) + std::abs(b) * (jp.est_rel_err + 2 * kEps)) / mag +
                       4.0 * kEps;
    return {num / (static_cast<double>(kind) * kI * std::sin(kPi * nu)), err, Regime::series};
}

// K_nu = (pi/2) (I_{-nu} - I_nu) / sin(pi nu).
AccuracyReport k_series_combo(Complex nu, Complex z) {
    check_order_guard(nu, "bessel_k series");
    const AccuracyReport ip = ascending_series(nu, z, 1.0);
    const AccuracyReport im = ascending_series(-nu, z, 1.0);
    const Complex num = im.value - ip.value;
    const double mag = std::abs(num);
    if (mag == 0.0) throw EvaluationError("bessel_k series: total cancellation");
    const double err =
        (std::abs(im.value) * (im.est_rel_err + kEps) + std::abs(ip.value) * (ip.est_rel_err + kEps)) / mag +
        4.0 * kEps;
    return {0.5 * kPi * num / std::sin(kPi * nu), err, Regime::series};
}

// Near-integer orders: symmetric order average with one Richardson step,
//   C(nu) ~ [4 A(d) - A(2d)] / 3,  A(d) = (C(nu+d) + C(nu-d)) / 2.
template <class F>
AccuracyReport order_average(F&& eval, Complex nu, const char* what) {
    constexpr double d = 0.02;
    const AccuracyReport p1 = eval(nu + d), m1 = eval(nu - d);
    const AccuracyReport p2 = eval(nu + 2 * d), m2 = eval(nu - 2 * d);
    const Complex a1 = 0.5 * (p1.value + m1.value), a2 = 0.5 * (p2.value + m2.value);
    const Complex v = (4.0 * a1 - a2) / 3.0;
    const double mag = std::abs(v);
    if (mag == 0.0) throw NearIntegerOrderError(std::string(what) + ": order averaging failed");
    // The O(d^4) remainder is bounded by the size of the h^2 correction times d^2.
    const double trunc = std::abs(a1 - a2) / mag / 3.0 * 4.0 * d * d;
    const double round = 2.0 * std::max({p1.est_rel_err, m1.est_rel_err, p2.est_rel_err, m2.est_rel_err}) *
                         std::max(std::abs(a1), std::abs(a2)) / mag;
    AccuracyReport r{v, trunc + round, p1.regime};
    if (r.est_rel_err > kMaxRelErr)
        throw NearIntegerOrderError(std::string(what) + ": order averaging lost too many digits");
    return r;
}

// ---------------------------------------------------------------------------
// Large-argument expansions
// ---------------------------------------------------------------------------

struct AsymptoticSum {
    Complex value;
    double rel_err;
};

// sum_k rotation^k a_k(nu) / z^k, a_k = prod_{j<=k} (4nu^2 - (2j-1)^2) / (k! 8^k),
// truncated at convergence or just before the terms start to grow.
AsymptoticSum asymptotic_sum(Complex nu, Complex z, Complex rotation) {
    const Complex mu = 4.0 * nu * nu;
    const Complex step = rotation / (8.0 * z);
    Complex term = 1.0, sum = 1.0;
    double prev = 1.0, peak = 1.0;
    // Past this index (2k-1)^2 dominates |mu| and growth means divergence.
    const double kgrow = 0.5 * std::sqrt(std::abs(mu)) + 1.0;
    double last = 0.0;
    int k = 1;
    auto cancellation = [&] { return (2.0 + 0.02 * k) * kEps * peak / std::abs(sum); };
    for (; k <= 400; ++k) {
        const double odd = 2.0 * k - 1.0;
        const Complex next = term * (mu - odd * odd) * step / static_cast<double>(k);
        const double t = std::abs(next);
        if (t == 0.0) return {sum, cancellation()};
        if (k > kgrow && t > prev) break;
        term = next;
        sum += term;
        prev = t;
        last = t;
        peak = std::max(peak, t);
        if (t <= 0.5 * kEps * std::abs(sum)) return {sum, cancellation()};
    }
    return {sum, last / std::abs(sum) + cancellation()};
}

constexpr double kHalfPi = 0.5 * kPi;

AccuracyReport hankel_asymptotic(Complex nu, Complex z, int kind) {
    const double ph = std::arg(z);
    if (kind > 0 ? ph < -kHalfPi : ph > kHalfPi)
        throw EvaluationError("hankel asymptotic: argument outside sector");
    const double sgn = static_cast<double>(kind);
    const AsymptoticSum s = asymptotic_sum(nu, z, sgn * kI);
    const Complex omega = z - 0.5 * kPi * nu - 0.25 * kPi;
    const Complex v = std::sqrt(2.0 / (kPi * z)) * std::exp(sgn * kI * omega) * s.value;
    const double phase_err = kEps * (std::abs(z) + std::abs(nu) * 2.0);
    return {v, s.rel_err + phase_err, Regime::asymptotic};
}

AccuracyReport j_asymptotic(Complex nu, Complex z) {
    if (std::abs(std::arg(z)) > kHalfPi) throw EvaluationError("bessel_j asymptotic: sector");
    const AsymptoticSum sp = asymptotic_sum(nu, z, kI);
    const AsymptoticSum sm = asymptotic_sum(nu, z, -kI);
    const Complex omega = z - 0.5 * kPi * nu - 0.25 * kPi;
    const Complex a = std::exp(kI * omega) * sp.value, b = std::exp(-kI * omega) * sm.value;
    const Complex sum = a + b;
    const double mag = std::abs(sum);
    if (mag == 0.0) throw EvaluationError("bessel_j asymptotic: cancellation");
    const double phase_err = kEps * (std::abs(z) + 2.0 * std::abs(nu));
    const double err = (std::abs(a) * (sp.rel_err + phase_err) + std::abs(b) * (sm.rel_err + phase_err)) / mag;
    return {0.5 * std::sqrt(2.0 / (kPi * z)) * sum, err, Regime::asymptotic};
}

AccuracyReport k_asymptotic(Complex nu, Complex z) {
    if (std::abs(std::arg(z)) > 0.75 * kPi) throw EvaluationError("bessel_k asymptotic: sector");
    const AsymptoticSum s = asymptotic_sum(nu, z, 1.0);
    const Complex v = std::sqrt(kPi / (2.0 * z)) * std::exp(-z) * s.value;
    return {v, s.rel_err + kEps * (std::abs(z) + 2.0), Regime::asymptotic};
}

AccuracyReport i_asymptotic(Complex nu, Complex z) {
    if (std::abs(std::arg(z)) > kHalfPi) throw EvaluationError("bessel_i asymptotic: sector");
    const AsymptoticSum grow = asymptotic_sum(nu, z, -1.0);
    const AsymptoticSum decay = asymptotic_sum(nu, z, 1.0);
    const double sgn = z.imag() >= 0.0 ? 1.0 : -1.0;
    const Complex pre = 1.0 / std::sqrt(2.0 * kPi * z);
    const Complex a = std::exp(z) * grow.value;
    const Complex b = sgn * kI * std::exp(sgn * kI * kPi * nu) * std::exp(-z) * decay.value;
    const Complex sum = a + b;
    const double mag = std::abs(sum);
    if (mag == 0.0) throw EvaluationError("bessel_i asymptotic: cancellation");
    const double err = (std::abs(a) * (grow.rel_err + kEps * std::abs(z)) +
                        std::abs(b) * (decay.rel_err + kEps * (std::abs(z) + std::abs(nu)))) /
                       mag;
    return {pre * sum, err, Regime::asymptotic};
}

// J and I in the left half plane: f_nu(z) = e^{+-i pi nu} f_nu(z e^{-+i pi}), which
// moves the argument into |ph z| <= pi/2 where the expansions hold.
template <class F>
AccuracyReport left_half_rotated(F&& eval, Complex nu, Complex z) {
    if (z.real() >= 0.0) return eval(nu, z);
    const double sgn = z.imag() >= 0.0 ? 1.0 : -1.0;
    AccuracyReport r = eval(nu, -z);
    r.value *= std::exp(sgn * kI * kPi * nu);
    r.est_rel_err += kEps * kPi * std::abs(nu);
    return r;
}

// ---------------------------------------------------------------------------
// Integral representation
// ---------------------------------------------------------------------------

// K_nu(z) = exp(-z) int_0^T exp(-z (cosh t - 1)) cosh(nu t) dt, Re z > 0, where
// T is where the integrand bound drops below 1e-18.
AccuracyReport k_integral(Complex nu, Complex z) {
    if (!(z.real() > 0.0)) throw EvaluationError("bessel_k integral: requires Re z > 0");
    const double rz = z.real(), rn = std::abs(nu.real());
    constexpr double kCut = 41.5;  // -log(1e-18)
    double T = 0.5;
    while (rz * (std::cosh(T) - 1.0) - rn * T < kCut + std::log1p(rn * T)) {
        T += 0.25;
        if (T > 60.0) throw EvaluationError("bessel_k integral: no truncation point");
    }
    auto integrand = [&](double t) {
        // cosh(t) - 1 = 2 sinh^2(t/2) avoids cancellation near t = 0.
        const double sh = std::sinh(0.5 * t);
        return std::exp(-z * (2.0 * sh * sh)) * std::cosh(nu * t);
    };
    const int panels = std::clamp(static_cast<int>(T * (1.0 + std::abs(nu.imag()) + std::abs(z.imag()) * 0.2)), 8, 400);
    const detail::QuadratureResult q = detail::integrate(integrand, 0.0, T, panels, 1e-15, 4.0 * kEps);
    const double mag = std::abs(q.value);
    if (mag == 0.0) throw EvaluationError("bessel_k integral: vanishing integral");
    double err = (q.abs_error + 8.0 * kEps * q.abs_integral) / mag + kEps * std::abs(z);
    if (!q.converged) err = std::max(err, 1e-7);
    return {std::exp(-z) * q.value, err, Regime::integral};
}

// H^(1)_nu(w) = 2/(pi i) e^{-i nu pi/2} K_nu(-i w), valid for Im w > 0.
AccuracyReport hankel1_from_k_integral(Complex nu, Complex w) {
    if (!(w.imag() > 0.0)) throw EvaluationError("hankel integral route: requires Im w > 0");
    const AccuracyReport k = k_integral(nu, -kI * w);
    const Complex v = 2.0 / (kPi * kI) * std::exp(-0.5 * kI * kPi * nu) * k.value;
    return {v, k.est_rel_err + kEps * std::abs(nu), Regime::integral};
}

// ---------------------------------------------------------------------------
// Conjugation canonicalisation
// ---------------------------------------------------------------------------

bool lower_half(Complex nu, Complex z) {
    return z.imag() < 0.0 || (z.imag() == 0.0 && z.real() > 0.0 && nu.imag() < 0.0);
}

AccuracyReport conj_report(AccuracyReport r) {
    r.value = std::conj(r.value);
    return r;
}

AccuracyReport hankel1_impl(Complex nu, Complex z);

AccuracyReport bessel_j_impl(Complex nu, Complex z) {
    const double r = std::abs(z);
    std::vector<Candidate> c;
    auto series = [=] { return ascending_series(nu, z, -1.0); };
    auto asym = [=] { return left_half_rotated(j_asymptotic, nu, z); };
    if (r <= kSeriesRadius) {
        c = {series};
        if (r > 4.0) c.push_back(asym);
    } else if (r < kAsymptoticRadius) {
        c = {series, asym};
    } else {
        c = {asym, series};
    }
    return dispatch(c, "bessel_j");
}

AccuracyReport hankel1_impl(Complex nu, Complex z) {
    if (z == 0.0) throw EvaluationError("hankel1: z = 0");
    const double r = std::abs(z);
    auto series = [=] {
        try {
            return hankel_series_combo(nu, z, 1);
        } catch (const NearIntegerOrderError&) {
            return order_average([&](Complex n) { return hankel_series_combo(n, z, 1); }, nu, "hankel1");
        }
    };
    auto asym = [=] { return hankel_asymptotic(nu, z, 1); };
    auto integral = [=] { return hankel1_from_k_integral(nu, z); };
    // Lower half plane: H^(1) = 2J - H^(2), with H^(2)(z) = conj(H^(1)(conj z)) decaying there.
    auto reflected = [=] {
        const AccuracyReport j = bessel_j_impl(nu, z);
        const AccuracyReport h2 = conj_report(hankel1_impl(std::conj(nu), std::conj(z)));
        const Complex v = 2.0 * j.value - h2.value;
        const double mag = std::abs(v);
        if (mag == 0.0) throw EvaluationError("hankel1: cancellation in 2J - H2");
        const double err =
            (2.0 * std::abs(j.value) * j.est_rel_err + std::abs(h2.value) * h2.est_rel_err) / mag + kEps;
        return AccuracyReport{v, err, std::max(j.regime, h2.regime)};
    };
    std::vector<Candidate> c;
    const bool upper = z.imag() > 0.0;
    const bool lower = z.imag() < 0.0;
    if (r <= kSeriesRadius) {
        c = {series};
        if (upper) c.push_back(integral);
        if (r > 4.0) c.push_back(asym);
    } else if (r < kAsymptoticRadius) {
        if (upper) c.push_back(integral);
        c.push_back(asym);
        if (lower) c.push_back(reflected);
        c.push_back(series);
    } else {
        c.push_back(asym);
        if (upper) c.push_back(integral);
        if (lower) c.push_back(reflected);
        c.push_back(series);
    }
    return dispatch(c, "hankel1");
}

AccuracyReport bessel_i_impl(Complex nu, Complex z) {
    const double r = std::abs(z);
    auto series = [=] { return ascending_series(nu, z, 1.0); };
    auto asym = [=] { return left_half_rotated(i_asymptotic, nu, z); };
    std::vector<Candidate> c;
    if (r <= kSeriesRadius) {
        c = {series};
        if (r > 4.0) c.push_back(asym);
    } else if (r < kAsymptoticRadius) {
        c = {series, asym};
    } else {
        c = {asym, series};
    }
    return dispatch(c, "bessel_i");
}

AccuracyReport bessel_k_impl(Complex nu, Complex z) {
    if (z == 0.0) throw EvaluationError("bessel_k: z = 0");
    const double r = std::abs(z);
    auto series = [=] {
        try {
            return k_series_combo(nu, z);
        } catch (const NearIntegerOrderError&) {
            return order_average([&](Complex n) { return k_series_combo(n, z); }, nu, "bessel_k");
        }
    };
    auto asym = [=] { return k_asymptotic(nu, z); };
    auto integral = [=] { return k_integral(nu, z); };
    std::vector<Candidate> c;
    const bool right = z.real() > 0.0;
    if (r <= kSeriesRadius) {
        c = {series};
        if (right) c.push_back(integral);
        if (r > 4.0) c.push_back(asym);
    } else if (r < kAsymptoticRadius) {
        if (right) c.push_back(integral);
        c.push_back(asym);
        c.push_back(series);
    } else {
        c.push_back(asym);
        if (right) c.push_back(integral);
        c.push_back(series);
    }
    return dispatch(c, "bessel_k");
}

AccuracyReport checked(AccuracyReport r, const char* what) {
    require_finite(r, what);
    return r;
}

// C_{nu-1} * sa - (nu/z) C_nu * sb
AccuracyReport recurrence_derivative(const AccuracyReport& lower, const AccuracyReport& value, Complex nu,
                                     Complex z, double sign_lower) {
    const Complex a = sign_lower * lower.value;
    const Complex b = (nu / z) * value.value;
    const Complex d = a - b;
    const double mag = std::abs(d);
    const double scale = std::abs(a) * (lower.est_rel_err + kEps) + std::abs(b) * (value.est_rel_err + 2 * kEps);
    const double err = mag > 0.0 ? scale / mag : (scale == 0.0 ? 0.0 : 1.0);
    return {d, err, std::max(lower.regime, value.regime)};
}

}  // namespace

std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::series: return "series";
        case Regime::asymptotic: return "asymptotic";
        case Regime::integral: return "integral";
    }
    return "unknown";
}

Complex gamma(Complex z) {
    if (nonpositive_integer(z, 1e-12)) throw PoleError("gamma: pole at non-positive integer");
    if (z.real() < 0.5) return kPi / (sin_pi(z) * stirling_gamma(1.0 - z));
    return stirling_gamma(z);
}

Complex rgamma(Complex z) {
    if (z.real() < 0.5) {
        if (auto n = nonpositive_integer(z, 0.0)) return 0.0;
        return sin_pi(z) * stirling_gamma(1.0 - z) / kPi;
    }
    return 1.0 / stirling_gamma(z);
}

AccuracyReport bessel_j(Complex nu, Complex z) {
    if (lower_half(nu, z)) return conj_report(bessel_j(std::conj(nu), std::conj(z)));
    return checked(bessel_j_impl(nu, z), "bessel_j");
}

AccuracyReport bessel_i(Complex nu, Complex z) {
    if (lower_half(nu, z)) return conj_report(bessel_i(std::conj(nu), std::conj(z)));
    return checked(bessel_i_impl(nu, z), "bessel_i");
}

AccuracyReport bessel_k(Complex nu, Complex z) {
    if (lower_half(nu, z)) return conj_report(bessel_k(std::conj(nu), std::conj(z)));
    return checked(bessel_k_impl(nu, z), "bessel_k");
}

AccuracyReport hankel1(Complex nu, Complex z) { return checked(hankel1_impl(nu, z), "hankel1"); }

AccuracyReport hankel2(Complex nu, Complex z) {
    return checked(conj_report(hankel1_impl(std::conj(nu), std::conj(z))), "hankel2");
}

AccuracyReport bessel_j_dz(Complex nu, Complex z) {
    return recurrence_derivative(bessel_j(nu - 1.0, z), bessel_j(nu, z), nu, z, 1.0);
}

AccuracyReport bessel_i_dz(Complex nu, Complex z) {
    return recurrence_derivative(bessel_i(nu - 1.0, z), bessel_i(nu, z), nu, z, 1.0);
}

AccuracyReport bessel_k_dz(Complex nu, Complex z) {
    return recurrence_derivative(bessel_k(nu - 1.0, z), bessel_k(nu, z), nu, z, -1.0);
}

AccuracyReport hankel1_dz(Complex nu, Complex z) {
    return recurrence_derivative(hankel1(nu - 1.0, z), hankel1(nu, z), nu, z, 1.0);
}

AccuracyReport hankel2_dz(Complex nu, Complex z) {
    return recurrence_derivative(hankel2(nu - 1.0, z), hankel2(nu, z), nu, z, 1.0);
}

namespace {
ValueAndDerivative pack(const AccuracyReport& v, const AccuracyReport& d) {
    return {v.value, d.value, std::max(v.est_rel_err, d.est_rel_err)};
}
}  // namespace

ValueAndDerivative hankel1_with_dz(Complex nu, Complex z) {
    const AccuracyReport v = hankel1(nu, z);
    return pack(v, recurrence_derivative(hankel1(nu - 1.0, z), v, nu, z, 1.0));
}

ValueAndDerivative hankel2_with_dz(Complex nu, Complex z) {
    const AccuracyReport v = hankel2(nu, z);
    return pack(v, recurrence_derivative(hankel2(nu - 1.0, z), v, nu, z, 1.0));
}

ValueAndDerivative bessel_k_with_dz(Complex nu, Complex z) {
    const AccuracyReport v = bessel_k(nu, z);
    return pack(v, recurrence_derivative(bessel_k(nu - 1.0, z), v, nu, z, -1.0));
}

// ---------------------------------------------------------------------------
// Kummer U
// ---------------------------------------------------------------------------

namespace {

// M(a, b, z) = sum (a)_k / (b)_k z^k / k!
AccuracyReport kummer_m_series(Complex a, Complex b, Complex z) {
    Complex term = 1.0, sum = 1.0;
    double abs_sum = 1.0;
    int k = 0;
    for (; k < 2000; ++k) {
        term *= (a + static_cast<double>(k)) / ((b + static_cast<double>(k)) * static_cast<double>(k + 1)) * z;
        sum += term;
        const double t = std::abs(term);
        abs_sum += t;
        if (t == 0.0 || (k > std::abs(z) && t <= 0.25 * kEps * std::abs(sum))) break;
    }
    const double mag = std::abs(sum);
    return {sum, mag > 0.0 ? (2.0 + 0.01 * k) * kEps * abs_sum / mag : 1.0, Regime::series};
}

AccuracyReport kummer_u_polynomial(int n, Complex b, Complex z) {
    // U(-n, b, z) = (-1)^n (b)_n M(-n, b, z)
    Complex poch = 1.0;
    for (int k = 0; k < n; ++k) poch *= b + static_cast<double>(k);
    AccuracyReport m = kummer_m_series(static_cast<double>(-n), b, z);
    m.value *= (n % 2 ? -1.0 : 1.0) * poch;
    return m;
}

AccuracyReport kummer_u_series(Complex a, Complex b, Complex z) {
    if (is_integer(b, 1e-8)) throw EvaluationError("kummer_u series: integer b");
    const AccuracyReport m1 = kummer_m_series(a, b, z);
    const AccuracyReport m2 = kummer_m_series(a - b + 1.0, 2.0 - b, z);
    const Complex c1 = gamma(1.0 - b) * rgamma(a - b + 1.0);
    const Complex c2 = gamma(b - 1.0) * rgamma(a) * cpow(z, 1.0 - b);
    const Complex t1 = c1 * m1.value, t2 = c2 * m2.value;
    const Complex v = t1 + t2;
    const double mag = std::abs(v);
    if (mag == 0.0) throw EvaluationError("kummer_u series: cancellation");
    const double err = (std::abs(t1) * (m1.est_rel_err + 1e-14) + std::abs(t2) * (m2.est_rel_err + 1e-14)) / mag;
    return {v, err, Regime::series};
}

AccuracyReport kummer_u_asymptotic(Complex a, Complex b, Complex z) {
    if (std::abs(std::arg(z)) > 0.9 * kPi) throw EvaluationError("kummer_u asymptotic: sector");
    // U ~ z^{-a} sum (a)_k (a-b+1)_k / k! (-z)^{-k}
    Complex term = 1.0, sum = 1.0;
    double prev = 1.0, last = 0.0;
    const Complex c = a - b + 1.0;
    const double kgrow = std::abs(a) + std::abs(c) + 1.0;
    bool converged = false;
    int k = 0;
    for (; k < 400; ++k) {
        const Complex next = term * (a + static_cast<double>(k)) * (c + static_cast<double>(k)) /
                             (static_cast<double>(k + 1) * (-z));
        const double t = std::abs(next);
        if (t == 0.0) {
            converged = true;
            break;
        }
        if (k > kgrow && t > prev) break;
        term = next;
        sum += term;
        prev = last = t;
        if (t <= 0.5 * kEps * std::abs(sum)) {
            converged = true;
            break;
        }
    }
    const double err = (converged ? 0.0 : last / std::abs(sum)) + (2.0 + 0.02 * k) * kEps +
                       kEps * std::abs(a) * std::abs(std::log(z));
    return {cpow(z, -a) * sum, err, Regime::asymptotic};
}

// U = 1/Gamma(a) int_{-inf}^{inf} exp(a v - z e^v) (1 + e^v)^{b-a-1} dv   (t = e^v)
AccuracyReport kummer_u_integral(Complex a, Complex b, Complex z) {
    if (!(a.real() > 0.0) || !(z.real() > 0.0))
        throw EvaluationError("kummer_u integral: requires Re a > 0 and Re z > 0");
    constexpr double kCut = 41.5;
    const double lo = -(kCut + 5.0) / a.real();
    const Complex e = b - a - 1.0;
    // Upper end: integrand bound exp(Re a v - Re z e^v + max(Re e, 0) log1p(e^v)).
    double hi = 0.0;
    auto log_bound = [&](double v) {
        return a.real() * v - z.real() * std::exp(v) + std::max(e.real(), 0.0) * std::log1p(std::exp(v));
    };
    const double peak = std::max(log_bound(0.0), 0.0);
    while (log_bound(hi) > peak - kCut) {
        hi += 0.25;
        if (hi > 200.0) throw EvaluationError("kummer_u integral: no truncation point");
    }
    auto integrand = [&](double v) {
        const double ev = std::exp(v);
        return std::exp(a * v - z * ev + e * std::log1p(ev));
    };
    const double span = hi - lo;
    const int panels = std::clamp(static_cast<int>(span * (0.5 + 0.5 * std::abs(a.imag()) + 0.1 * std::abs(e.imag()))), 16, 800);
    const detail::QuadratureResult q = detail::integrate(integrand, lo, hi, panels, 1e-15, 4.0 * kEps);
    const double mag = std::abs(q.value);
    if (mag == 0.0) throw EvaluationError("kummer_u integral: vanishing integral");
    double err = (q.abs_error + 8.0 * kEps * q.abs_integral) / mag + 1e-14;
    if (!q.converged) err = std::max(err, 1e-7);
    return {q.value * rgamma(a), err, Regime::integral};
}

}  // namespace

AccuracyReport kummer_u(Complex a, Complex b, Complex z) {
    if (z == 0.0) throw InvalidArgument("kummer_u: z = 0");
    if (auto n = nonpositive_integer(a, 1e-14)) return checked(kummer_u_polynomial(*n, b, z), "kummer_u");
    const double r = std::abs(z);
    std::vector<Candidate> c;
    auto series = [=] { return kummer_u_series(a, b, z); };
    auto asym = [=] { return kummer_u_asymptotic(a, b, z); };
    auto integral = [=] { return kummer_u_integral(a, b, z); };
    if (r >= kAsymptoticRadius) c.push_back(asym);
    if (r < 2.0) c.push_back(series);
    c.push_back(integral);
    if (r >= 2.0) c.push_back(series);
    if (r < kAsymptoticRadius) c.push_back(asym);
    return checked(dispatch(c, "kummer_u"), "kummer_u");
}

}  // namespace ptexp::sf
