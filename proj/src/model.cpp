#include "ptexp/model.hpp"

#include <cmath>
#include <string>

#include "ptexp/special_functions.hpp"

namespace ptexp {

namespace {

const Complex kI{0.0, 1.0};

// Beyond this exponent difference the normalised solution is below e^{-700}.
constexpr double kUnderflowExponent = 700.0;

Complex scale_s(double g) { return std::polar(std::sqrt(std::abs(g)), g > 0.0 ? 0.25 * kPi : -0.25 * kPi); }

void check_denominator(Complex d, const char* what) {
    if (!(std::abs(d) >= 1e-300)) throw DivergenceError(std::string(what) + ": normalising value vanishes");
}

// Solutions for g > 0 only; the public entry points reflect for g < 0.
Complex left_positive(double x, Complex E, const PotentialParams& pp) {
    const Wavenumbers w = wavenumbers(E, pp);
    const Complex nu = kI * w.p * pp.a, z0 = w.s * pp.a, z = z0 * std::exp(-x / pp.a);
    if (z.imag() - z0.imag() > kUnderflowExponent) return 0.0;
    const Complex den = sf::hankel1(nu, z0).value;
    check_denominator(den, "psi_left");
    return sf::hankel1(nu, z).value / den;
}

Complex right_positive(double x, Complex E, const PotentialParams& pp) {
    const Wavenumbers w = wavenumbers(E, pp);
    const Complex mu = kI * w.q * pp.a, z0 = w.s * pp.a, z = z0 * std::exp(x / pp.a);
    if (z.real() - z0.real() > kUnderflowExponent) return 0.0;
    const Complex den = sf::bessel_k(mu, z0).value;
    check_denominator(den, "psi_right");
    return sf::bessel_k(mu, z).value / den;
}

// d/dx C(z0 e^{-x/a}) = -(z/a) C'(z)
Complex left_positive_dx(double x, Complex E, const PotentialParams& pp) {
    const Wavenumbers w = wavenumbers(E, pp);
    const Complex nu = kI * w.p * pp.a, z0 = w.s * pp.a, z = z0 * std::exp(-x / pp.a);
    if (z.imag() - z0.imag() > kUnderflowExponent) return 0.0;
    const Complex den = sf::hankel1(nu, z0).value;
    check_denominator(den, "psi_left_dx");
    return -(z / pp.a) * sf::hankel1_dz(nu, z).value / den;
}

Complex right_positive_dx(double x, Complex E, const PotentialParams& pp) {
    const Wavenumbers w = wavenumbers(E, pp);
    const Complex mu = kI * w.q * pp.a, z0 = w.s * pp.a, z = z0 * std::exp(x / pp.a);
    if (z.real() - z0.real() > kUnderflowExponent) return 0.0;
    const Complex den = sf::bessel_k(mu, z0).value;
    check_denominator(den, "psi_right_dx");
    return (z / pp.a) * sf::bessel_k_dz(mu, z).value / den;
}

}  // namespace

void validate(const PotentialParams& params) {
    if (!std::isfinite(params.a) || !(params.a > 0.0)) throw InvalidArgument("a must be positive");
    if (!std::isfinite(params.g)) throw InvalidArgument("g must be finite");
    if (params.g == 0.0) throw InvalidArgument("g must be nonzero");
}

NormalizedParams normalize(const PotentialParams& params) {
    validate(params);
    return {{params.a, std::abs(params.g)}, params.g < 0.0};
}

Complex potential(double x, const PotentialParams& params) {
    validate(params);
    // expm1 keeps V(x) ~ 2 i g x / a accurate near the origin.
    const double m = std::expm1(2.0 * std::abs(x) / params.a);
    return {0.0, x >= 0.0 ? params.g * m : -params.g * m};
}

Wavenumbers wavenumbers(Complex E, const PotentialParams& params) {
    validate(params);
    const Complex ig{0.0, params.g};
    Wavenumbers w{std::sqrt(E - ig), std::sqrt(E + ig), scale_s(params.g)};
    const double tol = 1e-12 * std::max(1.0, std::abs(E) + std::abs(params.g));
    if (std::abs(w.p * w.p - (E - ig)) > tol || std::abs(w.q * w.q - (E + ig)) > tol)
        throw SolverFailure("wavenumbers: square root check failed");
    return w;
}

Complex psi_left(double x, Complex E, const PotentialParams& params) {
    if (x > 0.0) throw InvalidArgument("psi_left requires x <= 0");
    const NormalizedParams n = normalize(params);
    if (x == 0.0) return 1.0;
    return n.mirrored ? right_positive(-x, E, n.params) : left_positive(x, E, n.params);
}

Complex psi_right(double x, Complex E, const PotentialParams& params) {
    if (x < 0.0) throw InvalidArgument("psi_right requires x >= 0");
    const NormalizedParams n = normalize(params);
    if (x == 0.0) return 1.0;
    return n.mirrored ? left_positive(-x, E, n.params) : right_positive(x, E, n.params);
}

Complex psi_left_dx(double x, Complex E, const PotentialParams& params) {
    if (x > 0.0) throw InvalidArgument("psi_left_dx requires x <= 0");
    const NormalizedParams n = normalize(params);
    return n.mirrored ? -right_positive_dx(-x, E, n.params) : left_positive_dx(x, E, n.params);
}

Complex psi_right_dx(double x, Complex E, const PotentialParams& params) {
    if (x < 0.0) throw InvalidArgument("psi_right_dx requires x >= 0");
    const NormalizedParams n = normalize(params);
    return n.mirrored ? -left_positive_dx(-x, E, n.params) : right_positive_dx(x, E, n.params);
}

Complex psi(double x, Complex E, const PotentialParams& params) {
    return x <= 0.0 ? psi_left(x, E, params) : psi_right(x, E, params);
}

OriginValues origin_values(Complex E, const PotentialParams& params) {
    const NormalizedParams n = normalize(params);
    const Wavenumbers w = wavenumbers(E, n.params);
    const double a = n.params.a;
    const Complex z0 = w.s * a;
    const sf::ValueAndDerivative h = sf::hankel1_with_dz(kI * w.p * a, z0);
    const sf::ValueAndDerivative k = sf::bessel_k_with_dz(kI * w.q * a, z0);
    return {w.s, h.value, h.derivative, k.value, k.derivative, std::max(h.est_rel_err, k.est_rel_err)};
}

Complex log_derivative_mismatch(Complex E, const PotentialParams& params) {
    const OriginValues o = origin_values(E, params);
    check_denominator(o.h, "log_derivative_mismatch");
    check_denominator(o.k, "log_derivative_mismatch");
    return -o.s * (o.dh / o.h + o.dk / o.k);
}

}  // namespace ptexp
