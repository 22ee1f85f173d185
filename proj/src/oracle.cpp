#include "ptexp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ptexp {

namespace {

constexpr double kSeedPotentialCap = 1e6;

Complex potential_value(double x, double a, double g) {
    const double m = std::abs(std::expm1(2.0 * std::abs(x) / a));
    return {0.0, (x > 0.0 ? g : (x < 0.0 ? -g : 0.0)) * m};
}

// Root of z^2 + 1 scaled so that |g + r| is the larger choice.
Complex shift_root(Complex g) {
    const Complex r = std::sqrt(g * g + 1.0);
    return std::abs(g + r) >= std::abs(g - r) ? r : -r;
}

TridiagonalMatrix restrict_to(const TridiagonalMatrix& m, std::size_t lo, std::size_t hi) {
    TridiagonalMatrix r;
    r.h = m.h;
    r.diag.assign(m.diag.begin() + static_cast<std::ptrdiff_t>(lo), m.diag.begin() + static_cast<std::ptrdiff_t>(hi));
    r.x.assign(m.x.begin() + static_cast<std::ptrdiff_t>(lo), m.x.begin() + static_cast<std::ptrdiff_t>(hi));
    r.off.assign(m.off.begin() + static_cast<std::ptrdiff_t>(lo), m.off.begin() + static_cast<std::ptrdiff_t>(hi - 1));
    return r;
}

}  // namespace

OracleConfig default_oracle_config(double a) {
    OracleConfig c;
    c.L = 12.0 * std::max(a, 1.0);
    return c;
}

TridiagonalMatrix build_hamiltonian(double a, double g, const OracleConfig& cfg) {
    if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument("a must be positive");
    if (!std::isfinite(g)) throw InvalidArgument("g must be finite");
    if (!(cfg.L > 0.0) || !std::isfinite(cfg.L)) throw InvalidArgument("oracle half-width must be positive");
    if (cfg.n < 100) throw InvalidArgument("oracle needs at least 100 grid points");
    TridiagonalMatrix m;
    const auto n = static_cast<std::size_t>(cfg.n);
    m.h = 2.0 * cfg.L / static_cast<double>(n + 1);
    const double inv = 1.0 / (m.h * m.h);
    m.diag.resize(n);
    m.x.resize(n);
    m.off.assign(n - 1, Complex(-inv, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        // Index symmetric about the centre so that x[n-1-i] = -x[i] exactly.
        const double k = static_cast<double>(i + 1) - 0.5 * static_cast<double>(n + 1);
        m.x[i] = k * m.h;
        m.diag[i] = 2.0 * inv + potential_value(m.x[i], a, g);
    }
    return m;
}

std::vector<Complex> tridiagonal_eigenvalues(const TridiagonalMatrix& mat) {
    const std::size_t n = mat.diag.size();
    std::vector<Complex> d = mat.diag;
    std::vector<Complex> e(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) e[i] = mat.off[i];
    const double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        for (;;) {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m == l) break;
            if (++iter > 60) throw SolverFailure("tridiagonal QL: no convergence");
            Complex g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            // An exceptional shift every 10 iterations breaks cycles.
            if (iter % 10 == 0) g *= Complex(1.0, 0.3);
            Complex r = shift_root(g);
            g = d[m] - d[l] + e[l] / (g + r);
            Complex s = 1.0, c = 1.0, p = 0.0;
            bool early = false;
            std::size_t i = m;
            while (i-- > l) {
                const Complex f = s * e[i], b = c * e[i];
                r = std::sqrt(f * f + g * g);
                e[i + 1] = r;
                if (std::abs(r) <= eps * (std::abs(f) + std::abs(g))) {
                    // Isotropic rotation: restart this sweep with a perturbed shift.
                    if (std::abs(r) == 0.0 || std::abs(f) + std::abs(g) == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        early = true;
                        break;
                    }
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if (early) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    for (const auto& v : d)
        if (!is_finite(v)) throw SolverFailure("tridiagonal QL: non-finite eigenvalue");
    return d;
}

Complex log_det_derivative(const TridiagonalMatrix& m, Complex E) {
    Complex r = m.diag[0] - E, dr = -1.0;
    Complex sum = dr / r;
    for (std::size_t k = 1; k < m.diag.size(); ++k) {
        const Complex e2 = m.off[k - 1] * m.off[k - 1];
        const Complex rn = m.diag[k] - E - e2 / r;
        const Complex drn = -1.0 + e2 * dr / (r * r);
        r = rn;
        dr = drn;
        sum += dr / r;
    }
    return sum;
}

Complex polish_eigenvalue(const TridiagonalMatrix& m, Complex seed, double* noise) {
    Complex E = seed;
    double prev = std::numeric_limits<double>::infinity();
    if (noise) *noise = 0.0;
    for (int it = 0; it < 60; ++it) {
        const double unit = std::max(1.0, std::abs(E));
        Complex ld = log_det_derivative(m, E);
        if (!is_finite(ld)) ld = log_det_derivative(m, E + Complex(1e-14 * unit, 1e-14 * unit));
        if (!is_finite(ld)) return E;  // E sits on an eigenvalue to rounding
        Complex dE = -1.0 / ld;
        if (std::abs(dE) > 0.5 * unit) dE *= 0.5 * unit / std::abs(dE);
        E += dE;
        const double step = std::abs(dE);
        if (step <= 1e-14 * unit) return E;
        // Ill-conditioned eigenvalues reach a rounding floor and wander on it.
        if (step <= 1e-6 * unit && step >= 0.3 * prev) {
            if (noise) *noise = step;
            return E;
        }
        prev = step;
    }
    throw SolverFailure("determinant Newton did not converge");
}

std::vector<Complex> eigenvector(const TridiagonalMatrix& m, Complex E) {
    const std::size_t n = m.diag.size();
    const Complex shift = E + Complex(1e-10, 1e-10) * std::max(1.0, std::abs(E));
    std::vector<Complex> v(n, 1.0), c(n), w(n);
    for (int it = 0; it < 3; ++it) {
        // Thomas elimination for (M - shift) w = v.
        Complex piv = m.diag[0] - shift;
        c[0] = m.off.empty() ? Complex(0.0) : m.off[0] / piv;
        w[0] = v[0] / piv;
        for (std::size_t k = 1; k < n; ++k) {
            piv = m.diag[k] - shift - m.off[k - 1] * c[k - 1];
            if (k + 1 < n) c[k] = m.off[k] / piv;
            w[k] = (v[k] - m.off[k - 1] * w[k - 1]) / piv;
        }
        for (std::size_t k = n - 1; k-- > 0;) w[k] -= c[k] * w[k + 1];
        double big = 0.0;
        for (const auto& z : w) big = std::max(big, std::abs(z));
        if (!(big > 0.0) || !std::isfinite(big)) throw SolverFailure("inverse iteration broke down");
        for (std::size_t k = 0; k < n; ++k) v[k] = w[k] / big;
    }
    return v;
}

OracleSpectrum diagonalize(const OracleConfig& cfg, double a, double g) {
    OracleSpectrum out;
    out.config = cfg;
    const TridiagonalMatrix full = build_hamiltonian(a, g, cfg);
    out.h = full.h;
    out.ceiling = kPi * kPi / (full.h * full.h) / 10.0;
    const double window = cfg.e_window > 0.0 ? cfg.e_window : 150.0 / (a * a) + 20.0 * std::abs(g);
    out.window = std::min(window, out.ceiling);

    // Seed from the nodes where |V| stays below the cap.
    std::size_t lo = 0, hi = full.diag.size();
    if (g != 0.0) {
        const double x_cap = 0.5 * a * std::log1p(kSeedPotentialCap / std::abs(g));
        while (lo < hi && std::abs(full.x[lo]) > x_cap) ++lo;
        while (hi > lo && std::abs(full.x[hi - 1]) > x_cap) --hi;
    }
    if (hi - lo < 3) throw SolverFailure("oracle: potential exceeds the seeding cap across the whole grid");
    const std::vector<Complex> seeds = tridiagonal_eigenvalues(restrict_to(full, lo, hi));

    TridiagonalMatrix half;
    if (cfg.richardson) {
        OracleConfig c2 = cfg;
        c2.n = 2 * cfg.n + 1;
        half = build_hamiltonian(a, g, c2);
    }

    std::size_t dropped = 0, merged = 0;
    for (const Complex& s : seeds) {
        if (std::abs(s) > 1.5 * out.window) continue;
        OracleEigenvalue ev;
        try {
            double n1 = 0.0, n2 = 0.0;
            ev.E_h = polish_eigenvalue(full, s, &n1);
            ev.E_half = cfg.richardson ? polish_eigenvalue(half, ev.E_h, &n2) : ev.E_h;
            ev.solver_noise = std::max(n1, n2);
        } catch (const SolverFailure&) {
            ++dropped;
            continue;
        }
        if (std::abs(ev.E_h) > out.window) continue;
        if (cfg.richardson) {
            ev.E = (4.0 * ev.E_half - ev.E_h) / 3.0;
            ev.est_disc_err = std::abs(ev.E_half - ev.E_h) + 2.0 * ev.solver_noise;
        } else {
            ev.E = ev.E_h;
            ev.est_disc_err = std::abs(ev.E_h) * full.h * full.h;
        }
        bool dup = false;
        for (const auto& o : out.eigenvalues)
            if (std::abs(o.E_h - ev.E_h) <= 1e-9 * std::max(1.0, std::abs(ev.E_h))) dup = true;
        if (dup) {
            ++merged;
            continue;
        }
        out.eigenvalues.push_back(ev);
    }
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), [](const OracleEigenvalue& x, const OracleEigenvalue& y) {
        return x.E.real() != y.E.real() ? x.E.real() < y.E.real() : x.E.imag() < y.E.imag();
    });
    if (dropped > 0) {
        std::ostringstream os;
        os << "Unpolished: " << dropped << " seed(s) failed to converge on the full grid";
        out.warnings.push_back(os.str());
    }
    if (merged > 0) {
        std::ostringstream os;
        os << "SeedCollision: " << merged << " seed(s) converged onto an eigenvalue already found";
        out.warnings.push_back(os.str());
    }
    return out;
}

OracleSpectrum diagonalize(const OracleConfig& cfg, const PotentialParams& params) {
    validate(params);
    return diagonalize(cfg, params.a, params.g);
}

double conjugate_closure_defect(const OracleSpectrum& s) {
    double worst = 0.0;
    for (const auto& u : s.eigenvalues) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& v : s.eigenvalues) best = std::min(best, std::abs(v.E - std::conj(u.E)));
        worst = std::max(worst, best / std::max(1.0, std::abs(u.E)));
    }
    return worst;
}

}  // namespace ptexp
