#include "ptexp/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parallel.hpp"
#include "ptexp/special_functions.hpp"

namespace ptexp {

namespace {

const Complex kI{0.0, 1.0};

struct Point {
    ReflectionValue v;
    double D = std::numeric_limits<double>::quiet_NaN();
};

Point evaluate(double E, const PotentialParams& params) {
    const OriginValues o = origin_values(E, params);
    const NormalizedParams n = normalize(params);
    const Wavenumbers w = wavenumbers(E, n.params);
    const sf::ValueAndDerivative h2 = sf::hankel2_with_dz(-kI * w.p * n.params.a, o.s * n.params.a);
    Point pt;
    pt.v.numerator = kI * (o.dk * h2.value + o.k * h2.derivative);
    pt.v.denominator = o.dh * o.k + o.h * o.dk;
    pt.v.r = pt.v.numerator / pt.v.denominator;
    pt.D = (-o.s * (o.dh / o.h + o.dk / o.k)).real();
    return pt;
}

}  // namespace

ReflectionValue reflection(double E, const PotentialParams& params) {
    if (!(E > 0.0)) throw InvalidArgument("reflection amplitude needs E > 0");
    return evaluate(E, params).v;
}

Complex reflection_amplitude(double E, const PotentialParams& params) { return reflection(E, params).r; }

std::vector<double> uniform_grid(double E_lo, double E_hi, std::size_t n) {
    if (n < 2 || !(E_lo < E_hi)) throw InvalidArgument("uniform grid needs n >= 2 and E_lo < E_hi");
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = E_lo + (E_hi - E_lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    g.back() = E_hi;
    return g;
}

std::vector<ReflectivitySample> reflectivity_scan(const PotentialParams& params, const std::vector<double>& E_grid,
                                                  unsigned threads) {
    validate(params);
    for (std::size_t i = 0; i < E_grid.size(); ++i) {
        if (!(E_grid[i] > 0.0)) throw InvalidArgument("reflectivity grid must be positive");
        if (i > 0 && !(E_grid[i] > E_grid[i - 1])) throw InvalidArgument("reflectivity grid must be strictly increasing");
    }
    const std::size_t n = E_grid.size();
    std::vector<ReflectivitySample> out(n);
    std::vector<double> D(n, std::numeric_limits<double>::quiet_NaN()), absf(n, std::numeric_limits<double>::quiet_NaN());
    detail::parallel_for(n, threads, [&](std::size_t i) {
        out[i].E = E_grid[i];
        try {
            const Point p = evaluate(E_grid[i], params);
            out[i].r = p.v.r;
            out[i].R = std::norm(p.v.r);
            D[i] = p.D;
            absf[i] = std::abs(p.v.denominator);
            if (!std::isfinite(out[i].R)) out[i].error = "non-finite reflectivity";
        } catch (const Error& e) {
            out[i].error = e.what();
        }
    });
    std::vector<double> finite;
    for (double f : absf)
        if (std::isfinite(f)) finite.push_back(f);
    double scale = 0.0;
    if (!finite.empty()) {
        std::nth_element(finite.begin(), finite.begin() + static_cast<std::ptrdiff_t>(finite.size() / 2), finite.end());
        scale = finite[finite.size() / 2];
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (std::isfinite(absf[i]) && absf[i] < 1e-10 * scale) {
            out[i].pole_proximity = true;
            out[i].pole_flag = true;
        }
    }
    auto ad = [&](std::ptrdiff_t i) {
        return i < 0 || i >= static_cast<std::ptrdiff_t>(n) ? std::numeric_limits<double>::infinity() : std::abs(D[static_cast<std::size_t>(i)]);
    };
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!std::isfinite(D[i]) || !std::isfinite(D[i + 1])) continue;
        if (!((D[i] <= 0.0 && D[i + 1] > 0.0) || (D[i] >= 0.0 && D[i + 1] < 0.0))) continue;
        const auto j = static_cast<std::ptrdiff_t>(i);
        // At a pole of D the bordering |D| values are the largest locally.
        if (std::max(ad(j), ad(j + 1)) < std::max(ad(j - 1), ad(j + 2))) out[i].pole_flag = out[i + 1].pole_flag = true;
    }
    return out;
}

std::vector<PoleCluster> pole_clusters(const PotentialParams& params, const std::vector<ReflectivitySample>& samples) {
    std::vector<PoleCluster> clusters;
    const std::size_t n = samples.size();
    for (std::size_t i = 0; i < n;) {
        if (!samples[i].pole_flag) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < n && samples[j + 1].pole_flag) ++j;
        PoleCluster c;
        c.first = i;
        c.last = j;
        double lo = samples[i > 0 ? i - 1 : i].E, hi = samples[j + 1 < n ? j + 1 : j].E;
        // Golden-section maximisation of R; it diverges at the pole.
        const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
        auto R = [&](double E) {
            try {
                return std::norm(reflection(E, params).r);
            } catch (const Error&) {
                return 0.0;
            }
        };
        double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
        double r1 = R(x1), r2 = R(x2);
        for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
            if (r1 > r2) {
                hi = x2;
                x2 = x1;
                r2 = r1;
                x1 = hi - phi * (hi - lo);
                r1 = R(x1);
            } else {
                lo = x1;
                x1 = x2;
                r1 = r2;
                x2 = lo + phi * (hi - lo);
                r2 = R(x2);
            }
        }
        c.E_pole = r1 > r2 ? x1 : x2;
        c.R_pole = std::max(r1, r2);
        clusters.push_back(c);
        i = j + 1;
    }
    return clusters;
}

std::vector<std::size_t> finite_maxima(const std::vector<ReflectivitySample>& samples) {
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
        const auto &l = samples[i - 1], &m = samples[i], &r = samples[i + 1];
        if (l.pole_flag || m.pole_flag || r.pole_flag) continue;
        if (!m.error.empty() || !l.error.empty() || !r.error.empty()) continue;
        if (m.R > l.R && m.R >= r.R) out.push_back(i);
    }
    return out;
}

}  // namespace ptexp
