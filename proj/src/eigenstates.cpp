#include "ptexp/eigenstates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parallel.hpp"

namespace ptexp {

namespace {

void require_symmetric(const std::vector<double>& x) {
    const std::size_t n = x.size();
    if (n < 3) throw InvalidArgument("grid needs at least 3 points");
    const double L = std::max(std::abs(x.front()), std::abs(x.back()));
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(x[i] + x[n - 1 - i]) > 1e-12 * L) throw InvalidArgument("grid is not symmetric about 0");
}

void require_uniform(const std::vector<double>& x) {
    const double h = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
    for (std::size_t i = 1; i < x.size(); ++i)
        if (std::abs(x[i] - x[i - 1] - h) > 1e-9 * h) throw InvalidArgument("grid is not uniform");
}

double tail(double end, double inner, double h) {
    if (end == 0.0) return 0.0;
    if (!(end < inner)) return std::numeric_limits<double>::infinity();
    return end * h / std::log(inner / end);
}

Integral simpson(const std::vector<double>& x, const std::vector<Complex>& f) {
    require_uniform(x);
    const std::size_t n = x.size();
    const double h = (x.back() - x.front()) / static_cast<double>(n - 1);
    const std::size_t m = (n % 2 == 1) ? n : n - 1;  // odd count handled by Simpson
    Complex s = f[0] + f[m - 1];
    for (std::size_t i = 1; i + 1 < m; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
    Complex v = s * h / 3.0;
    if (m < n) v += 0.5 * h * (f[n - 2] + f[n - 1]);
    Integral r;
    r.value = v;
    r.tail_error = tail(std::abs(f[0]), std::abs(f[1]), h) + tail(std::abs(f[n - 1]), std::abs(f[n - 2]), h);
    return r;
}

void require_decayed(const WaveSamples& w) {
    const double m = max_abs(w);
    if (std::abs(w.values.front()) > 1e-3 * m || std::abs(w.values.back()) > 1e-3 * m)
        throw TailNotDecayed("state has not decayed to 1e-3 of its maximum at the grid ends");
}

}  // namespace

std::string to_string(Normalization n) { return n == Normalization::origin_one ? "origin_one" : "c_normalized"; }

std::vector<double> symmetric_grid(double half_width, std::size_t n) {
    if (!(half_width > 0.0)) throw InvalidArgument("grid half-width must be positive");
    if (n < 3 || n % 2 == 0) throw InvalidArgument("grid needs an odd number of points, at least 3");
    std::vector<double> x(n);
    const std::size_t c = n / 2;
    const double h = half_width / static_cast<double>(c);
    for (std::size_t i = 0; i <= c; ++i) {
        x[c + i] = i == c ? half_width : h * static_cast<double>(i);
        x[c - i] = -x[c + i];
    }
    return x;
}

std::vector<double> default_grid(const PotentialParams& params) {
    validate(params);
    return symmetric_grid(8.0 * params.a, 4001);
}

WaveSamples evaluate_state(Complex E, const PotentialParams& params, const std::vector<double>& grid,
                           unsigned threads) {
    validate(params);
    WaveSamples w;
    w.grid = grid;
    w.E = E;
    w.values.resize(grid.size());
    detail::parallel_for(grid.size(), threads, [&](std::size_t i) { w.values[i] = psi(grid[i], E, params); });
    return w;
}

WaveSamples pt_transform(const WaveSamples& w) {
    require_symmetric(w.grid);
    WaveSamples out = w;
    const std::size_t n = w.grid.size();
    for (std::size_t i = 0; i < n; ++i) out.values[i] = std::conj(w.values[n - 1 - i]);
    out.E = std::conj(w.E);
    out.c_norm_constant = std::conj(w.c_norm_constant);
    return out;
}

ParitySplit parity_split(const WaveSamples& w) {
    require_symmetric(w.grid);
    ParitySplit p;
    const std::size_t n = w.grid.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Complex v = w.values[i], m = w.values[n - 1 - i];
        p.even_part.push_back(v.real());
        p.odd_part.push_back(v.imag());
        p.even_defect = std::max(p.even_defect, std::abs(v.real() - m.real()));
        p.odd_defect = std::max(p.odd_defect, std::abs(v.imag() + m.imag()));
    }
    return p;
}

Integral overlap(const WaveSamples& w1, const WaveSamples& w2) {
    if (w1.grid != w2.grid) throw InvalidArgument("overlap needs identical grids");
    require_decayed(w1);
    require_decayed(w2);
    std::vector<Complex> f(w1.values.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = w1.values[i] * w2.values[i];
    return simpson(w1.grid, f);
}

Integral pt_inner(const WaveSamples& w1, const WaveSamples& w2) { return overlap(pt_transform(w1), w2); }

WaveSamples c_normalize(const WaveSamples& w) {
    const Integral self = overlap(w, w);
    if (!(std::abs(self.value) > 0.0)) throw SolverFailure("c-normalisation: vanishing self-overlap");
    const Complex c = std::sqrt(self.value);
    WaveSamples out = w;
    for (auto& v : out.values) v /= c;
    out.normalization = Normalization::c_normalized;
    out.c_norm_constant = w.c_norm_constant * c;
    return out;
}

double max_abs(const WaveSamples& w) {
    double m = 0.0;
    for (const auto& v : w.values) m = std::max(m, std::abs(v));
    return m;
}

double relative_sup_distance(const WaveSamples& a, const WaveSamples& b) {
    if (a.grid != b.grid) throw InvalidArgument("comparison needs identical grids");
    double d = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) d = std::max(d, std::abs(a.values[i] - b.values[i]));
    return d / max_abs(a);
}

double best_fit_phase(const WaveSamples& a, const WaveSamples& b) {
    if (a.grid != b.grid) throw InvalidArgument("comparison needs identical grids");
    Complex s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) s += std::conj(b.values[i]) * a.values[i];
    return std::arg(s);
}

ResidualReport schrodinger_residual(const WaveSamples& w, const PotentialParams& params) {
    require_uniform(w.grid);
    const std::size_t n = w.grid.size();
    const double h = (w.grid.back() - w.grid.front()) / static_cast<double>(n - 1);
    const double scale = std::max(1.0, std::abs(w.E)) * max_abs(w);
    ResidualReport r;
    for (std::size_t i = 2; i + 2 < n; ++i) {
        const Complex V = potential(w.grid[i], params);
        const auto& f = w.values;
        const Complex d2 = (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) / (12.0 * h * h);
        const Complex res = -d2 + (V - w.E) * f[i];
        r.max_residual = std::max(r.max_residual, std::abs(res) / scale);
        ++r.points;
    }
    return r;
}

}  // namespace ptexp
