#include "ptexp/spectrum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "parallel.hpp"

namespace ptexp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double median(std::vector<double> v) {
    v.erase(std::remove_if(v.begin(), v.end(), [](double x) { return !std::isfinite(x); }), v.end());
    if (v.empty()) return kNaN;
    const std::size_t m = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m), v.end());
    return v[m];
}

std::vector<double> scan_grid(double e_min, double e_max, int per_decade) {
    std::vector<double> grid;
    double decade = std::pow(10.0, std::floor(std::log10(e_min)));
    while (decade < e_max) {
        const double step = 9.0 * decade / per_decade;
        const double hi = std::min(10.0 * decade, e_max);
        // Start on the decade's lattice so grids are nested across e_min.
        double k = std::max(0.0, std::ceil((e_min - decade) / step));
        for (double E = decade + k * step; E < hi; E = decade + (++k) * step)
            if (E >= e_min) grid.push_back(E);
        decade *= 10.0;
    }
    grid.push_back(e_max);
    return grid;
}

bool same_root(Complex x, Complex y) { return std::abs(x - y) <= 1e-6 * std::max(1.0, std::abs(x)); }

EigenvalueRecord make_record(const PotentialParams& params, Complex E, int iters) {
    const OriginValues o = origin_values(E, params);
    const Complex f = o.dh * o.k + o.h * o.dk;
    const double size = std::abs(o.dh * o.k) + std::abs(o.h * o.dk);
    EigenvalueRecord r;
    r.E = E;
    r.kind = classify(E);
    r.residual = std::abs(f);
    r.rel_residual = size > 0.0 ? std::abs(f) / size : kNaN;
    r.newton_iters = iters;
    return r;
}

// F(g, E) = Re D(E; a, g): real-analytic on the real (g, E) plane, zero on the
// real branches.
struct BranchFunction {
    double a;
    double operator()(double g, double E) const { return log_derivative_mismatch(E, {a, g}).real(); }
    double dE(double g, double E) const {
        const double h = 1e-4 * std::max(1.0, std::abs(E));
        return ((*this)(g, E + h) - (*this)(g, E - h)) / (2.0 * h);
    }
    double dg(double g, double E) const {
        const double h = 1e-4 * std::max(1.0, std::abs(g));
        return ((*this)(g + h, E) - (*this)(g - h, E)) / (2.0 * h);
    }
};

// Newton in E at fixed g.
std::optional<double> solve_at_fixed_g(const BranchFunction& F, double g, double E) {
    for (int it = 0; it < 30; ++it) {
        const double d = F.dE(g, E);
        if (d == 0.0 || !std::isfinite(d)) return std::nullopt;
        const double dE = F(g, E) / d;
        E -= dE;
        if (std::abs(dE) <= 1e-12 * std::max(1.0, std::abs(E))) return E;
    }
    return std::nullopt;
}

int real_count(double a, double g) {
    const PotentialParams p{a, g};
    return static_cast<int>(find_real_eigenvalues(p, default_energy_ceiling(p)).eigenvalues.size());
}

// Continuation along F = 0 in the scaled plane (g, E/c). dir = +1 traces
// towards larger g, -1 towards smaller g.
BranchTrace trace_impl(double a, double g_start, double g_end, double E_seed, double step, int dir) {
    BranchTrace trace;
    trace.a = a;
    const BranchFunction F{a};
    const double sdir = static_cast<double>(dir);
    auto beyond = [&](double g) { return sdir * (g - g_end) >= 0.0; };
    try {
        auto E0 = solve_at_fixed_g(F, g_start, E_seed);
        if (!E0) {
            trace.terminated_by = TraceEnd::lost;
            return trace;
        }
        double g = g_start, E = *E0;
        trace.samples.push_back({g, E});
        const double slope0 = -F.dg(g, E) / F.dE(g, E);
        const double c = std::max(1.0, std::isfinite(slope0) ? std::abs(slope0) : 1.0);
        auto tangent = [&](double gg, double EE) {
            const double fg = F.dg(gg, EE), fu = c * F.dE(gg, EE);
            const double n = std::hypot(fg, fu);
            return std::array<double, 2>{fu / n, -fg / n};
        };
        std::array<double, 2> t = tangent(g, E);
        if (sdir * t[0] < 0.0) t = {-t[0], -t[1]};
        double h = step;
        const double h_min = 1e-6 * step;
        int steps = 0;
        while (true) {
            if (++steps > 200000) {
                trace.terminated_by = TraceEnd::lost;
                return trace;
            }
            const double gp = g + h * t[0], up = E / c + h * t[1];
            double gn = gp, un = up;
            bool ok = false;
            for (int it = 0; it < 10; ++it) {
                const double r = F(gn, c * un);
                const double fg = F.dg(gn, c * un), fu = c * F.dE(gn, c * un);
                const double r2 = t[0] * (gn - gp) + t[1] * (un - up);
                const double det = fg * t[1] - fu * t[0];
                if (det == 0.0 || !std::isfinite(det)) break;
                const double dgn = (r * t[1] - fu * r2) / det;
                const double dun = (fg * r2 - r * t[0]) / det;
                gn -= dgn;
                un -= dun;
                if (std::hypot(dgn, dun) <= 1e-11 * (1.0 + std::hypot(gn, un))) {
                    ok = true;
                    break;
                }
            }
            std::array<double, 2> tn{};
            if (ok) {
                tn = tangent(gn, c * un);
                if (tn[0] * t[0] + tn[1] * t[1] < 0.0) tn = {-tn[0], -tn[1]};
                // Reject corrections that wander off the predicted arc or turn sharply.
                ok = std::hypot(gn - gp, un - up) <= 0.5 * h && tn[0] * t[0] + tn[1] * t[1] > 0.95;
            }
            if (!ok) {
                h *= 0.5;
                if (h < h_min) {
                    trace.terminated_by = TraceEnd::lost;
                    return trace;
                }
                continue;
            }
            const double En = c * un;
            if (beyond(gn)) {
                // Land exactly on the end of the range.
                const double w = (g_end - g) / (gn - g);
                auto Ee = solve_at_fixed_g(F, g_end, E + w * (En - E));
                if (!Ee) {
                    trace.terminated_by = TraceEnd::lost;
                    return trace;
                }
                trace.samples.push_back({g_end, *Ee});
                trace.terminated_by = TraceEnd::range_end;
                return trace;
            }
            if (sdir * tn[0] <= 0.0) {
                // The arc has turned back in g: fold between (g, E) and the new point.
                const bool last_further = sdir * (gn - g) > 0.0;
                trace.fold = BranchSample{last_further ? gn : g, last_further ? En : E};
                if (last_further) trace.samples.push_back({gn, En});
                trace.terminated_by = TraceEnd::merged;
                return trace;
            }
            g = gn;
            E = En;
            t = tn;
            trace.samples.push_back({g, E});
            h = std::min(step, 1.5 * h);
        }
    } catch (const Error&) {
        trace.terminated_by = TraceEnd::lost;
        return trace;
    }
}

}  // namespace

std::string to_string(RootKind k) { return k == RootKind::real ? "real" : "complex_pair_member"; }

std::string to_string(TraceEnd t) {
    switch (t) {
        case TraceEnd::merged: return "merged";
        case TraceEnd::range_end: return "range_end";
        case TraceEnd::lost: return "lost";
    }
    return "unknown";
}

RootKind classify(Complex E) {
    return std::abs(E.imag()) <= 1e-8 * std::max(1.0, std::abs(E.real())) ? RootKind::real
                                                                           : RootKind::complex_pair_member;
}

Complex eigen_function(Complex E, const PotentialParams& params) {
    const OriginValues o = origin_values(E, params);
    return o.dh * o.k + o.h * o.dk;
}

double relative_residual(Complex E, const PotentialParams& params) {
    return make_record(params, E, 0).rel_residual;
}

double default_energy_ceiling(const PotentialParams& params) {
    validate(params);
    return 150.0 / (params.a * params.a) + 20.0 * std::abs(params.g);
}

namespace {

// Complex Newton on f; max_dist > 0 abandons iterations that leave the disc
// of that radius around the seed.
std::optional<EigenvalueRecord> newton_impl(const PotentialParams& params, Complex seed, int max_iters,
                                            double max_dist) {
    Complex E = seed;
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= max_iters; ++it) {
        const Complex f = eigen_function(E, params);
        const double h = 1e-6 * std::max(1.0, std::abs(E));
        const Complex d = (eigen_function(E + h, params) - eigen_function(E - h, params)) / (2.0 * h);
        if (d == 0.0 || !is_finite(d)) return std::nullopt;
        Complex dE = f / d;
        // Keep steps local; the scan seeds lie within a grid step of the root.
        const double cap = 0.25 * std::max(1.0, std::abs(E));
        if (std::abs(dE) > cap) dE *= cap / std::abs(dE);
        E -= dE;
        if (max_dist > 0.0 && std::abs(E - seed) > max_dist) return std::nullopt;
        const double step = std::abs(dE), unit = std::max(1.0, std::abs(E));
        // Converged, or stalled at the rounding floor of f.
        if (step <= 1e-13 * unit || (step <= 1e-10 * unit && step >= 0.5 * prev)) {
            // Real roots come back with rounding-level imaginary parts.
            if (classify(E) == RootKind::real && seed.imag() == 0.0) E = E.real();
            return make_record(params, E, it);
        }
        prev = step;
    }
    return std::nullopt;
}

}  // namespace

EigenvalueRecord newton_polish(const PotentialParams& params, Complex seed, int max_iters) {
    if (auto r = newton_impl(params, seed, max_iters, 0.0)) return *r;
    throw NoConvergence("newton: no convergence after " + std::to_string(max_iters) + " iterations");
}

RealSpectrum find_real_eigenvalues(const PotentialParams& params, double E_max, const ScanOptions& options) {
    validate(params);
    if (!(E_max > 0.0) || !std::isfinite(E_max)) throw InvalidArgument("E_max must be positive");
    if (options.points_per_decade < 10) throw InvalidArgument("points_per_decade must be at least 10");
    const double e_min = options.e_min > 0.0 ? options.e_min : std::min(1e-3, 1e-4 * E_max);
    if (!(e_min < E_max)) throw InvalidArgument("scan lower bound must lie below E_max");

    const std::vector<double> grid = scan_grid(e_min, E_max, options.points_per_decade);
    const std::size_t n = grid.size();
    std::vector<double> D(n, kNaN), absf(n, kNaN);
    detail::parallel_for(n, options.threads, [&](std::size_t i) {
        try {
            const OriginValues o = origin_values(grid[i], params);
            absf[i] = std::abs(o.dh * o.k + o.h * o.dk);
            D[i] = (-o.s * (o.dh / o.h + o.dk / o.k)).real();
        } catch (const Error&) {
            // left as NaN: the point takes no part in bracketing
        }
    });
    const std::size_t failed = static_cast<std::size_t>(std::count_if(D.begin(), D.end(), [](double d) { return !std::isfinite(d); }));
    if (failed * 10 > n) throw SolverFailure("real scan: more than 10% of grid evaluations failed");

    RealSpectrum out;
    out.grid_points = n;
    out.scale = median(absf);

    struct Seed {
        double lo, hi;
        bool bracket;
    };
    std::vector<Seed> seeds;
    auto sign = [](double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); };
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!std::isfinite(D[i]) || !std::isfinite(D[i + 1])) continue;
        if (D[i] == 0.0) seeds.push_back({grid[i], grid[i], true});
        else if (sign(D[i]) * sign(D[i + 1]) < 0) seeds.push_back({grid[i], grid[i + 1], true});
    }
    // Near-touching pairs of roots leave no sign change at grid resolution but a
    // local minimum of |D|.
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double m = std::abs(D[i]), l = std::abs(D[i - 1]), r = std::abs(D[i + 1]);
        if (!(m < l && m < r)) continue;
        if (sign(D[i - 1]) != sign(D[i]) || sign(D[i]) != sign(D[i + 1])) continue;
        seeds.push_back({grid[i - 1], grid[i + 1], false});
    }

    std::vector<std::optional<EigenvalueRecord>> found(seeds.size());
    std::vector<std::optional<EigenvalueRecord>> partner(seeds.size());
    detail::parallel_for(seeds.size(), options.threads, [&](std::size_t k) {
        const Seed& s = seeds[k];
        try {
            double start = s.lo;
            if (s.bracket && s.hi > s.lo) {
                auto F = [&](double E) { return log_derivative_mismatch(E, params).real(); };
                boost::uintmax_t iters = 200;
                const auto br = boost::math::tools::toms748_solve(F, s.lo, s.hi, boost::math::tools::eps_tolerance<double>(48), iters);
                start = 0.5 * (br.first + br.second);
                // A sign change across a pole of D (zero of H or K at sa) is not a root of f.
                if (relative_residual(start, params) > 1e-6) return;
            } else if (!s.bracket) {
                start = 0.5 * (s.lo + s.hi);
            }
            const double window = std::max(10.0 * (s.hi - s.lo), 1e-8 * std::max(1.0, start));
            auto polished = newton_impl(params, start, 100, window);
            if (!polished) return;
            EigenvalueRecord r = *polished;
            if (r.kind != RootKind::real || r.rel_residual > kRootRelResidual) return;
            if (!s.bracket) {
                // A real root without a sign change has an odd-multiplicity partner
                // close by: look for it with the first one deflated.
                const Complex E1 = r.E;
                Complex E = 2.0 * start - E1;  // mirror image about the |D| minimum
                for (int it = 0; it < 60 && std::abs(E - start) <= window; ++it) {
                    const double h = 1e-6 * std::max(1.0, std::abs(E));
                    auto g = [&](Complex x) { return eigen_function(x, params) / (x - E1); };
                    const Complex dE = g(E) / ((g(E + h) - g(E - h)) / (2.0 * h));
                    E -= dE;
                    if (std::abs(dE) <= 1e-13 * std::max(1.0, std::abs(E))) {
                        auto p = newton_impl(params, E.real(), 100, window);
                        if (p && p->kind == RootKind::real && p->rel_residual <= kRootRelResidual) partner[k] = *p;
                        break;
                    }
                }
            }
            found[k] = r;
        } catch (const Error&) {
        }
    });

    std::vector<EigenvalueRecord> roots;
    for (std::size_t k = 0; k < seeds.size(); ++k) {
        for (const auto* r : {&found[k], &partner[k]}) {
            if (!*r) continue;
            const double E = (*r)->E.real();
            if (!(E > 0.0 && E <= E_max)) continue;
            roots.push_back(**r);
        }
    }
    std::sort(roots.begin(), roots.end(), [](const auto& x, const auto& y) { return x.E.real() < y.E.real(); });
    for (const auto& r : roots)
        if (out.eigenvalues.empty() || !same_root(out.eigenvalues.back().E, r.E)) out.eigenvalues.push_back(r);
    for (std::size_t i = 0; i < out.eigenvalues.size(); ++i) {
        out.eigenvalues[i].index = static_cast<int>(i);
        if (i == 0) continue;
        const double E0 = out.eigenvalues[i - 1].E.real(), E1 = out.eigenvalues[i].E.real();
        const double local_step = 9.0 * std::pow(10.0, std::floor(std::log10(E1))) / options.points_per_decade;
        if (E1 - E0 < 3.0 * local_step) {
            std::ostringstream w;
            w.precision(10);
            w << "ScanTooCoarse: roots " << E0 << " and " << E1 << " are closer than 3 scan steps";
            out.warnings.push_back(w.str());
        }
    }
    return out;
}

ComplexPair find_complex_pair(const PotentialParams& params, Complex seed) {
    validate(params);
    if (seed.imag() == 0.0) throw InvalidArgument("complex pair seed needs a nonzero imaginary part");
    EigenvalueRecord r = newton_polish(params, seed);
    if (r.kind == RootKind::real) throw NoConvergence("complex pair: Newton converged to a real eigenvalue");
    if (r.E.imag() < 0.0) r = make_record(params, std::conj(r.E), r.newton_iters);
    EigenvalueRecord c = make_record(params, std::conj(r.E), 0);
    if (!(r.rel_residual <= kRootRelResidual) || !(c.rel_residual <= kRootRelResidual))
        throw NoConvergence("complex pair: residual above tolerance");
    r.kind = c.kind = RootKind::complex_pair_member;
    return {r, c};
}

BranchTrace trace_branch(double a, std::pair<double, double> g_range, double E_seed, double step) {
    validate({a, g_range.first});
    if (!(g_range.first > 0.0) || !(g_range.first < g_range.second))
        throw InvalidArgument("trace_branch: need 0 < g_lo < g_hi");
    if (!(step > 0.0)) throw InvalidArgument("trace_branch: step must be positive");
    return trace_impl(a, g_range.first, g_range.second, E_seed, step, +1);
}

ExceptionalPoint refine_exceptional_point(double a, double g_seed, double E_seed) {
    const BranchFunction F{a};
    double g = g_seed, E = E_seed;
    for (int it = 1; it <= 60; ++it) {
        const double hE = 1e-3 * std::max(1.0, std::abs(E));
        const double hg = 1e-3 * std::max(1.0, std::abs(g));
        const double f0 = F(g, E), fp = F(g, E + hE), fm = F(g, E - hE);
        const double fE = (fp - fm) / (2.0 * hE);
        const double fEE = (fp - 2.0 * f0 + fm) / (hE * hE);
        const double fg = F.dg(g, E);
        const double fEg = (F.dE(g + hg, E) - F.dE(g - hg, E)) / (2.0 * hg);
        // [fg fE; fEg fEE] [dg; dE] = [f0; fE]
        const double det = fg * fEE - fE * fEg;
        if (det == 0.0 || !std::isfinite(det)) throw NoConvergence("exceptional point: singular Jacobian");
        double dg = (f0 * fEE - fE * fE) / det;
        double dE = (fg * fE - fEg * f0) / det;
        const double cap = 0.25 * std::max(0.1, g);
        if (std::abs(dg) > cap) {
            dE *= cap / std::abs(dg);
            dg = std::copysign(cap, dg);
        }
        g -= dg;
        E -= dE;
        if (!(g > 0.0)) throw NoConvergence("exceptional point: iteration left g > 0");
        if (std::abs(dg) <= 1e-10 * std::max(1.0, g) && std::abs(dE) <= 1e-9 * std::max(1.0, std::abs(E))) {
            ExceptionalPoint ep;
            ep.a = a;
            ep.g_star = g;
            ep.E_star = E;
            ep.newton_iters = it;
            const PotentialParams p{a, g};
            const OriginValues o = origin_values(E, p);
            const double size = std::abs(o.dh * o.k) + std::abs(o.h * o.dk);
            const double h = 1e-5 * std::max(1.0, std::abs(E));
            const Complex df = (eigen_function(E + h, p) - eigen_function(E - h, p)) / (2.0 * h);
            ep.rel_residual_f = std::abs(o.dh * o.k + o.h * o.dk) / size;
            ep.rel_residual_df = std::abs(df) * (1.0 + std::abs(E)) / size;
            return ep;
        }
    }
    throw NoConvergence("exceptional point: no convergence");
}

namespace {

std::vector<double> real_energies(double a, double g) {
    const PotentialParams p{a, g};
    std::vector<double> E;
    for (const auto& r : find_real_eigenvalues(p, default_energy_ceiling(p)).eigenvalues) E.push_back(r.E.real());
    return E;
}

int nearest_index(const std::vector<double>& v, double x) {
    int best = -1;
    for (int i = 0; i < static_cast<int>(v.size()); ++i)
        if (best < 0 || std::abs(v[i] - x) < std::abs(v[best] - x)) best = i;
    return best;
}

}  // namespace

ExceptionalPoint find_exceptional_point(double a, std::pair<double, double> g_bracket,
                                        std::optional<std::pair<double, double>> pair_seeds, unsigned threads) {
    const auto [g_lo, g_hi] = g_bracket;
    validate({a, g_lo});
    if (!(g_lo > 0.0 && g_lo < g_hi)) throw InvalidArgument("exceptional point: need 0 < g_lo < g_hi");
    const std::vector<double> lo = real_energies(a, g_lo), hi = real_energies(a, g_hi);
    const int change = static_cast<int>(lo.size()) - static_cast<int>(hi.size());
    if (std::abs(change) != 2)
        throw BracketInvalid("exceptional point: real-eigenvalue count changes by " + std::to_string(change) +
                             " across the bracket, not by 2");
    // Trace from the side that has the pair.
    const bool upward = change > 0;
    const std::vector<double>& start = upward ? lo : hi;
    std::vector<int> which;
    if (pair_seeds && upward) {
        which = {nearest_index(start, pair_seeds->first), nearest_index(start, pair_seeds->second)};
    } else {
        for (int i = 0; i < static_cast<int>(start.size()); ++i) which.push_back(i);
    }
    const double step = 0.01 * std::max(0.1, g_hi - g_lo);
    std::vector<BranchTrace> traces(which.size());
    detail::parallel_for(which.size(), threads, [&](std::size_t k) {
        traces[k] = upward ? trace_impl(a, g_lo, g_hi, start[which[k]], step, +1)
                           : trace_impl(a, g_hi, g_lo, start[which[k]], step, -1);
    });
    std::vector<int> merged;
    for (std::size_t k = 0; k < traces.size(); ++k)
        if (traces[k].terminated_by == TraceEnd::merged) merged.push_back(which[k]);
    if (merged.empty()) throw NoConvergence("exceptional point: no branch folded inside the bracket");
    const auto it = std::find(which.begin(), which.end(), merged.front());
    const BranchSample fold = *traces[static_cast<std::size_t>(it - which.begin())].fold;
    ExceptionalPoint ep = refine_exceptional_point(a, fold.g, fold.E.real());
    const int first = merged.front();
    ep.pair = merged.size() >= 2 ? std::pair{merged[0], merged[1]} : std::pair{first, first + 1};
    if (!upward) ep.pair = {-1, -1};  // the pair exists only above g_star
    return ep;
}

EpScan ep_scan(double a, double g_lo, double g_hi, double step, unsigned threads) {
    validate({a, g_lo});
    if (!(g_lo > 0.0 && g_lo < g_hi)) throw InvalidArgument("ep scan: need 0 < g_lo < g_hi");
    if (!(step > 0.0)) throw InvalidArgument("ep scan: step must be positive");
    EpScan scan;
    scan.a = a;
    const std::vector<double> start = real_energies(a, g_lo);
    scan.count_lo = static_cast<int>(start.size());
    scan.traces.resize(start.size());
    detail::parallel_for(start.size(), threads,
                         [&](std::size_t k) { scan.traces[k] = trace_impl(a, g_lo, g_hi, start[k], step, +1); });
    struct Fold {
        int branch;
        BranchSample at;
    };
    std::vector<Fold> folds;
    for (std::size_t k = 0; k < scan.traces.size(); ++k) {
        const BranchTrace& t = scan.traces[k];
        if (t.terminated_by == TraceEnd::merged) folds.push_back({static_cast<int>(k), *t.fold});
        if (t.terminated_by == TraceEnd::lost) {
            std::ostringstream w;
            w.precision(8);
            w << "LostBranch: branch " << k << " lost at g = " << (t.samples.empty() ? g_lo : t.samples.back().g);
            scan.warnings.push_back(w.str());
        }
    }
    std::vector<std::optional<ExceptionalPoint>> refined(folds.size());
    detail::parallel_for(folds.size(), threads, [&](std::size_t k) {
        try {
            refined[k] = refine_exceptional_point(a, folds[k].at.g, folds[k].at.E.real());
        } catch (const Error&) {
        }
    });
    for (std::size_t k = 0; k < folds.size(); ++k) {
        if (!refined[k]) {
            scan.warnings.push_back("NoConvergence: fold of branch " + std::to_string(folds[k].branch) +
                                    " did not refine to a double root");
            continue;
        }
        ExceptionalPoint ep = *refined[k];
        auto same = std::find_if(scan.points.begin(), scan.points.end(), [&](const ExceptionalPoint& q) {
            return std::abs(q.g_star - ep.g_star) <= 1e-6 * std::max(1.0, ep.g_star) &&
                   std::abs(q.E_star - ep.E_star) <= 1e-5 * std::max(1.0, std::abs(ep.E_star));
        });
        if (same != scan.points.end()) {
            same->pair.second = folds[k].branch;
            continue;
        }
        ep.pair = {folds[k].branch, -1};
        scan.points.push_back(ep);
    }
    for (auto& ep : scan.points) {
        if (ep.pair.second < 0) ep.pair.second = ep.pair.first + 1;
        if (ep.pair.first > ep.pair.second) std::swap(ep.pair.first, ep.pair.second);
    }
    std::sort(scan.points.begin(), scan.points.end(),
              [](const auto& x, const auto& y) { return x.g_star < y.g_star; });
    scan.count_hi = real_count(a, g_hi);
    if (scan.count_hi != scan.count_lo - 2 * static_cast<int>(scan.points.size()))
        scan.warnings.push_back("CountMismatch: " + std::to_string(scan.count_lo) + " real eigenvalues at g_lo, " +
                                std::to_string(scan.count_hi) + " at g_hi, " +
                                std::to_string(scan.points.size()) + " exceptional points found");
    return scan;
}

}  // namespace ptexp
