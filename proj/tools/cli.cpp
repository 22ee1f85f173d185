#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "output.hpp"
#include "ptexp/eigenstates.hpp"
#include "ptexp/oracle.hpp"
#include "ptexp/scattering.hpp"
#include "ptexp/spectrum.hpp"
#include "selftest.hpp"

namespace ptexp::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string utc_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

RunManifest manifest(const std::string& command, std::optional<double> a, std::optional<double> g,
                     std::map<std::string, std::string> options) {
    RunManifest m;
    m.command = command;
    m.has_a = a.has_value();
    m.has_g = g.has_value();
    m.params = {a.value_or(kNaN), g.value_or(kNaN)};
    m.options = std::move(options);
    m.tool_version = kToolVersion;
    m.timestamp = utc_timestamp();
    return m;
}

std::string num(double v) { return format_double(v); }

Cell opt_cell(std::optional<double> v) { return v ? Cell(*v) : Cell(nullptr); }

Json warnings_json(const std::vector<std::string>& w) {
    Json j = Json::array();
    for (const auto& s : w) j.push_back(s);
    return j;
}

// "re,im", "re+imi" or "re-imi".
Complex parse_complex(const std::string& text) {
    auto read = [&](const char* b, const char* e, double& v) {
        const auto r = std::from_chars(b, e, v);
        if (r.ec != std::errc()) throw InvalidArgument("cannot parse complex seed '" + text + "'");
        return r.ptr;
    };
    const char* b = text.data();
    const char* e = b + text.size();
    double re = 0.0, im = 0.0;
    const char* p = read(b, e, re);
    if (p == e) throw InvalidArgument("complex seed '" + text + "' has no imaginary part");
    if (*p == ',') {
        p = read(p + 1, e, im);
    } else {
        if (*p == '+') ++p;
        p = read(p, e, im);
        if (p == e || *p != 'i') throw InvalidArgument("cannot parse complex seed '" + text + "'");
        ++p;
    }
    if (p != e) throw InvalidArgument("cannot parse complex seed '" + text + "'");
    return {re, im};
}

void add_pair(std::vector<EigenvalueRecord>& out, const ComplexPair& pr) {
    for (const auto& r : out)
        if (std::abs(r.E - pr.upper.E) <= 1e-8 * std::max(1.0, std::abs(pr.upper.E))) return;
    out.push_back(pr.lower);
    out.push_back(pr.upper);
}

// Complex pairs, each as (Im < 0, Im > 0), in order of Re E.
std::vector<EigenvalueRecord> complex_pairs(const PotentialParams& p, const std::vector<Complex>& seeds,
                                            std::vector<std::string>& warnings) {
    std::vector<EigenvalueRecord> out;
    for (const Complex& s : seeds) {
        try {
            add_pair(out, find_complex_pair(p, s));
        } catch (const NoConvergence& e) {
            std::ostringstream w;
            w.precision(17);
            w << "NoConvergence: seed " << s.real() << (s.imag() < 0 ? "" : "+") << s.imag() << "i: " << e.what();
            warnings.push_back(w.str());
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        const double rx = x.E.real(), ry = y.E.real();
        if (std::abs(rx - ry) > 1e-8 * std::max(1.0, std::abs(rx))) return rx < ry;
        return x.E.imag() < y.E.imag();
    });
    return out;
}

std::vector<Complex> oracle_complex_seeds(const PotentialParams& p) {
    const OracleSpectrum s = diagonalize(default_oracle_config(p.a), p);
    std::vector<Complex> seeds;
    for (const auto& e : s.eigenvalues)
        if (classify(e.E) == RootKind::complex_pair_member && e.E.imag() > 0.0) seeds.push_back(e.E);
    return seeds;
}

// Reals ascending, then the complex pairs.
struct Resolved {
    std::vector<EigenvalueRecord> eigenvalues;
    std::size_t real_count = 0;
    std::vector<std::string> warnings;
};

Resolved resolve_spectrum(const PotentialParams& p, double emax, const std::vector<Complex>& seeds, unsigned threads) {
    Resolved r;
    ScanOptions so;
    so.threads = threads;
    RealSpectrum rs = find_real_eigenvalues(p, emax, so);
    r.eigenvalues = rs.eigenvalues;
    r.real_count = r.eigenvalues.size();
    r.warnings = rs.warnings;
    for (auto& c : complex_pairs(p, seeds, r.warnings)) r.eigenvalues.push_back(c);
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) r.eigenvalues[i].index = static_cast<int>(i);
    return r;
}

Table eigenvalue_table(const std::vector<EigenvalueRecord>& ev) {
    Table t{"eigenvalues", {"index", "kind", "re_E", "im_E", "residual", "rel_residual", "newton_iters"}, {}};
    for (const auto& r : ev)
        t.rows.push_back({static_cast<long long>(r.index), to_string(r.kind), r.E.real(), r.E.imag(), r.residual,
                          r.rel_residual, static_cast<long long>(r.newton_iters)});
    return t;
}

// ---------------------------------------------------------------------------

struct SpectrumArgs {
    double a = 1.0, g = 1.0, emax = 0.0;
    std::vector<std::string> complex_seeds;
    bool oracle_seeds = false;
};

Document cmd_spectrum(const SpectrumArgs& s, unsigned threads) {
    const PotentialParams p{s.a, s.g};
    validate(p);
    if (!(s.emax > 0.0) || !std::isfinite(s.emax)) throw InvalidArgument("emax must be positive");
    std::vector<Complex> seeds;
    for (const auto& t : s.complex_seeds) seeds.push_back(parse_complex(t));
    if (s.oracle_seeds)
        for (const Complex& z : oracle_complex_seeds(p)) seeds.push_back(z);
    std::string seed_text;
    for (const auto& t : s.complex_seeds) seed_text += (seed_text.empty() ? "" : ";") + t;

    Document doc;
    doc.manifest = manifest("spectrum", s.a, s.g,
                            {{"emax", num(s.emax)},
                             {"complex_seeds", seed_text},
                             {"oracle_seeds", s.oracle_seeds ? "true" : "false"}});
    const Resolved r = resolve_spectrum(p, s.emax, seeds, threads);
    doc.meta["real_count"] = r.real_count;
    doc.meta["complex_count"] = r.eigenvalues.size() - r.real_count;
    doc.meta["warnings"] = warnings_json(r.warnings);
    doc.tables.push_back(eigenvalue_table(r.eigenvalues));
    return doc;
}

// ---------------------------------------------------------------------------

struct ReflectivityArgs {
    double a = 1.0, g = 1.0, emin = 0.1, emax = 45.0;
    std::size_t npoints = 2000;
};

Document cmd_reflectivity(const ReflectivityArgs& s, unsigned threads) {
    const PotentialParams p{s.a, s.g};
    validate(p);
    if (!(s.emin > 0.0 && s.emin < s.emax) || !std::isfinite(s.emax))
        throw InvalidArgument("reflectivity needs 0 < emin < emax");
    if (s.npoints < 2) throw InvalidArgument("reflectivity needs at least 2 points");
    Document doc;
    doc.manifest = manifest("reflectivity", s.a, s.g,
                            {{"emin", num(s.emin)}, {"emax", num(s.emax)}, {"npoints", std::to_string(s.npoints)}});
    const auto samples = reflectivity_scan(p, uniform_grid(s.emin, s.emax, s.npoints), threads);
    Table t{"series", {"E", "re_r", "im_r", "R", "pole_flag"}, {}};
    std::size_t failed = 0;
    for (const auto& x : samples) {
        if (!x.error.empty()) ++failed;
        const bool ok = x.error.empty();
        t.rows.push_back({x.E, ok ? Cell(x.r.real()) : Cell(nullptr), ok ? Cell(x.r.imag()) : Cell(nullptr),
                          ok ? Cell(x.R) : Cell(nullptr), static_cast<long long>(x.pole_flag ? 1 : 0)});
    }
    Table poles{"poles", {"E_pole", "R_pole", "first", "last"}, {}};
    for (const auto& c : pole_clusters(p, samples))
        poles.rows.push_back({c.E_pole, c.R_pole, static_cast<long long>(c.first), static_cast<long long>(c.last)});
    Table humps{"humps", {"E", "R"}, {}};
    for (std::size_t i : finite_maxima(samples)) humps.rows.push_back({samples[i].E, samples[i].R});
    doc.meta["failed_points"] = failed;
    doc.tables.push_back(std::move(t));
    doc.tables.push_back(std::move(poles));
    doc.tables.push_back(std::move(humps));
    return doc;
}

// ---------------------------------------------------------------------------

struct EigenstateArgs {
    double a = 1.0, g = 1.0;
    int index = 0;
    std::optional<double> half_width;
    std::size_t points = 4001;
    bool check_pt = false;
};

Document cmd_eigenstate(const EigenstateArgs& s, unsigned threads) {
    const PotentialParams p{s.a, s.g};
    validate(p);
    if (s.index < 0) throw IndexOutOfRange("eigenstate index must be non-negative");
    const double hw = s.half_width.value_or(8.0 * s.a);
    const std::vector<double> grid = symmetric_grid(hw, s.points);

    RealSpectrum rs = find_real_eigenvalues(p, default_energy_ceiling(p), ScanOptions{2000, 0.0, threads});
    const auto n_real = static_cast<int>(rs.eigenvalues.size());
    std::vector<EigenvalueRecord> ev = rs.eigenvalues;
    std::vector<std::string> warnings = rs.warnings;
    if (s.index >= n_real)
        for (auto& c : complex_pairs(p, oracle_complex_seeds(p), warnings)) ev.push_back(c);
    if (s.index >= static_cast<int>(ev.size()))
        throw IndexOutOfRange("eigenstate index " + std::to_string(s.index) + " exceeds the " +
                              std::to_string(ev.size()) + " eigenvalues found");
    const Complex E = ev[static_cast<std::size_t>(s.index)].E;
    const bool is_real = s.index < n_real;

    Document doc;
    doc.manifest = manifest("eigenstate", s.a, s.g,
                            {{"index", std::to_string(s.index)},
                             {"grid_half_width", num(hw)},
                             {"points", std::to_string(s.points)},
                             {"check_pt", s.check_pt ? "true" : "false"}});
    const WaveSamples w = evaluate_state(E, p, grid, threads);
    doc.meta["eigenvalue"] = {{"index", s.index},
                         {"re_E", E.real()},
                         {"im_E", E.imag()},
                         {"kind", is_real ? "real" : "complex_pair_member"},
                         {"normalization", to_string(w.normalization)}};
    Json pv = Json::array();
    for (double x : {-1.0, 1.0}) {
        const Complex v = psi(x, E, p);
        pv.push_back({{"x", x}, {"re_psi", v.real()}, {"im_psi", v.imag()}});
    }
    doc.meta["point_values"] = pv;
    doc.meta["residual"] = schrodinger_residual(w, p).max_residual;

    if (s.check_pt) {
        const WaveSamples pt = pt_transform(w);
        const ParitySplit ps = parity_split(w);
        const double m = max_abs(w);
        Json rep;
        rep["even_defect"] = ps.even_defect / m;
        rep["odd_defect"] = ps.odd_defect / m;
        if (is_real) {
            const double d = relative_sup_distance(pt, w);
            rep["partner_index"] = s.index;
            rep["pt_defect"] = d;
            rep["alpha"] = best_fit_phase(pt, w);
            rep["verdict"] = "PT psi_" + std::to_string(s.index) + " = psi_" + std::to_string(s.index);
        } else {
            // Partner: the other member of the pair, adjacent in the table.
            const int partner = (s.index - n_real) % 2 == 0 ? s.index + 1 : s.index - 1;
            const WaveSamples wp = evaluate_state(ev[static_cast<std::size_t>(partner)].E, p, grid, threads);
            const double d = relative_sup_distance(pt, wp);
            const double alpha = best_fit_phase(pt, wp);
            rep["partner_index"] = partner;
            rep["pt_defect"] = d;
            rep["alpha"] = alpha;
            std::ostringstream v;
            v.setf(std::ios::fixed);
            v.precision(3);
            v << "PT psi_" << s.index << " = psi_" << partner << ", alpha = " << (std::abs(alpha) < 5e-4 ? 0.0 : alpha)
              << " +- 1e-4";
            rep["verdict"] = v.str();
        }
        doc.meta["pt_report"] = rep;
    }
    doc.meta["warnings"] = warnings_json(warnings);
    Table t{"state", {"x", "re_psi", "im_psi"}, {}};
    for (std::size_t i = 0; i < grid.size(); ++i) t.rows.push_back({grid[i], w.values[i].real(), w.values[i].imag()});
    doc.tables.push_back(std::move(t));
    return doc;
}

// ---------------------------------------------------------------------------

struct EpScanArgs {
    double a = 1.0, g_lo = 0.1, g_hi = 6.0, step = 0.01;
    bool traces = false;
};

Document cmd_ep_scan(const EpScanArgs& s, unsigned threads) {
    validate({s.a, s.g_lo});
    if (!(s.g_lo > 0.0 && s.g_lo < s.g_hi) || !std::isfinite(s.g_hi))
        throw InvalidArgument("ep-scan needs 0 < g_lo < g_hi");
    Document doc;
    doc.manifest = manifest("ep-scan", s.a, std::nullopt,
                            {{"g_lo", num(s.g_lo)},
                             {"g_hi", num(s.g_hi)},
                             {"step", num(s.step)},
                             {"traces", s.traces ? "true" : "false"}});
    const EpScan scan = ep_scan(s.a, s.g_lo, s.g_hi, s.step, threads);
    Table t{"exceptional_points",
            {"g_star", "re_E_star", "im_E_star", "branch_lo", "branch_hi", "rel_residual_f", "rel_residual_df",
             "newton_iters"},
            {}};
    for (const auto& ep : scan.points)
        t.rows.push_back({ep.g_star, ep.E_star.real(), ep.E_star.imag(), static_cast<long long>(ep.pair.first),
                          static_cast<long long>(ep.pair.second), ep.rel_residual_f, ep.rel_residual_df,
                          static_cast<long long>(ep.newton_iters)});
    doc.meta["count_lo"] = scan.count_lo;
    doc.meta["count_hi"] = scan.count_hi;
    doc.meta["branch_count"] = scan.traces.size();
    Json ends = Json::array();
    for (const auto& tr : scan.traces) ends.push_back(to_string(tr.terminated_by));
    doc.meta["branch_ends"] = ends;
    doc.meta["warnings"] = warnings_json(scan.warnings);
    doc.tables.push_back(std::move(t));
    if (s.traces) {
        Table tr{"traces", {"branch", "g", "re_E", "im_E"}, {}};
        for (std::size_t k = 0; k < scan.traces.size(); ++k)
            for (const auto& smp : scan.traces[k].samples)
                tr.rows.push_back({static_cast<long long>(k), smp.g, smp.E.real(), smp.E.imag()});
        doc.tables.push_back(std::move(tr));
    }
    return doc;
}

// ---------------------------------------------------------------------------

struct OracleArgs {
    double a = 1.0, g = 1.0;
    std::optional<double> L, L2;
    int n = 4000;
    bool richardson = true;
    std::vector<double> compare_im;
};

Document cmd_oracle(const OracleArgs& s, unsigned threads) {
    const PotentialParams p{s.a, s.g};
    validate(p);
    OracleConfig cfg = default_oracle_config(s.a);
    if (s.L) cfg.L = *s.L;
    cfg.n = s.n;
    cfg.richardson = s.richardson;
    OracleConfig cfg2 = cfg;
    cfg2.L = s.L2.value_or(cfg.L * 7.0 / 6.0);

    Document doc;
    std::string cmp;
    for (double v : s.compare_im) cmp += (cmp.empty() ? "" : ";") + num(v);
    doc.manifest = manifest("oracle", s.a, s.g,
                            {{"L", num(cfg.L)},
                             {"L2", num(cfg2.L)},
                             {"n", std::to_string(cfg.n)},
                             {"richardson", cfg.richardson ? "true" : "false"},
                             {"compare_im", cmp}});
    const OracleSpectrum o = diagonalize(cfg, p);
    const OracleSpectrum o2 = diagonalize(cfg2, p);
    const RealSpectrum rs = find_real_eigenvalues(p, o.window, ScanOptions{2000, 0.0, threads});

    Table t{"eigenvalues",
            {"index", "kind", "re_E", "im_E", "re_E_h", "im_E_h", "est_disc_err", "solver_noise", "re_analytic",
             "im_analytic", "delta"},
            {}};
    double worst = 0.0;
    std::vector<bool> matched(rs.eigenvalues.size(), false);
    for (std::size_t i = 0; i < o.eigenvalues.size(); ++i) {
        const OracleEigenvalue& e = o.eigenvalues[i];
        const RootKind kind = classify(e.E);
        std::optional<Complex> partner;
        if (kind == RootKind::real) {
            std::size_t best = rs.eigenvalues.size();
            for (std::size_t k = 0; k < rs.eigenvalues.size(); ++k)
                if (best == rs.eigenvalues.size() ||
                    std::abs(rs.eigenvalues[k].E - e.E) < std::abs(rs.eigenvalues[best].E - e.E))
                    best = k;
            if (best < rs.eigenvalues.size()) {
                partner = rs.eigenvalues[best].E;
                if (std::abs(*partner - e.E) <= 1e-3 + e.est_disc_err) matched[best] = true;
            }
        } else {
            try {
                const EigenvalueRecord r = newton_polish(p, e.E);
                if (r.rel_residual <= kRootRelResidual) partner = r.E;
            } catch (const Error&) {
            }
        }
        std::optional<double> delta;
        if (partner) {
            delta = std::abs(*partner - e.E);
            worst = std::max(worst, *delta);
        }
        t.rows.push_back({static_cast<long long>(i), to_string(kind), e.E.real(), e.E.imag(), e.E_h.real(),
                          e.E_h.imag(), e.est_disc_err, e.solver_noise,
                          partner ? Cell(partner->real()) : Cell(nullptr),
                          partner ? Cell(partner->imag()) : Cell(nullptr), opt_cell(delta)});
    }
    Json unmatched = Json::array();
    for (std::size_t k = 0; k < matched.size(); ++k)
        if (!matched[k] && rs.eigenvalues[k].E.real() < o.ceiling) unmatched.push_back(rs.eigenvalues[k].E.real());

    doc.meta["h"] = o.h;
    doc.meta["ceiling"] = o.ceiling;
    doc.meta["window"] = o.window;
    doc.meta["max_delta"] = worst;
    doc.meta["unmatched_analytic"] = unmatched;
    const double closure = conjugate_closure_defect(o);
    doc.meta["conjugate_symmetry"] = {{"defect", closure}, {"tolerance", 1e-6}, {"holds", closure <= 1e-6}};

    // Lowest complex pair: Im E at both domain sizes and the analytic root.
    Json verdict = nullptr;
    auto lowest_upper = [](const OracleSpectrum& sp) -> std::optional<OracleEigenvalue> {
        for (const auto& e : sp.eigenvalues)
            if (classify(e.E) == RootKind::complex_pair_member && e.E.imag() > 0.0) return e;
        return std::nullopt;
    };
    const auto z1 = lowest_upper(o), z2 = lowest_upper(o2);
    if (z1 && z2) {
        verdict = Json::object();
        verdict["re_E"] = z1->E.real();
        verdict["im_E"] = z1->E.imag();
        verdict["im_E_L2"] = z2->E.imag();
        verdict["domain_spread"] = std::abs(z1->E - z2->E);
        std::optional<Complex> an;
        try {
            an = find_complex_pair(p, z1->E).upper.E;
        } catch (const Error&) {
        }
        verdict["im_analytic"] = an ? Json(an->imag()) : Json(nullptr);
        verdict["analytic_delta"] = an ? Json(std::abs(*an - z1->E)) : Json(nullptr);
        Json cands = Json::array();
        std::ostringstream line;
        line.precision(6);
        line << "Im E of the lowest complex pair = " << z1->E.imag();
        for (double c : s.compare_im) {
            const bool ok = std::abs(std::abs(c) - z1->E.imag()) <= 1e-3;
            cands.push_back({{"value", c}, {"delta", std::abs(std::abs(c) - z1->E.imag())}, {"consistent", ok}});
            line << "; " << c << (ok ? " consistent" : " inconsistent");
        }
        verdict["candidates"] = cands;
        verdict["line"] = line.str();
    }
    doc.meta["complex_pair_verdict"] = verdict;
    std::vector<std::string> w = o.warnings;
    for (const auto& x : o2.warnings) w.push_back("L2: " + x);
    doc.meta["warnings"] = warnings_json(w);
    doc.tables.push_back(std::move(t));
    return doc;
}

// ---------------------------------------------------------------------------

Document cmd_selftest(double tolerance_scale, unsigned threads, bool& passed) {
    Document doc;
    doc.manifest = manifest("selftest", std::nullopt, std::nullopt, {{"tolerance_scale", num(tolerance_scale)}});
    const SelftestReport r = run_selftest(tolerance_scale, threads);
    passed = r.passed();
    Json suites = Json::array();
    for (const auto& s : r.suites) suites.push_back({{"suite", s.suite}, {"passed", s.passed}, {"total", s.total}});
    doc.meta["suites"] = suites;
    doc.meta["all_passed"] = passed;
    doc.meta["seconds"] = r.seconds;
    Table t{"checks", {"suite", "name", "value", "tolerance", "passed"}, {}};
    for (const auto& c : r.checks)
        t.rows.push_back({c.suite, c.name, c.value, c.tolerance, static_cast<long long>(c.passed ? 1 : 0)});
    doc.tables.push_back(std::move(t));
    return doc;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"ptexp: spectra, reflectivity and eigenstates of V(x) = i g sgn(x) |1 - exp(2|x|/a)|"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "json", output;
    unsigned threads = 1;
    app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    app.add_option("--output", output, "write to this file instead of standard output");
    app.add_option("--threads", threads, "worker threads for scans, 0 = all cores")->capture_default_str();

    SpectrumArgs sa;
    auto* sp = app.add_subcommand("spectrum", "real eigenvalues up to emax and optional complex pairs");
    sp->add_option("--a", sa.a)->required();
    sp->add_option("--g", sa.g)->required();
    sp->add_option("--emax", sa.emax)->required();
    sp->add_option("--complex-seeds", sa.complex_seeds, "starting points re,im or re+imi");
    sp->add_flag("--oracle-seeds", sa.oracle_seeds, "seed complex pairs from the finite-difference spectrum");

    ReflectivityArgs ra;
    auto* rf = app.add_subcommand("reflectivity", "r(E) and R = |r|^2 on a uniform grid");
    rf->add_option("--a", ra.a)->required();
    rf->add_option("--g", ra.g)->required();
    rf->add_option("--emin", ra.emin)->capture_default_str();
    rf->add_option("--emax", ra.emax)->capture_default_str();
    rf->add_option("--npoints", ra.npoints)->capture_default_str();

    EigenstateArgs ea;
    auto* es = app.add_subcommand("eigenstate", "psi on a symmetric grid, with an optional PT report");
    es->add_option("--a", ea.a)->required();
    es->add_option("--g", ea.g)->required();
    es->add_option("--index", ea.index)->required();
    es->add_option("--grid-half-width", ea.half_width, "default 8a");
    es->add_option("--points", ea.points)->capture_default_str();
    es->add_flag("--check-pt", ea.check_pt);

    EpScanArgs pa;
    auto* ep = app.add_subcommand("ep-scan", "exceptional points for g in (g_lo, g_hi)");
    ep->add_option("--a", pa.a)->required();
    ep->add_option("--g-lo", pa.g_lo)->required();
    ep->add_option("--g-hi", pa.g_hi)->required();
    ep->add_option("--step", pa.step)->capture_default_str();
    ep->add_flag("--traces", pa.traces, "include the branch traces");

    OracleArgs oa;
    auto* orc = app.add_subcommand("oracle", "finite-difference spectrum compared with the analytic roots");
    orc->add_option("--a", oa.a)->required();
    orc->add_option("--g", oa.g)->required();
    orc->add_option("--L", oa.L, "half-width, default 12 max(a, 1)");
    orc->add_option("--L2", oa.L2, "second half-width for the complex-pair check, default 7L/6");
    orc->add_option("--n", oa.n)->capture_default_str();
    orc->add_flag("--richardson,!--no-richardson", oa.richardson)->capture_default_str();
    orc->add_option("--compare-im", oa.compare_im, "values to test against Im E of the lowest complex pair");

    double tolerance_scale = 1.0;
    auto* st = app.add_subcommand("selftest", "run the invariant suite");
    st->add_option("--tolerance-scale", tolerance_scale)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInvalidArguments;
    }

    Document doc;
    bool selftest_passed = true;
    try {
        if (*sp) doc = cmd_spectrum(sa, threads);
        else if (*rf) doc = cmd_reflectivity(ra, threads);
        else if (*es) doc = cmd_eigenstate(ea, threads);
        else if (*ep) doc = cmd_ep_scan(pa, threads);
        else if (*orc) doc = cmd_oracle(oa, threads);
        else doc = cmd_selftest(tolerance_scale, threads, selftest_passed);
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidArguments;
    } catch (const IndexOutOfRange& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidArguments;
    } catch (const Error& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    }
    doc.manifest.options["format"] = format;
    doc.manifest.options["threads"] = std::to_string(threads);

    std::ofstream file;
    if (!output.empty()) {
        file.open(output);
        if (!file) {
            err << "error: cannot open " << output << '\n';
            return kInvalidArguments;
        }
    }
    std::ostream& os = output.empty() ? out : file;
    if (format == "csv")
        write_csv(doc, os);
    else
        write_json(doc, os);
    if (!selftest_passed) {
        err << "selftest: failures\n";
        return kSelftestFailed;
    }
    return kOk;
}

}  // namespace ptexp::cli
