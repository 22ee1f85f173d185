#include "selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>

#include "ptexp/eigenstates.hpp"
#include "ptexp/oracle.hpp"
#include "ptexp/scattering.hpp"
#include "ptexp/special_functions.hpp"
#include "ptexp/spectrum.hpp"

namespace ptexp::cli {

namespace {

const Complex I{0.0, 1.0};
const PotentialParams unit{1.0, 1.0};

class Recorder {
public:
    Recorder(std::vector<Check>& out, double scale) : out_(out), scale_(scale) {}

    void operator()(const std::string& suite, const std::string& name, double value, double tol) {
        const double t = tol * scale_;
        out_.push_back({suite, name, value, t, std::isfinite(value) && value <= t});
    }

    // Runs body; an exception counts as one failed check.
    void guarded(const std::string& suite, const std::function<void()>& body) {
        try {
            body();
        } catch (const std::exception& e) {
            out_.push_back({suite, std::string("exception: ") + e.what(), INFINITY, 0.0, false});
        }
    }

private:
    std::vector<Check>& out_;
    double scale_;
};

Complex random_order(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;) {
        const Complex nu{u(rng), 5.0 * u(rng)};
        if (std::abs(nu) <= 5.0) return nu;
    }
}

Complex random_argument(std::mt19937_64& rng, double max_phase) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return std::polar(0.1 * std::pow(400.0, u(rng)), max_phase * (2.0 * u(rng) - 1.0));
}

void wronskians(Recorder& rec) {
    std::mt19937_64 rng(2024);
    double worst_h = 0.0, worst_k = 0.0;
    for (int i = 0; i < 40; ++i) {
        const Complex nu = random_order(rng), z = random_argument(rng, 0.9 * kPi);
        const auto h1 = sf::hankel1_with_dz(nu, z), h2 = sf::hankel2_with_dz(nu, z);
        const Complex w = h1.value * h2.derivative - h1.derivative * h2.value;
        worst_h = std::max(worst_h, std::abs(w + 4.0 * I / (kPi * z)) / std::abs(4.0 / (kPi * z)));
    }
    for (int i = 0; i < 40; ++i) {
        const Complex nu = random_order(rng), z = random_argument(rng, 0.45 * kPi);
        const auto k = sf::bessel_k_with_dz(nu, z);
        const Complex w = sf::bessel_i(nu, z).value * k.derivative - sf::bessel_i_dz(nu, z).value * k.value;
        worst_k = std::max(worst_k, std::abs(w + 1.0 / z) * std::abs(z));
    }
    rec("wronskian", "W[H1, H2] = -4i/(pi z), 40 points", worst_h, 1e-9);
    rec("wronskian", "W[I, K] = -1/z, 40 points", worst_k, 1e-9);
}

struct UnitStates {
    std::vector<Complex> E;  // E0..E4, E5 (Im < 0), E6
    std::vector<WaveSamples> w;
};

UnitStates unit_states(unsigned threads) {
    UnitStates s;
    for (const auto& r : find_real_eigenvalues(unit, 30.0).eigenvalues) s.E.push_back(r.E);
    const ComplexPair pr = find_complex_pair(unit, {37.58, 2.69});
    s.E.push_back(pr.lower.E);
    s.E.push_back(pr.upper.E);
    const auto grid = default_grid(unit);
    for (Complex E : s.E) s.w.push_back(evaluate_state(E, unit, grid, threads));
    return s;
}

void ode_residuals(Recorder& rec, const UnitStates& s) {
    for (std::size_t i = 0; i < s.w.size(); ++i)
        rec("ode_residual", "a=1 g=1 state " + std::to_string(i), schrodinger_residual(s.w[i], unit).max_residual,
            1e-6);
    for (double a : {0.5, 5.0}) {
        const PotentialParams p{a, 1.0};
        const auto r = find_real_eigenvalues(p, default_energy_ceiling(p));
        if (r.eigenvalues.empty()) throw SolverFailure("no real eigenvalue");
        const WaveSamples w = evaluate_state(r.eigenvalues[0].E, p, default_grid(p));
        rec("ode_residual", "a=" + std::to_string(a).substr(0, 3) + " g=1 state 0",
            schrodinger_residual(w, p).max_residual, 1e-6);
    }
}

void pt_properties(Recorder& rec, const UnitStates& s) {
    for (std::size_t i = 0; i < 5 && i < s.w.size(); ++i)
        rec("pt_properties", "PT psi_" + std::to_string(i) + " = psi_" + std::to_string(i),
            relative_sup_distance(pt_transform(s.w[i]), s.w[i]), 1e-8);
    const WaveSamples &w5 = s.w.at(5), &w6 = s.w.at(6);
    rec("pt_properties", "PT psi_5 = psi_6", relative_sup_distance(pt_transform(w5), w6), 1e-6);
    rec("pt_properties", "alpha of PT psi_5 against psi_6", std::abs(best_fit_phase(pt_transform(w5), w6)), 1e-4);
    for (const WaveSamples* w : {&w5, &w6}) {
        const double scale = std::sqrt(std::abs(overlap(w5, w5).value * overlap(w6, w6).value));
        rec("pt_properties", std::string("PT norm of psi_") + (w == &w5 ? "5" : "6"),
            std::abs(pt_inner(*w, *w).value) / scale, 1e-5);
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < s.w.size(); ++i)
        for (std::size_t j = i + 1; j < s.w.size(); ++j) {
            const double d = std::sqrt(std::abs(overlap(s.w[i], s.w[i]).value * overlap(s.w[j], s.w[j]).value));
            worst = std::max(worst, std::abs(overlap(s.w[i], s.w[j]).value) / d);
        }
    rec("pt_properties", "Gram off-diagonal ratio, 7 states", worst, 1e-5);
}

void conjugation(Recorder& rec) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> ur(0.5, 60.0), ui(-5.0, 5.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const Complex E(ur(rng), ui(rng));
        const OriginValues o = origin_values(E, unit);
        const double scale = std::abs(o.s) * (std::abs(o.dh / o.h) + std::abs(o.dk / o.k));
        worst = std::max(worst, std::abs(log_derivative_mismatch(std::conj(E), unit) -
                                         std::conj(log_derivative_mismatch(E, unit))) /
                                    scale);
    }
    rec("conjugation_symmetry", "D(conj E) = conj D(E), 20 points", worst, 1e-10);
    const ComplexPair a = find_complex_pair(unit, {37.58, 2.69}), b = find_complex_pair(unit, {37.58, -2.69});
    rec("conjugation_symmetry", "complex root set closed under conjugation",
        std::max(std::abs(a.upper.E - b.upper.E), relative_residual(std::conj(a.upper.E), unit)), 1e-9);
}

void oracle_closure(Recorder& rec) {
    for (double a : {0.5, 1.0, 2.0, 5.0}) {
        const OracleSpectrum s = diagonalize(default_oracle_config(a), a, 1.0);
        rec("oracle_closure", "a=" + std::to_string(a).substr(0, 3) + " g=1 conjugate closure",
            conjugate_closure_defect(s), 1e-6);
    }
}

void pole_root(Recorder& rec, unsigned threads) {
    struct Case {
        double a, E_hi;
        std::size_t n;
    };
    for (const Case c : {Case{1.0, 45.0, 2000}, Case{5.0, 3.0, 1000}}) {
        const PotentialParams p{c.a, 1.0};
        const auto roots = find_real_eigenvalues(p, c.E_hi).eigenvalues;
        const auto samples = reflectivity_scan(p, uniform_grid(0.1 / c.a, c.E_hi, c.n), threads);
        const auto poles = pole_clusters(p, samples);
        const std::string tag = "a=" + std::to_string(c.a).substr(0, 3) + " g=1 ";
        rec("pole_root", tag + "pole count minus root count",
            std::abs(static_cast<double>(poles.size()) - static_cast<double>(roots.size())), 0.0);
        double worst = 0.0;
        for (const auto& r : roots) {
            double best = INFINITY;
            for (const auto& q : poles) best = std::min(best, std::abs(q.E_pole - r.E.real()));
            worst = std::max(worst, best);
        }
        rec("pole_root", tag + "max |E_pole - E_root|", worst, 1e-3);
    }
}

void g_symmetry(Recorder& rec) {
    for (const PotentialParams p : {PotentialParams{1.0, 1.0}, PotentialParams{0.5, 2.0}}) {
        const PotentialParams m{p.a, -p.g};
        const auto x = find_real_eigenvalues(p, default_energy_ceiling(p)).eigenvalues;
        const auto y = find_real_eigenvalues(m, default_energy_ceiling(m)).eigenvalues;
        const std::string tag = "a=" + std::to_string(p.a).substr(0, 3) + " |g|=" + std::to_string(p.g).substr(0, 3);
        double worst = x.size() == y.size() ? 0.0 : INFINITY;
        for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i)
            worst = std::max(worst, std::abs(x[i].E - y[i].E) / std::max(1.0, std::abs(x[i].E)));
        rec("g_symmetry", tag + " real spectrum", worst, 1e-8);
    }
    // The g < 0 matching condition written out with H2 and K, not by mirroring.
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ur(0.5, 30.0), ui(-2.0, 2.0), ug(0.3, 3.3);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const Complex E(ur(rng), ui(rng));
        const double g = ug(rng);
        const Wavenumbers w = wavenumbers(E, {1.0, g});
        const Complex sb = std::conj(w.s);
        const auto h2 = sf::hankel2_with_dz(I * w.q, sb);
        const auto k = sf::bessel_k_with_dz(I * w.p, sb);
        const Complex lit = -sb * (h2.derivative / h2.value + k.derivative / k.value);
        worst = std::max(worst, std::abs(log_derivative_mismatch(E, {1.0, -g}) - lit) / std::abs(lit));
    }
    rec("g_symmetry", "g < 0 matching condition, 10 points", worst, 1e-8);
    const ComplexPair a = find_complex_pair(unit, {37.58, 2.69}), b = find_complex_pair({1.0, -1.0}, {37.58, 2.69});
    rec("g_symmetry", "complex pair at g = -1", std::abs(a.upper.E - b.upper.E) / std::abs(a.upper.E), 1e-8);
}

void regressions(Recorder& rec, const UnitStates& s) {
    const double quoted[] = {3.27651, 8.83705, 13.7572, 21.3361, 25.6883};
    for (std::size_t i = 0; i < 5; ++i)
        rec("regressions", "a=1 g=1 E_" + std::to_string(i), std::abs(s.E.at(i).real() - quoted[i]), 5e-4);
    rec("regressions", "a=1 g=1 Re E_5", std::abs(s.E.at(6).real() - 37.5832), 5e-4);
    rec("regressions", "a=1 g=1 Im E_6 (finite-difference value)", std::abs(s.E.at(6).imag() - 2.68794), 1e-3);

    const WaveSamples& w5 = s.w.at(5);
    rec("regressions", "psi_5(1)", std::abs(psi(1.0, w5.E, unit) - Complex(0.661638, 0.121078)), 1e-3);
    rec("regressions", "psi_5(-1)", std::abs(psi(-1.0, w5.E, unit) - Complex(1.02862, -0.201041)), 1e-3);

    struct Count {
        double a, g;
        int n;
    };
    for (const Count c : {Count{0.5, 1.0, 9}, Count{1.0, 1.0, 5}, Count{2.0, 1.0, 3}, Count{5.0, 1.0, 1},
                          Count{1.0, 0.1, 13}, Count{1.0, 0.2, 11}}) {
        const PotentialParams p{c.a, c.g};
        const auto n = find_real_eigenvalues(p, default_energy_ceiling(p)).eigenvalues.size();
        rec("regressions",
            "real count at a=" + std::to_string(c.a).substr(0, 3) + " g=" + std::to_string(c.g).substr(0, 3),
            std::abs(static_cast<double>(n) - c.n), 0.0);
    }

    struct Ep {
        double a, g, E, quoted, tol;
    };
    for (const Ep e : {Ep{1.0, 0.7385, 33.66, 0.74, 0.01}, Ep{1.0, 1.5716, 28.39, 1.58, 0.01},
                       Ep{1.0, 5.3431, 26.69, 5.35, 0.01}, Ep{0.5, 1.617, 158.06, 1.62, 0.02},
                       Ep{0.5, 2.954, 134.65, 2.96, 0.02}, Ep{0.5, 6.2866, 113.56, 6.29, 0.02},
                       Ep{0.5, 21.3726, 106.74, 21.38, 0.02}}) {
        const ExceptionalPoint ep = refine_exceptional_point(e.a, e.g, e.E);
        rec("regressions", "EP near g=" + std::to_string(e.quoted).substr(0, 5) + " at a=" + std::to_string(e.a).substr(0, 3),
            std::abs(ep.g_star - e.quoted), e.tol);
    }
}

}  // namespace

bool SelftestReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::vector<std::string> suite_names() {
    return {"wronskian",      "ode_residual", "pt_properties", "conjugation_symmetry",
            "oracle_closure", "pole_root",    "g_symmetry",    "regressions"};
}

SelftestReport run_selftest(double tolerance_scale, unsigned threads) {
    const auto t0 = std::chrono::steady_clock::now();
    SelftestReport r;
    Recorder rec(r.checks, tolerance_scale);
    rec.guarded("wronskian", [&] { wronskians(rec); });
    UnitStates states;
    bool have_states = false;
    rec.guarded("ode_residual", [&] {
        states = unit_states(threads);
        have_states = true;
    });
    if (have_states) {
        rec.guarded("ode_residual", [&] { ode_residuals(rec, states); });
        rec.guarded("pt_properties", [&] { pt_properties(rec, states); });
    }
    rec.guarded("conjugation_symmetry", [&] { conjugation(rec); });
    rec.guarded("oracle_closure", [&] { oracle_closure(rec); });
    rec.guarded("pole_root", [&] { pole_root(rec, threads); });
    rec.guarded("g_symmetry", [&] { g_symmetry(rec); });
    if (have_states) rec.guarded("regressions", [&] { regressions(rec, states); });

    for (const auto& name : suite_names()) {
        SuiteCount c{name, 0, 0};
        for (const auto& k : r.checks)
            if (k.suite == name) {
                ++c.total;
                if (k.passed) ++c.passed;
            }
        if (c.total == 0) {
            // A suite that recorded nothing did not run.
            r.checks.push_back({name, "suite produced no checks", INFINITY, 0.0, false});
            c.total = 1;
        }
        r.suites.push_back(c);
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace ptexp::cli
