/**
 * @file spectrum.hpp
 * @brief Discrete eigenvalues: zeros of the matching function
 *        f(E) = H^(1)'_{ipa}(sa) K_{iqa}(sa) + H^(1)_{ipa}(sa) K'_{iqa}(sa),
 *        their continuation in g, and the exceptional points where two real
 *        branches coalesce.
 *
 * Real roots are bracketed on the real axis through the log-derivative
 * mismatch D(E) = -s f(E) / (H K), which has the same zeros as f but is real
 * for real E, so its sign changes locate them.
 */

#ifndef PTEXP_SPECTRUM_HPP
#define PTEXP_SPECTRUM_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ptexp/model.hpp"

namespace ptexp {

enum class RootKind { real, complex_pair_member };

std::string to_string(RootKind k);

struct EigenvalueRecord {
    Complex E;
    int index = 0;
    RootKind kind = RootKind::real;
    double residual = 0.0;      ///< |f(E)|
    double rel_residual = 0.0;  ///< |f(E)| / (|H' K| + |H K'|)
    int newton_iters = 0;
};

/// |Im E| <= 1e-8 max(1, |Re E|)
RootKind classify(Complex E);

/// f(E) evaluated at (a, |g|). For g < 0 the spectrum is that of |g|.
Complex eigen_function(Complex E, const PotentialParams& params);

/// |f(E)| / (|H' K| + |H K'|): the residual relative to the size of the two
/// products that cancel at a root.
double relative_residual(Complex E, const PotentialParams& params);

struct ScanOptions {
    int points_per_decade = 2000;
    /// Lower end of the scan; 0 picks min(1e-3, E_max 1e-4).
    double e_min = 0.0;
    /// Worker threads for the grid evaluations; 0 uses the hardware count.
    unsigned threads = 1;
};

struct RealSpectrum {
    std::vector<EigenvalueRecord> eigenvalues;  ///< ascending, index = position
    double scale = 0.0;                         ///< median |f| over the scan grid
    std::size_t grid_points = 0;
    std::vector<std::string> warnings;          ///< ScanTooCoarse and similar
};

/// Acceptance threshold on EigenvalueRecord::rel_residual.
inline constexpr double kRootRelResidual = 1e-9;

RealSpectrum find_real_eigenvalues(const PotentialParams& params, double E_max, const ScanOptions& options = {});

/// Upper scan bound that clears every real eigenvalue of the parameter sets
/// studied here (a in [0.5, 5], |g| <= 30): 150/a^2 + 20|g|.
double default_energy_ceiling(const PotentialParams& params);

struct ComplexPair {
    EigenvalueRecord upper;  ///< Im E > 0
    EigenvalueRecord lower;  ///< its conjugate
};

/// Newton from a seed with Im(seed) != 0. Throws NoConvergence after 100
/// iterations or if the iteration lands on the real axis.
ComplexPair find_complex_pair(const PotentialParams& params, Complex seed);

/// Complex Newton on f with a central-difference derivative of step
/// 1e-6 max(1, |E|). Throws NoConvergence.
EigenvalueRecord newton_polish(const PotentialParams& params, Complex seed, int max_iters = 100);

// ---------------------------------------------------------------------------
// Branches in g and exceptional points
// ---------------------------------------------------------------------------

enum class TraceEnd { merged, range_end, lost };

std::string to_string(TraceEnd t);

struct BranchSample {
    double g = 0.0;
    Complex E;
};

struct BranchTrace {
    double a = 1.0;
    std::vector<BranchSample> samples;  ///< g strictly increasing
    TraceEnd terminated_by = TraceEnd::range_end;
    /// For merged traces: the largest-g point the continuation reached before
    /// turning back, a seed for find_exceptional_point.
    std::optional<BranchSample> fold;
};

/// Pseudo-arclength continuation of a real root of f from (g_lo, E_seed).
/// The trace ends as `merged` when dg/ds changes sign (the branch folds back
/// onto its neighbour).
BranchTrace trace_branch(double a, std::pair<double, double> g_range, double E_seed, double step);

struct ExceptionalPoint {
    double a = 1.0;
    double g_star = 0.0;
    Complex E_star;
    std::pair<int, int> pair{-1, -1};  ///< branch indices at the lower end of the bracket
    double rel_residual_f = 0.0;       ///< |f| / (|H' K| + |H K'|)
    double rel_residual_df = 0.0;      ///< |f_E| (1 + |E|) / (|H' K| + |H K'|)
    int newton_iters = 0;
};

/// Joint Newton on (D, dD/dE) over (g, E), seeded from the fold of the merging
/// branches. pair_seeds are the two real eigenvalues at g_lo that coalesce; if
/// absent, every branch at g_lo is traced. Throws BracketInvalid unless the
/// real-eigenvalue count changes by exactly 2 across the bracket.
ExceptionalPoint find_exceptional_point(double a, std::pair<double, double> g_bracket,
                                        std::optional<std::pair<double, double>> pair_seeds = std::nullopt,
                                        unsigned threads = 1);

/// Newton polish of an EP seed (g, E).
ExceptionalPoint refine_exceptional_point(double a, double g_seed, double E_seed);

struct EpScan {
    double a = 1.0;
    std::vector<ExceptionalPoint> points;  ///< ascending in g
    std::vector<BranchTrace> traces;       ///< one per real eigenvalue at g_lo
    int count_lo = 0, count_hi = 0;        ///< real-eigenvalue counts at the range ends
    std::vector<std::string> warnings;
};

EpScan ep_scan(double a, double g_lo, double g_hi, double step, unsigned threads = 1);

}  // namespace ptexp

#endif
