/**
 * @file eigenstates.hpp
 * @brief Eigenfunctions sampled on symmetric grids, their PT images, parity
 *        parts, and non-conjugated overlaps.
 */

#ifndef PTEXP_EIGENSTATES_HPP
#define PTEXP_EIGENSTATES_HPP

#include <string>
#include <vector>

#include "ptexp/model.hpp"

namespace ptexp {

enum class Normalization { origin_one, c_normalized };

std::string to_string(Normalization n);

struct WaveSamples {
    std::vector<double> grid;    ///< symmetric about 0
    std::vector<Complex> values;
    Complex E;
    Normalization normalization = Normalization::origin_one;
    Complex c_norm_constant{1.0, 0.0};  ///< sqrt of the self-overlap divided out
};

/// n points (odd, so 0 is a node) evenly spaced on [-half_width, half_width],
/// with x[n-1-i] = -x[i] exactly.
std::vector<double> symmetric_grid(double half_width, std::size_t n);

/// Default grid for a: [-8a, 8a] with 4001 points.
std::vector<double> default_grid(const PotentialParams& params);

/// psi_< for x <= 0 and psi_> for x >= 0, one at the origin.
WaveSamples evaluate_state(Complex E, const PotentialParams& params, const std::vector<double>& grid,
                           unsigned threads = 1);

/// (PT psi)(x) = conj(psi(-x)). Throws InvalidArgument on an asymmetric grid.
WaveSamples pt_transform(const WaveSamples& w);

struct ParitySplit {
    std::vector<double> even_part;  ///< Re psi
    std::vector<double> odd_part;   ///< Im psi
    double even_defect = 0.0;       ///< max |Re psi(x) - Re psi(-x)|
    double odd_defect = 0.0;        ///< max |Im psi(x) + Im psi(-x)|
};

ParitySplit parity_split(const WaveSamples& w);

struct Integral {
    Complex value;
    double tail_error = 0.0;  ///< exponential-decay extrapolation beyond both ends
};

/// Simpson integral of psi_1 psi_2 (no conjugation). Throws TailNotDecayed if
/// either state exceeds 1e-3 of its maximum at a grid end, InvalidArgument if
/// the grids differ.
Integral overlap(const WaveSamples& w1, const WaveSamples& w2);

/// Integral of conj(psi_1(-x)) psi_2(x).
Integral pt_inner(const WaveSamples& w1, const WaveSamples& w2);

/// Divides by the principal square root of the self-overlap. Throws
/// SolverFailure if that overlap vanishes.
WaveSamples c_normalize(const WaveSamples& w);

double max_abs(const WaveSamples& w);

/// max |a - b| / max |a|
double relative_sup_distance(const WaveSamples& a, const WaveSamples& b);

/// arg of <b, a> (conjugated in b): the phase alpha with a ~ e^{i alpha} b.
double best_fit_phase(const WaveSamples& a, const WaveSamples& b);

struct ResidualReport {
    double max_residual = 0.0;  ///< max |-psi'' + (V - E) psi| / (max(1, |E|) max|psi|)
    std::size_t points = 0;     ///< interior points checked
};

/// Fourth-order five-point second difference at every interior point.
ResidualReport schrodinger_residual(const WaveSamples& w, const PotentialParams& params);

}  // namespace ptexp

#endif
