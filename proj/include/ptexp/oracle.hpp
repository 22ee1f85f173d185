/**
 * @file oracle.hpp
 * @brief Finite-difference reference spectrum of H = -d^2/dx^2 + V(x) on
 *        [-L, L] with Dirichlet walls, independent of the special functions.
 *
 * The second-order discretisation is complex symmetric and tridiagonal. Its
 * eigenvalues are obtained in two stages:
 *
 *  1. every eigenvalue of the same-spacing matrix restricted to the region
 *     where |V| <= 1e6, by implicitly shifted QL with complex rotations;
 *  2. each of those inside the energy window is polished by Newton's method
 *     on det(H - E), evaluated by the LDL^T pivot recurrence, on the full
 *     matrix and, for Richardson extrapolation, on the matrix of half the
 *     spacing.
 *
 * Stage 1 keeps the entries small enough for backward-stable rounding; the
 * excluded region carries states that are negligible below the window.
 */

#ifndef PTEXP_ORACLE_HPP
#define PTEXP_ORACLE_HPP

#include <string>
#include <vector>

#include "ptexp/model.hpp"

namespace ptexp {

struct OracleConfig {
    double L = 12.0;        ///< half-width of the domain
    int n = 4000;           ///< interior grid points, at least 100
    bool richardson = true; ///< combine h and h/2 as (4 E_{h/2} - E_h) / 3
    /// Eigenvalues with |E| above this are not reported (besides the
    /// reliability ceiling). 0 means 150 / a^2 + 20 |g|.
    double e_window = 0.0;
};

/// L = 12 max(a, 1), n = 4000, Richardson on.
OracleConfig default_oracle_config(double a);

/// Dirichlet second-difference Hamiltonian: diag 2/h^2 + V(x_i), off-diagonal
/// -1/h^2, x_i = -L + i h, i = 1..n, h = 2L/(n+1). g = 0 is allowed here.
struct TridiagonalMatrix {
    std::vector<Complex> diag;
    std::vector<Complex> off;  ///< off[i] couples i and i+1
    double h = 0.0;
    std::vector<double> x;
};

TridiagonalMatrix build_hamiltonian(double a, double g, const OracleConfig& cfg);

/// All eigenvalues of a complex symmetric tridiagonal matrix (implicit QL,
/// Wilkinson shifts). Throws SolverFailure if an eigenvalue does not converge.
std::vector<Complex> tridiagonal_eigenvalues(const TridiagonalMatrix& m);

/// d/dE log det(M - E) and the smallest pivot ratio, from the recurrence
/// r_1 = d_1 - E, r_k = d_k - E - e_{k-1}^2 / r_{k-1}.
Complex log_det_derivative(const TridiagonalMatrix& m, Complex E);

/// Newton's method on det(M - E). For ill-conditioned eigenvalues the steps
/// stall at a rounding floor; that last step size is stored in *noise.
/// Throws SolverFailure when it does not converge.
Complex polish_eigenvalue(const TridiagonalMatrix& m, Complex seed, double* noise = nullptr);

/// Eigenvector for an eigenvalue E of m by inverse iteration (tridiagonal
/// elimination at a shift 1e-10 |E| away from E), scaled to max |v| = 1.
std::vector<Complex> eigenvector(const TridiagonalMatrix& m, Complex E);

struct OracleEigenvalue {
    Complex E;       ///< extrapolated when Richardson is on, else E_h
    Complex E_h;
    Complex E_half;  ///< spacing h/2 (equal to E_h without Richardson)
    double est_disc_err = 0.0;  ///< |E_{h/2} - E_h| + 2 noise, or |E_h| h^2 without Richardson
    double solver_noise = 0.0;  ///< Newton rounding floor, 0 if it converged to 1e-14
};

struct OracleSpectrum {
    std::vector<OracleEigenvalue> eigenvalues;  ///< sorted by real part
    double h = 0.0;
    double ceiling = 0.0;  ///< (pi/h)^2 / 10
    double window = 0.0;
    OracleConfig config;
    std::vector<std::string> warnings;
};

OracleSpectrum diagonalize(const OracleConfig& cfg, double a, double g);
OracleSpectrum diagonalize(const OracleConfig& cfg, const PotentialParams& params);

/// Relative deviation of the eigenvalue multiset from its complex conjugate:
/// max over eigenvalues of the distance to the nearest conjugate, divided by
/// max(1, |E|).
double conjugate_closure_defect(const OracleSpectrum& s);

}  // namespace ptexp

#endif
