/**
 * @file scattering.hpp
 * @brief Reflection amplitude for E > 0 and its poles on the real axis.
 *
 *   r(E) = i [K'_{iqa}(sa) H^(2)_{-ipa}(sa) + K_{iqa}(sa) H^(2)'_{-ipa}(sa)] / f(E)
 *
 * with f the matching function of the spectrum module, so the real poles of
 * R = |r|^2 are the real eigenvalues. Only the reflection channel is defined:
 * the potential diverges on both sides.
 */

#ifndef PTEXP_SCATTERING_HPP
#define PTEXP_SCATTERING_HPP

#include <string>
#include <vector>

#include "ptexp/model.hpp"

namespace ptexp {

struct ReflectionValue {
    Complex r;
    Complex numerator;    ///< i (K' H2 + K H2')
    Complex denominator;  ///< f(E)
};

/// Throws InvalidArgument for E <= 0. Evaluated at (a, |g|).
ReflectionValue reflection(double E, const PotentialParams& params);

Complex reflection_amplitude(double E, const PotentialParams& params);

struct ReflectivitySample {
    double E = 0.0;
    Complex r;
    double R = 0.0;          ///< |r|^2
    bool pole_flag = false;  ///< adjacent to a real pole
    /// |f| below 1e-10 times the median |f| of the scan.
    bool pole_proximity = false;
    std::string error;       ///< non-empty if this point failed to evaluate
};

/// One sample per grid point (strictly increasing, all > 0). A sample is
/// flagged when it is within 1e-10 relative of a zero of f, or when it
/// borders a grid interval across which D = psi_<'(0) - psi_>'(0) changes sign
/// and |D| dips (a root rather than a pole of D).
std::vector<ReflectivitySample> reflectivity_scan(const PotentialParams& params, const std::vector<double>& E_grid,
                                                  unsigned threads = 1);

struct PoleCluster {
    std::size_t first = 0, last = 0;  ///< sample index range
    double E_pole = 0.0;              ///< R maximised by golden section inside the cluster
    double R_pole = 0.0;
};

/// Runs of consecutive flagged samples, each refined to the location of its pole.
std::vector<PoleCluster> pole_clusters(const PotentialParams& params, const std::vector<ReflectivitySample>& samples);

/// Interior local maxima of R among unflagged samples: finite humps.
std::vector<std::size_t> finite_maxima(const std::vector<ReflectivitySample>& samples);

/// Uniform grid of n points on [E_lo, E_hi].
std::vector<double> uniform_grid(double E_lo, double E_hi, std::size_t n);

}  // namespace ptexp

#endif
