// Adaptive Gauss-Kronrod (7/15) quadrature for complex-valued integrands.

#ifndef PTEXP_SRC_QUADRATURE_HPP
#define PTEXP_SRC_QUADRATURE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "ptexp/types.hpp"

namespace ptexp::detail {

struct QuadratureResult {
    Complex value;
    double abs_error = 0.0;
    /// Integral of |f|, used to judge cancellation.
    double abs_integral = 0.0;
    bool converged = false;
};

namespace gk {
inline constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
}  // namespace gk

struct Panel {
    double lo, hi;
    Complex value;
    double error;
    double abs_value;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk15(F& f, double lo, double hi) {
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    Complex fc = f(c);
    Complex kron = fc * gk::wgk[7];
    Complex gauss = fc * gk::wg[3];
    double absk = std::abs(fc) * gk::wgk[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * gk::xgk[j];
        Complex f1 = f(c - dx), f2 = f(c + dx);
        kron += gk::wgk[j] * (f1 + f2);
        absk += gk::wgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) gauss += gk::wg[j / 2] * (f1 + f2);
    }
    return {lo, hi, kron * h, std::abs((kron - gauss) * h), absk * std::abs(h)};
}

/// Integrates f over [lo, hi] starting from `initial_panels` equal panels and
/// bisecting the worst panel until the summed error estimate is below
/// max(abs_tol, rel_tol * |I|, floor_rel * int |f|).
template <class F>
QuadratureResult integrate(F&& f, double lo, double hi, int initial_panels, double rel_tol,
                           double floor_rel = 1e-15, int max_panels = 4000) {
    std::priority_queue<Panel> heap;
    const double width = (hi - lo) / initial_panels;
    for (int i = 0; i < initial_panels; ++i) {
        const double a = lo + i * width;
        const double b = (i + 1 == initial_panels) ? hi : a + width;
        heap.push(gk15(f, a, b));
    }
    Complex total = 0.0;
    double err = 0.0, absint = 0.0;
    {
        auto copy = heap;
        while (!copy.empty()) {
            total += copy.top().value;
            err += copy.top().error;
            absint += copy.top().abs_value;
            copy.pop();
        }
    }
    for (;;) {
        const double tol = std::max(rel_tol * std::abs(total), floor_rel * absint);
        if (err <= tol || static_cast<int>(heap.size()) >= max_panels) {
            // Recompute the sums left to right so the result does not depend on
            // the update history.
            std::vector<Panel> all;
            all.reserve(heap.size());
            while (!heap.empty()) {
                all.push_back(heap.top());
                heap.pop();
            }
            std::sort(all.begin(), all.end(),
                      [](const Panel& x, const Panel& y) { return x.lo < y.lo; });
            QuadratureResult out;
            for (const auto& p : all) {
                out.value += p.value;
                out.abs_error += p.error;
                out.abs_integral += p.abs_value;
            }
            out.converged = err <= tol;
            return out;
        }
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        Panel left = gk15(f, worst.lo, mid), right = gk15(f, mid, worst.hi);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        absint += left.abs_value + right.abs_value - worst.abs_value;
        heap.push(left);
        heap.push(right);
    }
}

}  // namespace ptexp::detail

#endif
