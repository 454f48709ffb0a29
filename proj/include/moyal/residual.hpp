#pragma once

#include <algorithm>
#include <cmath>

#include "moyal/bopp.hpp"
#include "moyal/sampling.hpp"

namespace moyal {

/// Grid resolution used to estimate max|f| over the sample box.
inline constexpr int kResidualScaleGrid = 101;

/// Largest |f| over the box, estimated on a uniform grid plus the given points.
template <class F>
double max_abs_on_box(const F& f, const Box& box, const std::vector<std::array<double, 2>>& extra) {
    double m = 0.0;
    const int n = kResidualScaleGrid;
    for (int i = 0; i < n; ++i) {
        const double q = box.qmin + (box.qmax - box.qmin) * i / (n - 1);
        for (int j = 0; j < n; ++j) {
            const double p = box.pmin + (box.pmax - box.pmin) * j / (n - 1);
            m = std::max(m, std::abs(f(q, p)));
        }
    }
    for (const auto& x : extra) m = std::max(m, std::abs(f(x[0], x[1])));
    return m;
}

/**
 * max_x |(H * f)(x) - E f(x)| / max|f| over Halton samples in the box.
 */
inline double eigen_residual(const PolynomialSymbol& H, const PolyGauss& f, double E, const Box& box,
                             std::size_t n_samples) {
    if (n_samples < 1) throw ParameterError("eigen_residual: n_samples must be positive");
    const PolyGauss Hf = star_left(H, f);
    const auto pts = sample_points(box, n_samples);
    const double scale = max_abs_on_box(f, box, pts);
    if (scale == 0.0) return 0.0;
    double r = 0.0;
    for (const auto& x : pts) r = std::max(r, std::abs(Hf(x[0], x[1]) - E * f(x[0], x[1])));
    return r / scale;
}

}  // namespace moyal
