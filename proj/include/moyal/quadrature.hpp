#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

#include "moyal/errors.hpp"

namespace moyal {

/// Integral value with an error estimate.
struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussLegendre(int n) : nodes(n), weights(n) {
        if (n < 1) throw ParameterError("GaussLegendre: order must be positive");
        for (int i = 0; i < (n + 1) / 2; ++i) {
            double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                if (n == 1) p0 = 1.0;
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }

    /// Fixed-order rule on [a, b].
    template <class F>
    auto integrate(const F& f, double a, double b) const {
        const double h = 0.5 * (b - a), m = 0.5 * (a + b);
        decltype(f(m)) s{};
        for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(m + h * nodes[i]);
        return s * h;
    }
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule
inline constexpr std::array<double, 8> kXgk = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                               0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                               0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                               0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                               0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                               0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                               0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                              0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
QuadResult gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double rk = fc * kWgk[7], rg = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double x = h * kXgk[j];
        const double f1 = f(c - x), f2 = f(c + x);
        rk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) rg += kWg[j / 2] * (f1 + f2);
    }
    return {rk * h, std::abs((rk - rg) * h), 15};
}

}  // namespace detail

/**
 * Globally adaptive Gauss-Kronrod (G7/K15) quadrature of a smooth function on [a, b].
 * Stops when the summed error estimate is below max(abs_tol, rel_tol |I|).
 */
template <class F>
QuadResult integrate_adaptive(const F& f, double a, double b, double abs_tol, double rel_tol = 0.0,
                              int max_intervals = 2000) {
    struct Panel {
        double a, b;
        QuadResult r;
        bool operator<(const Panel& o) const { return r.error < o.r.error; }
    };
    std::priority_queue<Panel> heap;
    QuadResult total;
    auto push = [&](double lo, double hi) {
        QuadResult r = detail::gk15(f, lo, hi);
        total.value += r.value;
        total.error += r.error;
        total.evaluations += r.evaluations;
        heap.push({lo, hi, r});
    };
    push(a, b);
    while (total.error > std::max(abs_tol, rel_tol * std::abs(total.value))) {
        if (static_cast<int>(heap.size()) >= max_intervals)
            throw ConvergenceError("integrate_adaptive: interval budget exhausted");
        Panel worst = heap.top();
        heap.pop();
        total.value -= worst.r.value;
        total.error -= worst.r.error;
        const double m = 0.5 * (worst.a + worst.b);
        push(worst.a, m);
        push(m, worst.b);
    }
    // re-sum to remove drift from repeated subtraction
    QuadResult out;
    out.evaluations = total.evaluations;
    while (!heap.empty()) {
        out.value += heap.top().r.value;
        out.error += heap.top().r.error;
        heap.pop();
    }
    return out;
}

namespace detail {

/// Genz-Malik degree-7 rule with embedded degree-5 estimate on a 2D rectangle.
struct GenzMalik2D {
    static constexpr double l2 = 0.35856858280031809199;  // sqrt(9/70)
    static constexpr double l3 = 0.94868329805051379960;  // sqrt(9/10)
    static constexpr double l5 = 0.68824720161168529772;  // sqrt(9/19)
    static constexpr double w1 = -3816.0 / 19683.0;
    static constexpr double w2 = 980.0 / 6561.0;
    static constexpr double w3 = 1020.0 / 19683.0;
    static constexpr double w4 = 200.0 / 19683.0;
    static constexpr double w5 = 6859.0 / 19683.0 / 4.0;
    static constexpr double v1 = -971.0 / 729.0;
    static constexpr double v2 = 245.0 / 486.0;
    static constexpr double v3 = 65.0 / 1458.0;
    static constexpr double v4 = 25.0 / 729.0;

    struct Out {
        double value, error;
        int split_axis;
    };

    template <class F>
    static Out apply(const F& f, const std::array<double, 2>& c, const std::array<double, 2>& h) {
        const double f0 = f(c[0], c[1]);
        double s2 = 0.0, s3 = 0.0, s4 = 0.0, s5 = 0.0;
        std::array<double, 2> diff{};
        for (int i = 0; i < 2; ++i) {
            auto at = [&](double t) {
                std::array<double, 2> x = c;
                x[i] += t * h[i];
                return f(x[0], x[1]);
            };
            const double a2 = at(-l2), b2 = at(l2), a3 = at(-l3), b3 = at(l3);
            s2 += a2 + b2;
            s3 += a3 + b3;
            diff[i] = std::abs((a2 + b2 - 2.0 * f0) - (l2 * l2 / (l3 * l3)) * (a3 + b3 - 2.0 * f0));
        }
        for (int sa : {-1, 1})
            for (int sb : {-1, 1}) {
                s4 += f(c[0] + sa * l3 * h[0], c[1] + sb * l3 * h[1]);
                s5 += f(c[0] + sa * l5 * h[0], c[1] + sb * l5 * h[1]);
            }
        const double vol = 4.0 * h[0] * h[1];
        const double r7 = vol * (w1 * f0 + w2 * s2 + w3 * s3 + w4 * s4 + w5 * s5);
        const double r5 = vol * (v1 * f0 + v2 * s2 + v3 * s3 + v4 * s4);
        const int axis = diff[1] > diff[0] * (1.0 + 1e-12) ? 1 : 0;
        return {r7, std::abs(r7 - r5), axis};
    }
};

}  // namespace detail

/**
 * Globally adaptive cubature on a rectangle with the Genz-Malik rule.
 * Regions with the largest error estimate are halved along the axis with the
 * largest fourth difference until the total estimate meets abs_tol.
 */
template <class F>
QuadResult integrate_adaptive_2d(const F& f, std::array<double, 2> lo, std::array<double, 2> hi, double abs_tol,
                                 int max_regions = 200000, int initial_divisions = 1) {
    if (initial_divisions < 1) throw ParameterError("integrate_adaptive_2d: initial_divisions must be positive");
    struct Region {
        std::array<double, 2> c, h;
        double value, error;
        int axis;
        bool operator<(const Region& o) const { return error < o.error; }
    };
    std::priority_queue<Region> heap;
    double value = 0.0, error = 0.0;
    int evals = 0;
    auto push = [&](std::array<double, 2> c, std::array<double, 2> h) {
        const auto r = detail::GenzMalik2D::apply(f, c, h);
        value += r.value;
        error += r.error;
        evals += 17;
        heap.push({c, h, r.value, r.error, r.split_axis});
    };
    const std::array<double, 2> h0 = {0.5 * (hi[0] - lo[0]) / initial_divisions,
                                      0.5 * (hi[1] - lo[1]) / initial_divisions};
    for (int i = 0; i < initial_divisions; ++i)
        for (int j = 0; j < initial_divisions; ++j)
            push({lo[0] + (2 * i + 1) * h0[0], lo[1] + (2 * j + 1) * h0[1]}, h0);
    while (error > abs_tol) {
        if (static_cast<int>(heap.size()) >= max_regions)
            throw ConvergenceError("integrate_adaptive_2d: region budget exhausted");
        Region r = heap.top();
        heap.pop();
        value -= r.value;
        error -= r.error;
        auto h = r.h;
        h[r.axis] *= 0.5;
        auto c1 = r.c, c2 = r.c;
        c1[r.axis] -= h[r.axis];
        c2[r.axis] += h[r.axis];
        push(c1, h);
        push(c2, h);
    }
    QuadResult out;
    out.evaluations = evals;
    while (!heap.empty()) {
        out.value += heap.top().value;
        out.error += heap.top().error;
        heap.pop();
    }
    return out;
}

}  // namespace moyal
