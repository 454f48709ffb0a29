#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "moyal/grid.hpp"
#include "moyal/models/damped.hpp"
#include "moyal/quadrature.hpp"
#include "moyal/sampling.hpp"
#include "moyal/special.hpp"

namespace moyal {

/// Published reference values of the negativity indicator of the damped oscillator, n = 0..9.
inline constexpr std::array<double, 10> kTable1Eta = {
    0.0,
    0.4261226344263795,
    0.7289892587057898,
    0.9766730799293403,
    1.1913424288065964,
    1.3834384856692004,
    1.5588521972493026,
    1.7212933835545317,
    1.873265816082318,
    2.016572434609475,
};

enum class NegativityMethod { radial, grid };

inline const char* to_string(NegativityMethod m) { return m == NegativityMethod::radial ? "radial" : "grid"; }

struct NegativityRecord {
    std::string model;
    int n = 0;
    double lam = 0.0;
    NegativityMethod method = NegativityMethod::radial;
    double eta = 0.0;
    double err_estimate = 0.0;
};

/// Absolute error target of the radial method.
inline constexpr double kRadialTolerance = 1e-12;

namespace detail {

/// g(y) = e^{-y/2} L_n(y) / 2, the radial density of |W_n| in y.
inline double radial_density(int n, double y) { return 0.5 * std::exp(-0.5 * y) * laguerre(n, y); }

/// Smallest y beyond the last root with int_Y^inf |g| below `mass`.
inline double radial_tail_cutoff(int n, double mass) {
    const double last = n > 0 ? laguerre_roots(n).back() : 0.0;
    // beyond the last root |g| decreases once y > 2n; bound the tail by a geometric sum over unit steps
    double Y = std::max(last, 2.0 * n) + 1.0;
    while (true) {
        double tail = 0.0;
        for (double y = Y; y < Y + 400.0; y += 1.0) tail += std::abs(radial_density(n, y));
        if (tail <= mass) return Y;
        Y += 1.0;
    }
}

}  // namespace detail

/**
 * Negativity of the damped-oscillator state n by the radial method.
 *
 * In whitened coordinates W_n = ((-1)^n / pi) e^{-y/2} L_n(y) with unit Jacobian,
 * so eta = 2 sum over lobes where W_n < 0 of |int g(y) dy|.  Lobes are delimited
 * by the roots of L_n; each lobe is integrated adaptively.  The result does not
 * involve lambda.
 */
inline NegativityRecord eta_radial(int n) {
    if (n < 0) throw ParameterError("eta_radial: n must be nonnegative");
    NegativityRecord rec{"damped", n, 0.0, NegativityMethod::radial, 0.0, 0.0};
    if (n == 0) return rec;
    std::vector<double> edges{0.0};
    const auto roots = laguerre_roots(n);
    edges.insert(edges.end(), roots.begin(), roots.end());
    edges.push_back(detail::radial_tail_cutoff(n, 1e-3 * kRadialTolerance));
    const double lobe_tol = kRadialTolerance / (2.0 * (n + 1));
    auto g = [n](double y) { return detail::radial_density(n, y); };
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        const QuadResult r = integrate_adaptive(g, edges[k], edges[k + 1], lobe_tol);
        // sign of W on the lobe is (-1)^n times the sign of L_n there
        const double w_sign = (n % 2 ? -1.0 : 1.0) * r.value;
        if (w_sign < 0.0) {
            rec.eta += 2.0 * std::abs(r.value);
            rec.err_estimate += 2.0 * r.error;
        }
    }
    rec.err_estimate += 2e-3 * kRadialTolerance;
    return rec;
}

/// Initial partition per axis for the adaptive cubature in eta_grid.
inline constexpr int kGridInitialDivisions = 32;

/**
 * Negativity eta = int (|W| - W) / int W over a box, by adaptive cubature.
 * Dividing by int W re-imposes the normalization.  The box must contain all but
 * tol/10 of the mass; a boundary sup-norm check guards this.
 */
template <class F>
NegativityRecord eta_grid(const F& W, const Box& box, double tol) {
    if (!(tol > 0.0)) throw ParameterError("eta_grid: tol must be positive");
    if (!box.valid()) throw ParameterError("eta_grid: empty box");

    double edge = 0.0;
    constexpr int kEdgeSamples = 400;
    for (int k = 0; k <= kEdgeSamples; ++k) {
        const double tq = box.qmin + (box.qmax - box.qmin) * k / kEdgeSamples;
        const double tp = box.pmin + (box.pmax - box.pmin) * k / kEdgeSamples;
        edge = std::max({edge, std::abs(double(std::real(W(tq, box.pmin)))),
                         std::abs(double(std::real(W(tq, box.pmax)))), std::abs(double(std::real(W(box.qmin, tp)))),
                         std::abs(double(std::real(W(box.qmax, tp))))});
    }
    if (edge * box.area() > 0.1 * tol) {
        const double cq = 0.5 * (box.qmin + box.qmax), cp = 0.5 * (box.pmin + box.pmax);
        const double hq = 0.75 * (box.qmax - box.qmin), hp = 0.75 * (box.pmax - box.pmin);
        throw BoxTooSmallError("eta_grid: integrand does not decay inside the box; try [" + format_double(cq - hq) +
                                   ", " + format_double(cq + hq) + "] x [" + format_double(cp - hp) + ", " +
                                   format_double(cp + hp) + "]",
                               cq - hq, cq + hq, cp - hp, cp + hp);
    }

    auto neg = [&](double q, double p) {
        const double w = std::real(W(q, p));
        return std::abs(w) - w;
    };
    auto val = [&](double q, double p) { return double(std::real(W(q, p))); };
    // a fine initial partition keeps thin negative lobes from going unsampled
    const QuadResult rn =
        integrate_adaptive_2d(neg, {box.qmin, box.pmin}, {box.qmax, box.pmax}, 0.4 * tol, 400000, kGridInitialDivisions);
    const QuadResult rw =
        integrate_adaptive_2d(val, {box.qmin, box.pmin}, {box.qmax, box.pmax}, 0.1 * tol, 400000, kGridInitialDivisions);
    if (!(rw.value > 0.0)) throw DomainError("eta_grid: Wigner function must integrate to a positive value");
    NegativityRecord rec;
    rec.model = "callable";
    rec.method = NegativityMethod::grid;
    rec.eta = std::max(0.0, rn.value / rw.value);
    rec.err_estimate = (rn.error + rec.eta * rw.error) / rw.value + 0.1 * tol;
    return rec;
}

/// Negativity of a sampled field by the trapezoid rule, with a Richardson error estimate.
inline NegativityRecord eta_grid(const GridField& W) {
    const GridSpec& s = W.spec;
    auto trap = [&](int stride) {
        double neg = 0.0, val = 0.0;
        for (int i = 0; i < s.nq; i += stride) {
            const double wq = (i == 0 || i + stride >= s.nq) ? 0.5 : 1.0;
            for (int j = 0; j < s.np; j += stride) {
                const double wp = (j == 0 || j + stride >= s.np) ? 0.5 : 1.0;
                const double w = W.at(i, j).real();
                neg += wq * wp * (std::abs(w) - w);
                val += wq * wp * w;
            }
        }
        const double h = stride * stride * s.dq() * s.dp();
        return std::pair{neg * h, val * h};
    };
    const auto [neg, val] = trap(1);
    if (!(val > 0.0)) throw DomainError("eta_grid: Wigner function must integrate to a positive value");
    NegativityRecord rec;
    rec.model = "grid";
    rec.method = NegativityMethod::grid;
    rec.eta = neg / val;
    if (s.nq % 2 == 1 && s.np % 2 == 1) {
        const auto [neg2, val2] = trap(2);
        rec.err_estimate = std::abs(rec.eta - neg2 / val2) / 3.0;
    } else {
        rec.err_estimate = std::abs(rec.eta);
    }
    return rec;
}

/**
 * Box containing the ellipse y <= Y of the damped state (n, lambda), with Y chosen
 * so that the mass of |W| outside is at most tol/10 and |W| on the box edge
 * times the box area is below tol/10.
 */
inline Box negativity_box(int n, double lam, double tol) {
    DampedParams{lam, n}.validate();
    const QuadForm env = damped_envelope(lam);
    const Mat2 Ainv = env.A.real().inverse();
    const double Y0 = n > 0 ? laguerre_roots(n).back() : 0.0;
    double Y = std::max(Y0, 2.0 * n) + 2.0;
    while (true) {
        // y <= Y  <=>  x^T A x <= Y / 2
        const double hq = std::sqrt(0.5 * Y * Ainv(0, 0)), hp = std::sqrt(0.5 * Y * Ainv(1, 1));
        const double area = 4.0 * hq * hp;
        double tail = 0.0, peak = 0.0;
        for (double y = Y; y < Y + 400.0; y += 0.5) {
            const double g = std::abs(detail::radial_density(n, y));
            tail += 0.5 * g;
            peak = std::max(peak, 2.0 * g / M_PI);
        }
        if (tail <= 0.1 * tol && peak * area <= 0.1 * tol) return {-hq, hq, -hp, hp};
        Y += 1.0;
    }
}

/// eta for n = 0..n_max of the damped oscillator at the given lambda.
inline std::vector<NegativityRecord> negativity_table(int n_max, double lam, NegativityMethod method,
                                                      double tol = 1e-4) {
    if (n_max < 0) throw ParameterError("negativity_table: n_max must be nonnegative");
    std::vector<NegativityRecord> out;
    for (int n = 0; n <= n_max; ++n) {
        NegativityRecord r;
        if (method == NegativityMethod::radial) {
            r = eta_radial(n);
        } else {
            const PolyGauss W = damped_wigner({lam, n});
            r = eta_grid(W, negativity_box(n, lam, tol), tol);
        }
        r.model = "damped";
        r.n = n;
        r.lam = lam;
        out.push_back(r);
    }
    return out;
}

inline bool strictly_increasing(const std::vector<NegativityRecord>& recs) {
    for (std::size_t k = 1; k < recs.size(); ++k)
        if (!(recs[k].eta > recs[k - 1].eta)) return false;
    return true;
}

struct LambdaScanReport {
    int n = 0;
    double tol = 0.0;
    NegativityRecord radial;
    std::vector<NegativityRecord> grid;
    double max_deviation = 0.0;
    bool passed = false;
};

/// Grid-method eta at each lambda compared with the lambda-free radial value.
inline LambdaScanReport lambda_scan(int n, const std::vector<double>& lams, double tol) {
    if (!(tol > 0.0)) throw ParameterError("lambda_scan: tol must be positive");
    LambdaScanReport rep;
    rep.n = n;
    rep.tol = tol;
    rep.radial = eta_radial(n);
    const double qtol = 0.1 * tol;
    for (double lam : lams) {
        const PolyGauss W = damped_wigner({lam, n});
        NegativityRecord r = eta_grid(W, negativity_box(n, lam, qtol), qtol);
        r.model = "damped";
        r.n = n;
        r.lam = lam;
        rep.max_deviation = std::max(rep.max_deviation, std::abs(r.eta - rep.radial.eta));
        rep.grid.push_back(r);
    }
    rep.passed = rep.max_deviation <= tol;
    return rep;
}

}  // namespace moyal
