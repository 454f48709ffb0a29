#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <string>

#include "moyal/grid.hpp"
#include "moyal/quadrature.hpp"

namespace moyal {

/// One-dimensional wavefunction x -> phi(x).
using Wavefunction = std::function<cplx(double)>;

/// Gauss-Legendre order per panel and target panel width of the composite rule.
inline constexpr int kWignerPanelOrder = 16;
inline constexpr double kWignerPanelWidth = 0.5;

namespace detail {

/// Composite Gauss-Legendre nodes and weights on [a, b].
inline void composite_rule(double a, double b, std::vector<double>& x, std::vector<double>& w) {
    static const GaussLegendre gl(kWignerPanelOrder);
    x.clear();
    w.clear();
    if (!(b > a)) return;
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / kWignerPanelWidth)));
    const double h = (b - a) / panels;
    for (int k = 0; k < panels; ++k) {
        const double m = a + (k + 0.5) * h;
        for (int i = 0; i < kWignerPanelOrder; ++i) {
            x.push_back(m + 0.5 * h * gl.nodes[i]);
            w.push_back(0.5 * h * gl.weights[i]);
        }
    }
}

inline void check_support(const Wavefunction& phi, double support) {
    if (!(support > 0.0) || !std::isfinite(support)) throw DomainError("wigner transform: support must be finite and positive");
    std::vector<double> x, w;
    composite_rule(-support, support, x, w);
    double peak = 0.0;
    for (double xi : x) peak = std::max(peak, std::norm(phi(xi)));
    const double edge = std::max(std::norm(phi(-support)), std::norm(phi(support)));
    if (!std::isfinite(edge) || !std::isfinite(peak) || edge > 1e-10 * peak)
        throw DomainError("wigner transform: wavefunction is not negligible at the declared support edge");
}

}  // namespace detail

/// Squared norm of phi over [-support, support].
inline double wavefunction_norm2(const Wavefunction& phi, double support) {
    std::vector<double> x, w;
    detail::composite_rule(-support, support, x, w);
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += w[k] * std::norm(phi(x[k]));
    return s;
}

/// W(q, p) = (2 pi hbar)^{-1} int dz e^{i p z / hbar} phi*(q + z/2) phi(q - z/2) at one point.
inline double wigner_at(const Wavefunction& phi, double support, double q, double p, double hbar = 1.0) {
    const double zmax = 2.0 * (support - std::abs(q));
    if (zmax <= 0.0) return 0.0;
    std::vector<double> z, w;
    detail::composite_rule(-zmax, zmax, z, w);
    cplx s{};
    for (std::size_t k = 0; k < z.size(); ++k)
        s += w[k] * std::polar(1.0, p * z[k] / hbar) * std::conj(phi(q + 0.5 * z[k])) * phi(q - 0.5 * z[k]);
    return s.real() / (2.0 * M_PI * hbar);
}

/**
 * Wigner function of a 1D wavefunction sampled on a grid.
 * phi must be negligible outside [-support, support]; a norm different from 1
 * is reported as a warning on the returned field.
 */
inline GridField wigner_from_wavefunction(const Wavefunction& phi, double support, const GridSpec& spec,
                                          double hbar = 1.0) {
    detail::check_support(phi, support);
    GridField out(spec, hbar);
    const double norm2 = wavefunction_norm2(phi, support);
    if (std::abs(norm2 - 1.0) > 1e-6)
        out.warnings.push_back("wavefunction is not normalized: norm^2 = " + format_double(norm2));

    parallel_for(static_cast<std::size_t>(spec.nq), [&](std::size_t i) {
        const double q = spec.q(static_cast<int>(i));
        const double zmax = 2.0 * (support - std::abs(q));
        if (zmax <= 0.0) return;
        std::vector<double> z, w;
        detail::composite_rule(-zmax, zmax, z, w);
        std::vector<cplx> g(z.size()), ph(z.size()), step(z.size());
        for (std::size_t k = 0; k < z.size(); ++k) {
            g[k] = w[k] * std::conj(phi(q + 0.5 * z[k])) * phi(q - 0.5 * z[k]);
            ph[k] = std::polar(1.0, spec.pmin * z[k] / hbar);
            step[k] = std::polar(1.0, spec.dp() * z[k] / hbar);
        }
        for (int j = 0; j < spec.np; ++j) {
            cplx s{};
            for (std::size_t k = 0; k < z.size(); ++k) s += g[k] * ph[k];
            out.at(static_cast<int>(i), j) = s.real() / (2.0 * M_PI * hbar);
            // re-anchor the phase recursion periodically to bound drift
            const bool reanchor = (j + 1) % 32 == 0;
            for (std::size_t k = 0; k < z.size(); ++k)
                ph[k] = reanchor ? std::polar(1.0, spec.p(j + 1) * z[k] / hbar) : ph[k] * step[k];
        }
    });
    return out;
}

/// Normalized oscillator eigenfunction phi_n(x) for mass m, frequency omega.
inline double hermite_function(int n, double x, double m = 1.0, double omega = 1.0, double hbar = 1.0) {
    if (n < 0) throw ParameterError("hermite_function: n must be nonnegative");
    const double s = std::sqrt(m * omega / hbar);
    const double t = s * x;
    double prev = 0.0, cur = std::pow(M_PI, -0.25) * std::exp(-0.5 * t * t);
    for (int k = 0; k < n; ++k) {
        const double next = std::sqrt(2.0 / (k + 1.0)) * t * cur - std::sqrt(k / (k + 1.0)) * prev;
        prev = cur;
        cur = next;
    }
    return cur * std::sqrt(s);
}

}  // namespace moyal
