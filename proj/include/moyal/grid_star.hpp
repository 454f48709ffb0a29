#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "moyal/grid.hpp"
#include "moyal/parallel.hpp"

namespace moyal {

/// Fields must fall below this fraction of their peak on the box boundary.
inline constexpr double kBoundaryDecay = 1e-10;

namespace detail {

/// Centered DFT frequencies m = k - floor(n/2), wave numbers 2 pi m / (n h).
struct FreqAxis {
    int n = 0;
    int mlo = 0;
    std::vector<double> kappa;

    FreqAxis(int n_, double h) : n(n_), mlo(-(n_ / 2)), kappa(n_) {
        for (int k = 0; k < n; ++k) kappa[k] = 2.0 * M_PI * (k + mlo) / (n * h);
    }
};

/// Forward DFT matrix  exp(-i kappa_m x_j) / n  and its inverse  exp(+i kappa_m x_j).
struct DftTables {
    std::vector<cplx> fwd;  // [m * n + j]
    std::vector<cplx> inv;  // [j * n + m]

    DftTables(const FreqAxis& ax, double xmin) : fwd(ax.n * ax.n), inv(ax.n * ax.n) {
        const int n = ax.n;
        for (int m = 0; m < n; ++m) {
            const int mm = m + ax.mlo;
            const cplx offset = std::polar(1.0, -ax.kappa[m] * xmin);
            for (int j = 0; j < n; ++j) {
                // reduce m j modulo n before forming the angle
                const long r = ((static_cast<long>(mm) * j) % n + n) % n;
                const cplx tw = std::polar(1.0, -2.0 * M_PI * static_cast<double>(r) / n) * offset;
                fwd[m * n + j] = tw / static_cast<double>(n);
                inv[j * n + m] = std::conj(tw);
            }
        }
    }
};

/// 2D transform: out[a][b] = sum_{i,j} Tq[a*nq+i] Tp[b*np+j] in[i][j].
inline std::vector<cplx> transform_2d(const std::vector<cplx>& in, int nq, int np, const std::vector<cplx>& Tq,
                                      const std::vector<cplx>& Tp) {
    std::vector<cplx> tmp(in.size()), out(in.size());
    // along p
    parallel_for(static_cast<std::size_t>(nq), [&](std::size_t i) {
        const cplx* row = &in[i * np];
        for (int b = 0; b < np; ++b) {
            cplx s{};
            const cplx* t = &Tp[static_cast<std::size_t>(b) * np];
            for (int j = 0; j < np; ++j) s += t[j] * row[j];
            tmp[i * np + b] = s;
        }
    });
    // along q
    parallel_for(static_cast<std::size_t>(nq), [&](std::size_t a) {
        const cplx* t = &Tq[a * nq];
        for (int b = 0; b < np; ++b) {
            cplx s{};
            for (int i = 0; i < nq; ++i) s += t[i] * tmp[static_cast<std::size_t>(i) * np + b];
            out[a * np + b] = s;
        }
    });
    return out;
}

inline void check_boundary_decay(const GridField& f, const char* name, std::vector<std::string>& warnings) {
    const double peak = f.max_abs();
    double edge = 0.0;
    const int nq = f.spec.nq, np = f.spec.np;
    for (int i = 0; i < nq; ++i) edge = std::max({edge, std::abs(f.at(i, 0)), std::abs(f.at(i, np - 1))});
    for (int j = 0; j < np; ++j) edge = std::max({edge, std::abs(f.at(0, j)), std::abs(f.at(nq - 1, j))});
    if (edge > kBoundaryDecay * peak)
        warnings.push_back(std::string("boundary decay violated by ") + name + ": edge/peak = " +
                           format_double(peak > 0.0 ? edge / peak : 0.0));
}

}  // namespace detail

/**
 * Star product of two sampled fields by discrete twisted convolution.
 *
 * With f = sum_a F_a e^{i a.x} and g = sum_b G_b e^{i b.x} on the grid's
 * Fourier modes,
 *
 *     (f * g)^(k) = sum_b F_{k-b} G_b exp(-(i hbar / 2)(k_q b_p - k_p b_q)),
 *
 * summed directly over all mode pairs whose sum stays inside the band
 * (no wrap-around).  Cost is quadratic in the number of grid nodes.  Every
 * output mode is summed in a fixed order by a single worker.
 */
inline GridField star_numeric(const GridField& A, const GridField& B) {
    require_same_grid(A, B, "star_numeric");
    const GridSpec& s = A.spec;
    const int nq = s.nq, np = s.np;
    const double hbar = A.hbar;

    GridField out(s, hbar);
    out.warnings = A.warnings;
    out.warnings.insert(out.warnings.end(), B.warnings.begin(), B.warnings.end());
    detail::check_boundary_decay(A, "left operand", out.warnings);
    detail::check_boundary_decay(B, "right operand", out.warnings);

    const detail::FreqAxis axq(nq, s.dq()), axp(np, s.dp());
    const detail::DftTables tq(axq, s.qmin), tp(axp, s.pmin);
    const std::vector<cplx> F = detail::transform_2d(A.values, nq, np, tq.fwd, tp.fwd);
    const std::vector<cplx> G = detail::transform_2d(B.values, nq, np, tq.fwd, tp.fwd);

    // phase factors split as exp(-(i hbar/2) k_q b_p) * exp(+(i hbar/2) k_p b_q)
    std::vector<cplx> Eq(static_cast<std::size_t>(nq) * np), Ep(static_cast<std::size_t>(np) * nq);
    for (int mq = 0; mq < nq; ++mq)
        for (int bp = 0; bp < np; ++bp) Eq[mq * np + bp] = std::polar(1.0, -0.5 * hbar * axq.kappa[mq] * axp.kappa[bp]);
    for (int mp = 0; mp < np; ++mp)
        for (int bq = 0; bq < nq; ++bq) Ep[mp * nq + bq] = std::polar(1.0, 0.5 * hbar * axp.kappa[mp] * axq.kappa[bq]);

    // mode index k corresponds to m = k + mlo; a difference of modes lands at index k - b - mlo
    const int oq = axq.mlo, op = axp.mlo;
    std::vector<cplx> H(static_cast<std::size_t>(nq) * np);
    parallel_for(static_cast<std::size_t>(nq), [&](std::size_t mq_) {
        const int mq = static_cast<int>(mq_);
        std::vector<double> gr(np), gi(np), acc_r(np), acc_i(np);
        for (int bq = 0; bq < nq; ++bq) {
            const int aq = mq - bq - oq;
            if (aq < 0 || aq >= nq) continue;
            for (int bp = 0; bp < np; ++bp) {
                const cplx v = G[bq * np + bp] * Eq[mq * np + bp];
                gr[bp] = v.real();
                gi[bp] = v.imag();
            }
            const cplx* frow = &F[static_cast<std::size_t>(aq) * np];
            for (int mp = 0; mp < np; ++mp) {
                // bp ranges over indices with 0 <= mp - bp - op < np
                const int lo = std::max(0, mp - op - np + 1), hi = std::min(np - 1, mp - op);
                double sr = 0.0, si = 0.0;
                for (int bp = lo; bp <= hi; ++bp) {
                    const cplx f = frow[mp - bp - op];
                    sr += f.real() * gr[bp] - f.imag() * gi[bp];
                    si += f.real() * gi[bp] + f.imag() * gr[bp];
                }
                const cplx e = Ep[mp * nq + bq];
                acc_r[mp] += sr * e.real() - si * e.imag();
                acc_i[mp] += sr * e.imag() + si * e.real();
            }
        }
        for (int mp = 0; mp < np; ++mp) H[mq_ * np + mp] = {acc_r[mp], acc_i[mp]};
    });

    out.values = detail::transform_2d(H, nq, np, tq.inv, tp.inv);
    return out;
}

/// A * B - B * A on the grid.
inline GridField moyal_bracket_numeric(const GridField& A, const GridField& B) {
    return star_numeric(A, B) - star_numeric(B, A);
}

/**
 * Smooth flat-top window  (erf((x + t0)/w) - erf((x - t0)/w)) / 2:
 * equal to 1 well inside |x| < t0, Gaussian-fast decay outside.
 * Used to turn polynomial symbols into decaying grid fields.
 */
struct FlatTopWindow {
    double t0 = 7.0;
    double w = 0.6;

    double operator()(double x) const { return 0.5 * (std::erf((x + t0) / w) - std::erf((x - t0) / w)); }
    double operator()(double q, double p) const { return (*this)(q) * (*this)(p); }
};

}  // namespace moyal
