#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "moyal/poly_gauss.hpp"

namespace moyal {

namespace detail {

/// Principal-branch sqrt(det A) for complex symmetric A with positive definite real part.
inline cplx sqrt_det_positive(const Mat2c& A) {
    const Mat2 R = A.real();
    const Mat2 S = A.imag();
    // det A = det R * prod (1 + i mu_k), mu_k generalized eigenvalues of (S, R)
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat2> es(S, R);
    cplx r = std::sqrt(R.determinant());
    for (int k = 0; k < 2; ++k) r *= std::sqrt(cplx(1.0, es.eigenvalues()(k)));
    return r;
}

/// Scalar Gaussian moments h_alpha(g; H) for alpha up to (amax, bmax), stored [a][b].
inline std::vector<std::vector<cplx>> gaussian_moments(const Vec2c& g, const Mat2c& H, int amax, int bmax) {
    std::vector<std::vector<cplx>> h(amax + 1, std::vector<cplx>(bmax + 1));
    h[0][0] = 1.0;
    for (int a = 0; a <= amax; ++a) {
        for (int b = 0; b <= bmax; ++b) {
            if (a == 0 && b == 0) continue;
            if (b > 0) {
                cplx v = g(1) * h[a][b - 1];
                if (a > 0) v += H(1, 0) * double(a) * h[a - 1][b - 1];
                if (b > 1) v += H(1, 1) * double(b - 1) * h[a][b - 2];
                h[a][b] = v;
            } else {
                cplx v = g(0) * h[a - 1][0];
                if (a > 1) v += H(0, 0) * double(a - 1) * h[a - 2][0];
                h[a][0] = v;
            }
        }
    }
    return h;
}

}  // namespace detail

/// Exact integral of f over the whole (q, p) plane.
inline cplx integrate(const PolyGauss& f) {
    if (!f.normalizable()) throw DomainError("integrate: Gaussian part is not normalizable");
    if (f.is_zero()) return {};
    const Mat2& T = f.frame().T;
    const Vec2& c = f.frame().c;
    const Mat2 Ti = T.inverse();
    const Mat2c Tic = Ti.cast<cplx>();
    const Mat2c& A = f.shape().A;
    const Vec2c& l = f.shape().l;
    const Vec2c cc = c.cast<cplx>();

    // exponent in frame coordinates xi, with x = Ti xi + c
    const Mat2c A1 = Tic.transpose() * A * Tic;
    const Vec2c l1 = Tic.transpose() * (l - 2.0 * A * cc);
    const cplx k1 = f.shape().k - (cc.transpose() * A * cc)(0) + (l.transpose() * cc)(0);

    const Mat2c A1inv = A1.inverse();
    const Vec2c g = 0.5 * A1inv * l1;
    const Mat2c H = 0.5 * A1inv;
    const cplx base = std::abs(Ti.determinant()) * M_PI / detail::sqrt_det_positive(A1) *
                      std::exp(k1 + 0.25 * (l1.transpose() * A1inv * l1)(0));

    const Polynomial& P = f.polynomial();
    const auto h = detail::gaussian_moments(g, H, P.max_a(), P.max_b());
    cplx s{};
    for (const auto& [m, coef] : P.terms()) s += coef * h[m.a][m.b];
    return base * s;
}

/**
 * One-variable polynomial-Gaussian  g(x) = sum_k coeffs[k] x^k * exp(-alpha x^2 + beta x + kappa).
 */
struct PolyGauss1D {
    std::vector<cplx> coeffs;
    cplx alpha{};
    cplx beta{};
    cplx kappa{};
    double hbar = 1.0;

    cplx operator()(double x) const {
        cplx s{};
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) s = s * x + *it;
        return s * std::exp(-alpha * x * x + beta * x + kappa);
    }

    int degree() const {
        for (int k = static_cast<int>(coeffs.size()) - 1; k >= 0; --k)
            if (coeffs[k] != cplx{}) return k;
        return 0;
    }
};

/// Exact partial integral of f over `axis`; the result is a function of the other variable.
inline PolyGauss1D marginal(const PolyGauss& f, Axis axis) {
    const bool over_p = axis == Axis::p;
    const int it = over_p ? 1 : 0;  // integrated index
    const int kt = 1 - it;          // kept index
    const Mat2c& A = f.shape().A;
    const Vec2c& l = f.shape().l;
    const cplx a_ii = A(it, it), a_ik = A(it, kt);
    if (!(a_ii.real() > 0.0)) throw DomainError("marginal: not normalizable along the integrated axis");

    PolyGauss1D out;
    out.hbar = f.hbar();
    out.alpha = A(kt, kt) - a_ik * a_ik / a_ii;
    out.beta = l(kt) - l(it) * a_ik / a_ii;
    out.kappa = f.shape().k + l(it) * l(it) / (4.0 * a_ii);

    const Polynomial P = f.standard_polynomial();
    if (P.is_zero()) {
        out.coeffs = {0.0};
        return out;
    }
    const int dk = over_p ? P.max_a() : P.max_b();
    const int di = over_p ? P.max_b() : P.max_a();

    // moments of the integrated variable: h_{j+1} = g h_j + H j h_{j-1}, g affine in the kept variable
    using Poly1 = std::vector<cplx>;
    const cplx g0 = l(it) / (2.0 * a_ii), g1 = -a_ik / a_ii, H = 1.0 / (2.0 * a_ii);
    std::vector<Poly1> h(di + 1);
    h[0] = {1.0};
    for (int j = 0; j < di; ++j) {
        Poly1 next(h[j].size() + 1);
        for (std::size_t r = 0; r < h[j].size(); ++r) {
            next[r] += g0 * h[j][r];
            next[r + 1] += g1 * h[j][r];
        }
        if (j > 0)
            for (std::size_t r = 0; r < h[j - 1].size(); ++r) next[r] += H * double(j) * h[j - 1][r];
        h[j + 1] = std::move(next);
    }

    const cplx pref = std::sqrt(M_PI / a_ii);
    out.coeffs.assign(static_cast<std::size_t>(dk + di + 1), 0.0);
    for (const auto& [m, coef] : P.terms()) {
        const int ek = over_p ? m.a : m.b;
        const int ei = over_p ? m.b : m.a;
        for (std::size_t r = 0; r < h[ei].size(); ++r) out.coeffs[ek + r] += pref * coef * h[ei][r];
    }
    return out;
}

}  // namespace moyal
