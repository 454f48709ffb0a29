#pragma once

#include <Eigen/Dense>

#include <map>
#include <utility>
#include <vector>

#include "moyal/poly_gauss.hpp"

namespace moyal {

namespace detail {

using Mat4c = Eigen::Matrix4cd;
using Vec4c = Eigen::Vector4cd;
using Mat42c = Eigen::Matrix<cplx, 4, 2>;

/// Dense bivariate polynomial of bounded degree, square storage [a * (deg + 1) + b].
struct DensePoly {
    int deg = 0;
    std::vector<cplx> c;

    explicit DensePoly(int d = 0) : deg(d), c(static_cast<std::size_t>((d + 1) * (d + 1))) {}

    cplx& at(int a, int b) { return c[static_cast<std::size_t>(a * (deg + 1) + b)]; }
    cplx at(int a, int b) const { return c[static_cast<std::size_t>(a * (deg + 1) + b)]; }

    /// this += s * src (src.deg <= deg)
    void axpy(cplx s, const DensePoly& src) {
        if (s == cplx{}) return;
        for (int a = 0; a <= src.deg; ++a)
            for (int b = 0; a + b <= src.deg; ++b) at(a, b) += s * src.at(a, b);
    }

    /// this += (g0 + g1 x + g2 y) * src (src.deg + 1 <= deg)
    void add_affine_times(cplx g0, cplx g1, cplx g2, const DensePoly& src) {
        for (int a = 0; a <= src.deg; ++a) {
            for (int b = 0; a + b <= src.deg; ++b) {
                const cplx v = src.at(a, b);
                if (v == cplx{}) continue;
                at(a, b) += g0 * v;
                at(a + 1, b) += g1 * v;
                at(a, b + 1) += g2 * v;
            }
        }
    }

    Polynomial to_polynomial() const {
        Polynomial r;
        for (int a = 0; a <= deg; ++a)
            for (int b = 0; a + b <= deg; ++b) r.add_term(a, b, at(a, b));
        return r;
    }
};

/// Closed-form data of the star product of exp(E1) and exp(E2).
struct GaussianStarKernel {
    Mat4c K;         // (I + M B)^{-1}
    Mat4c M;         // (i hbar / 2) [[0, J], [J^T, 0]]
    Vec4c b0;        // (l1, l2)
    QuadForm shape;  // exponent of the product
    cplx prefactor;  // det(I + M B)^{-1/2}
};

inline GaussianStarKernel gaussian_star_kernel(const QuadForm& f1, const QuadForm& f2, double hbar) {
    Mat2c J;
    J << 0.0, 1.0, -1.0, 0.0;
    const cplx ih2(0.0, 0.5 * hbar);

    Mat4c B = Mat4c::Zero();
    B.topLeftCorner<2, 2>() = 2.0 * f1.A;
    B.bottomRightCorner<2, 2>() = 2.0 * f2.A;
    Mat4c M = Mat4c::Zero();
    M.topRightCorner<2, 2>() = ih2 * J;
    M.bottomLeftCorner<2, 2>() = ih2 * J.transpose();

    // det(I + M B) = det(I + X) with X = (hbar^2/4) J^T B1 J B2.  Scaling hbar -> t hbar
    // gives prod_k (1 + t^2 rho_k); the square root is continued from t = 0 factor by factor.
    const Mat2c X = (0.25 * hbar * hbar) * J.transpose() * (2.0 * f1.A) * J * (2.0 * f2.A);
    const cplx tr = X.trace(), det = X.determinant();
    const cplx disc = std::sqrt(0.25 * tr * tr - det);
    const cplx rho1 = 0.5 * tr + disc, rho2 = 0.5 * tr - disc;
    cplx sqrt_det = 1.0;
    for (const cplx rho : {rho1, rho2}) {
        const cplx w = 1.0 + rho;
        if (std::abs(w) < 1e-12 || (w.real() <= 0.0 && std::abs(w.imag()) <= 1e-14 * std::abs(w)))
            throw NonintegrableError("gaussian_star: singular Gaussian star-product integral");
        sqrt_det *= std::sqrt(w);
    }

    const Mat4c IMB = Mat4c::Identity() + M * B;
    Eigen::FullPivLU<Mat4c> lu(IMB);
    if (!lu.isInvertible()) throw NonintegrableError("gaussian_star: singular Gaussian star-product integral");
    const Mat4c K = lu.inverse();

    Eigen::Matrix<cplx, 4, 2> Pi = Eigen::Matrix<cplx, 4, 2>::Zero();
    Pi.topRows<2>() = Mat2c::Identity();
    Pi.bottomRows<2>() = Mat2c::Identity();

    Vec4c b0;
    b0 << f1.l, f2.l;

    QuadForm out;
    const Mat2c A = 0.5 * Pi.transpose() * (B * K) * Pi;
    out.A = 0.5 * (A + A.transpose());
    out.l = Pi.transpose() * K.transpose() * b0;
    out.k = (0.5 * b0.transpose() * (K * M) * b0)(0) + f1.k + f2.k;

    return {K, M, b0, out, 1.0 / sqrt_det};
}

}  // namespace detail

/**
 * Star product of two members of the polynomial-Gaussian class.
 *
 * The Gaussian parts are combined in closed form (the star product acts on
 * exp(E1(x1)) exp(E2(x2)) as a Gaussian operator in the doubled variables).
 * Polynomial prefactors are reinstated by differentiating with respect to
 * linear source terms; the source derivatives are evaluated with the
 * multivariate Hermite recurrence
 *
 *     h_{g + e_i} = G_i h_g + sum_j H_ij g_j h_{g - e_j}.
 *
 * The result is expressed in the frame that whitens its own envelope.
 */
inline PolyGauss polygauss_star(const PolyGauss& f, const PolyGauss& g) {
    using namespace detail;
    require_same_hbar(f.hbar(), g.hbar(), "polygauss_star");
    const double hbar = f.hbar();
    const GaussianStarKernel kern = gaussian_star_kernel(f.shape(), g.shape(), hbar);
    const Frame out_frame = natural_frame(kern.shape);

    Mat4c S = Mat4c::Zero();
    S.topLeftCorner<2, 2>() = f.frame().T.transpose().cast<cplx>();
    S.bottomRightCorner<2, 2>() = g.frame().T.transpose().cast<cplx>();
    Vec4c d;
    d << (f.frame().T * f.frame().c).cast<cplx>(), (g.frame().T * g.frame().c).cast<cplx>();

    Eigen::Matrix<cplx, 4, 2> Pi = Eigen::Matrix<cplx, 4, 2>::Zero();
    Pi.topRows<2>() = Mat2c::Identity();
    Pi.bottomRows<2>() = Mat2c::Identity();

    // sources couple as G(xi) . sigma + sigma^T H sigma / 2, with x = T^{-1} xi + c
    const Eigen::Matrix<cplx, 4, 2> SKPi = S.transpose() * kern.K * Pi;
    const Eigen::Matrix<cplx, 4, 2> Glin = SKPi * out_frame.T.inverse().cast<cplx>();
    const Vec4c G0 = SKPi * out_frame.c.cast<cplx>() + S.transpose() * kern.K * kern.M * kern.b0 - d;
    Mat4c H = S.transpose() * kern.K * kern.M * S;
    H = 0.5 * (H + H.transpose()).eval();

    const Polynomial& P = f.polynomial();
    const Polynomial& Q = g.polynomial();
    if (P.is_zero() || Q.is_zero())
        return PolyGauss(Polynomial{}, kern.shape, hbar, out_frame);

    const int A1 = P.max_a(), B1 = P.max_b(), d1 = P.degree();
    const int A2 = Q.max_a(), B2 = Q.max_b(), d2 = Q.degree();
    const int na = (A1 + 1) * (B1 + 1);
    auto alpha_index = [B1](int a, int b) { return a * (B1 + 1) + b; };

    using Layer = std::vector<DensePoly>;  // indexed by alpha
    std::map<std::pair<int, int>, Layer> layers;

    auto G = [&](int i) { return std::array<cplx, 3>{G0(i), Glin(i, 0), Glin(i, 1)}; };

    // beta = 0: recursion in the f-sources
    {
        Layer L(static_cast<std::size_t>(na));
        for (int a = 0; a <= A1; ++a) {
            for (int b = 0; b <= B1 && a + b <= d1; ++b) {
                DensePoly h(a + b);
                if (a == 0 && b == 0) {
                    h.at(0, 0) = 1.0;
                } else {
                    const int i = a > 0 ? 0 : 1;
                    const int pa = a - (i == 0), pb = b - (i == 1);
                    const auto gi = G(i);
                    h.add_affine_times(gi[0], gi[1], gi[2], L[alpha_index(pa, pb)]);
                    if (pa > 0) h.axpy(H(i, 0) * double(pa), L[alpha_index(pa - 1, pb)]);
                    if (pb > 0) h.axpy(H(i, 1) * double(pb), L[alpha_index(pa, pb - 1)]);
                }
                L[alpha_index(a, b)] = std::move(h);
            }
        }
        layers.emplace(std::pair{0, 0}, std::move(L));
    }

    DensePoly acc(d1 + d2);
    auto accumulate = [&](int c, int dd, const Layer& L) {
        const cplx qb = Q.coefficient(c, dd);
        if (qb == cplx{}) return;
        for (const auto& [m, pa] : P.terms()) acc.axpy(pa * qb, L[alpha_index(m.a, m.b)]);
    };
    accumulate(0, 0, layers.at({0, 0}));

    for (int level = 1; level <= d2; ++level) {
        for (int c = std::min(level, A2); c >= 0; --c) {
            const int dd = level - c;
            if (dd > B2) continue;
            const int i = c > 0 ? 2 : 3;
            const int pc = c - (i == 2), pd = dd - (i == 3);
            const Layer& prev = layers.at({pc, pd});
            const Layer* prev_c = pc > 0 ? &layers.at({pc - 1, pd}) : nullptr;
            const Layer* prev_d = pd > 0 ? &layers.at({pc, pd - 1}) : nullptr;
            const auto gi = G(i);
            Layer L(static_cast<std::size_t>(na));
            for (int a = 0; a <= A1; ++a) {
                for (int b = 0; b <= B1 && a + b <= d1; ++b) {
                    DensePoly h(a + b + level);
                    h.add_affine_times(gi[0], gi[1], gi[2], prev[alpha_index(a, b)]);
                    if (a > 0) h.axpy(H(i, 0) * double(a), prev[alpha_index(a - 1, b)]);
                    if (b > 0) h.axpy(H(i, 1) * double(b), prev[alpha_index(a, b - 1)]);
                    if (prev_c) h.axpy(H(i, 2) * double(pc), (*prev_c)[alpha_index(a, b)]);
                    if (prev_d) h.axpy(H(i, 3) * double(pd), (*prev_d)[alpha_index(a, b)]);
                    L[alpha_index(a, b)] = std::move(h);
                }
            }
            accumulate(c, dd, L);
            layers.emplace(std::pair{c, dd}, std::move(L));
        }
        std::erase_if(layers, [level](const auto& kv) { return kv.first.first + kv.first.second < level - 1; });
    }

    Polynomial result = acc.to_polynomial() * kern.prefactor;
    result.prune();
    return PolyGauss(std::move(result), kern.shape, hbar, out_frame);
}

/// Star product of two pure Gaussians (degree-0 members).
inline PolyGauss gaussian_star(const PolyGauss& g1, const PolyGauss& g2) {
    if (g1.degree() > 0 || g2.degree() > 0) throw ParameterError("gaussian_star: operands must have degree 0");
    return polygauss_star(g1, g2);
}

/// Moyal bracket f * g - g * f.
inline PolyGauss moyal_bracket(const PolyGauss& f, const PolyGauss& g) {
    return subtract(polygauss_star(f, g), polygauss_star(g, f));
}

}  // namespace moyal
