#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "moyal/errors.hpp"
#include "moyal/polynomial.hpp"

namespace moyal {

using Mat2c = Eigen::Matrix2cd;
using Vec2c = Eigen::Vector2cd;
using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

/**
 * Complex quadratic exponent  -(A_qq q^2 + 2 A_qp q p + A_pp p^2) + l_q q + l_p p + k.
 */
struct QuadForm {
    Mat2c A = Mat2c::Zero();
    Vec2c l = Vec2c::Zero();
    cplx k{};

    static QuadForm make(cplx aqq, cplx aqp, cplx app, cplx lq = {}, cplx lp = {}, cplx k = {}) {
        QuadForm f;
        f.A << aqq, aqp, aqp, app;
        f.l << lq, lp;
        f.k = k;
        return f;
    }

    static QuadForm zero() { return {}; }

    cplx exponent(double q, double p) const {
        return -(A(0, 0) * q * q + 2.0 * A(0, 1) * q * p + A(1, 1) * p * p) + l(0) * q + l(1) * p + k;
    }

    /// Re A positive definite, i.e. |exp| decays in every direction.
    bool normalizable() const {
        const Mat2 R = A.real();
        return R(0, 0) > 0.0 && R.determinant() > 0.0;
    }

    QuadForm conj() const { return {A.conjugate(), l.conjugate(), std::conj(k)}; }

    friend QuadForm operator+(const QuadForm& a, const QuadForm& b) {
        return {a.A + b.A, a.l + b.l, a.k + b.k};
    }

    bool approx_equal(const QuadForm& o, double tol = 1e-13) const {
        const double s = 1.0 + A.cwiseAbs().maxCoeff() + l.cwiseAbs().maxCoeff();
        return (A - o.A).cwiseAbs().maxCoeff() <= tol * s && (l - o.l).cwiseAbs().maxCoeff() <= tol * s &&
               std::abs(k - o.k) <= tol * (1.0 + std::abs(k));
    }
};

/**
 * Real affine coordinates  xi = T (x - c)  in which a PolyGauss stores its polynomial.
 *
 * A whitened frame (T^T T = Re A) keeps high-degree prefactors well conditioned;
 * the identity frame gives plain (q, p) monomials.
 */
struct Frame {
    Mat2 T = Mat2::Identity();
    Vec2 c = Vec2::Zero();

    static Frame identity() { return {}; }

    bool is_identity() const { return T == Mat2::Identity() && c == Vec2::Zero(); }

    Vec2 to_frame(double q, double p) const { return T * (Vec2(q, p) - c); }

    friend bool operator==(const Frame& a, const Frame& b) { return a.T == b.T && a.c == b.c; }
};

/// Frame whitening the envelope |exp(E)|; identity when Re A is not positive definite.
inline Frame natural_frame(const QuadForm& shape) {
    if (!shape.normalizable()) return Frame::identity();
    const Mat2 R = shape.A.real();
    Eigen::SelfAdjointEigenSolver<Mat2> es(R);
    const Mat2 V = es.eigenvectors();
    const Mat2 T = V * es.eigenvalues().cwiseSqrt().asDiagonal() * V.transpose();
    Frame f;
    f.T = T;
    f.c = 0.5 * R.ldlt().solve(shape.l.real());
    return f;
}

namespace detail {

inline std::array<std::array<double, 2>, 2> to_array(const Mat2& m) {
    return {{{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}}};
}

/// Express a polynomial in frame `from` coordinates in frame `to` coordinates.
inline Polynomial reframe_polynomial(const Polynomial& poly, const Frame& from, const Frame& to) {
    if (from == to) return poly;
    // xi_from = T_from (T_to^{-1} xi_to + c_to - c_from)
    const Mat2 U = from.T * to.T.inverse();
    const Vec2 v = from.T * (to.c - from.c);
    return poly.substitute_affine(to_array(U), {v(0), v(1)});
}

/// Symbol given in (q, p) expressed in frame coordinates.
inline Polynomial symbol_in_frame(const Polynomial& symbol, const Frame& frame) {
    if (frame.is_identity()) return symbol;
    const Mat2 Ti = frame.T.inverse();
    return symbol.substitute_affine(to_array(Ti), {frame.c(0), frame.c(1)});
}

}  // namespace detail

/**
 * Polynomial times Gaussian on 2D phase space:
 *
 *     f(q, p) = P(T (x - c)) * exp(-x^T A x + l^T x + k),   x = (q, p).
 *
 * The class is closed under derivatives, multiplication by polynomials,
 * pointwise products and star products.  Values are immutable.
 */
class PolyGauss {
  public:
    PolyGauss(Polynomial poly, QuadForm shape, double hbar, Frame frame = Frame::identity())
        : poly_(std::move(poly)), shape_(std::move(shape)), frame_(std::move(frame)), hbar_(hbar) {
        if (!(hbar_ > 0.0) || !std::isfinite(hbar_)) throw ParameterError("PolyGauss: hbar must be positive");
        // stored symmetric
        const cplx off = 0.5 * (shape_.A(0, 1) + shape_.A(1, 0));
        shape_.A(0, 1) = shape_.A(1, 0) = off;
        if (std::abs(frame_.T.determinant()) == 0.0) throw ParameterError("PolyGauss: singular frame");
    }

    /// Pure Gaussian c * exp(E) in the identity frame.
    static PolyGauss gaussian(QuadForm shape, double hbar, cplx c = 1.0) {
        return PolyGauss(Polynomial::constant(c), std::move(shape), hbar);
    }

    /// Symbol with no exponential part (A = 0).
    static PolyGauss from_symbol(Polynomial symbol, double hbar) {
        return PolyGauss(std::move(symbol), QuadForm::zero(), hbar);
    }

    const Polynomial& polynomial() const { return poly_; }
    const QuadForm& shape() const { return shape_; }
    const Frame& frame() const { return frame_; }
    double hbar() const { return hbar_; }

    int degree() const { return poly_.degree(); }
    bool normalizable() const { return shape_.normalizable(); }
    bool is_zero() const { return poly_.is_zero(); }

    cplx operator()(double q, double p) const {
        const Vec2 xi = frame_.to_frame(q, p);
        return poly_.evaluate(xi(0), xi(1)) * std::exp(shape_.exponent(q, p));
    }

    /// Same function with its polynomial re-expanded in another frame.
    PolyGauss in_frame(const Frame& frame) const {
        return PolyGauss(detail::reframe_polynomial(poly_, frame_, frame), shape_, hbar_, frame);
    }

    /// Polynomial prefactor as plain (q, p) monomials.
    Polynomial standard_polynomial() const { return detail::reframe_polynomial(poly_, frame_, Frame::identity()); }

  private:
    Polynomial poly_;
    QuadForm shape_;
    Frame frame_;
    double hbar_;
};

inline void require_same_hbar(double a, double b, const char* where) {
    if (std::abs(a - b) > 1e-15 * std::max(std::abs(a), std::abs(b)))
        throw ParameterError(std::string(where) + ": mismatched hbar");
}

inline PolyGauss scale(const PolyGauss& f, cplx s) {
    return PolyGauss(f.polynomial() * s, f.shape(), f.hbar(), f.frame());
}

/// Complex conjugate function (the dagger of a quasi-amplitude).
inline PolyGauss conj(const PolyGauss& f) {
    return PolyGauss(f.polynomial().conj(), f.shape().conj(), f.hbar(), f.frame());
}

/// Sum of two members sharing the same exponential part.
inline PolyGauss add(const PolyGauss& f, const PolyGauss& g) {
    require_same_hbar(f.hbar(), g.hbar(), "add");
    if (!f.shape().approx_equal(g.shape())) throw ParameterError("add: operands have different Gaussian parts");
    const Polynomial gp = detail::reframe_polynomial(g.polynomial(), g.frame(), f.frame());
    return PolyGauss(f.polynomial() + gp, f.shape(), f.hbar(), f.frame());
}

inline PolyGauss subtract(const PolyGauss& f, const PolyGauss& g) { return add(f, scale(g, -1.0)); }

/// Pointwise product f * g, expressed in f's frame.
inline PolyGauss multiply(const PolyGauss& f, const PolyGauss& g) {
    require_same_hbar(f.hbar(), g.hbar(), "multiply");
    const Polynomial gp = detail::reframe_polynomial(g.polynomial(), g.frame(), f.frame());
    return PolyGauss(f.polynomial() * gp, f.shape() + g.shape(), f.hbar(), f.frame());
}

/// Pointwise product with a (q, p) symbol.
inline PolyGauss multiply(const Polynomial& symbol, const PolyGauss& f) {
    return PolyGauss(detail::symbol_in_frame(symbol, f.frame()) * f.polynomial(), f.shape(), f.hbar(), f.frame());
}

/// Partial derivative along q or p; stays in the class with the same exponent and frame.
inline PolyGauss derivative(const PolyGauss& f, Axis axis) {
    const int i = axis == Axis::q ? 0 : 1;
    const Mat2& T = f.frame().T;
    const Mat2 Ti = T.inverse();
    const Mat2c& A = f.shape().A;
    // dE/dx_i as an affine function of the frame coordinates
    const Eigen::RowVector2cd lin = -2.0 * A.row(i) * Ti.cast<cplx>();
    const cplx c0 = f.shape().l(i) - 2.0 * (A.row(i) * f.frame().c.cast<cplx>())(0);
    const Polynomial& P = f.polynomial();
    Polynomial r = P.derivative(Axis::q) * cplx(T(0, i)) + P.derivative(Axis::p) * cplx(T(1, i));
    r += Polynomial::affine(c0, lin(0), lin(1)) * P;
    return PolyGauss(std::move(r), f.shape(), f.hbar(), f.frame());
}

}  // namespace moyal
