#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <vector>

namespace moyal {

using cplx = std::complex<double>;

/// Relative tolerance used to drop round-off coefficients.
inline constexpr double kPruneTolerance = 1e-14;

enum class Axis { q, p };

/// Exponent pair (a, b) of the monomial x^a y^b.
struct Monomial {
    int a = 0;
    int b = 0;

    int degree() const { return a + b; }
    friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

/**
 * Sparse bivariate polynomial with complex coefficients.
 *
 * Used both for classical symbols H(q, p) and for the polynomial prefactor of
 * a PolyGauss (where the two variables are frame coordinates).  Explicit zero
 * coefficients are never stored.
 */
class Polynomial {
  public:
    using Terms = std::map<Monomial, cplx>;

    Polynomial() = default;

    static Polynomial constant(cplx c) { return monomial(0, 0, c); }
    static Polynomial monomial(int a, int b, cplx c = 1.0) {
        Polynomial r;
        if (c != cplx{}) r.terms_[{a, b}] = c;
        return r;
    }
    /// The coordinate function q (first variable).
    static Polynomial q() { return monomial(1, 0); }
    /// The coordinate function p (second variable).
    static Polynomial p() { return monomial(0, 1); }
    /// c0 + c1 x + c2 y.
    static Polynomial affine(cplx c0, cplx c1, cplx c2) {
        Polynomial r;
        r.add_term(0, 0, c0);
        r.add_term(1, 0, c1);
        r.add_term(0, 1, c2);
        return r;
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    int degree() const {
        int d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
        return d;
    }
    int max_a() const {
        int d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.a);
        return d;
    }
    int max_b() const {
        int d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.b);
        return d;
    }

    cplx coefficient(int a, int b) const {
        auto it = terms_.find({a, b});
        return it == terms_.end() ? cplx{} : it->second;
    }

    double max_abs_coefficient() const {
        double m = 0.0;
        for (const auto& [k, c] : terms_) m = std::max(m, std::abs(c));
        return m;
    }

    /// True when every coefficient is real (the symbol is a real function).
    bool is_real(double tol = 0.0) const {
        for (const auto& [k, c] : terms_)
            if (std::abs(c.imag()) > tol) return false;
        return true;
    }

    void add_term(int a, int b, cplx c) {
        if (c == cplx{}) return;
        auto [it, inserted] = terms_.try_emplace({a, b}, c);
        if (!inserted) {
            it->second += c;
            if (it->second == cplx{}) terms_.erase(it);
        }
    }

    /// Drop coefficients below rel_tol * scale (scale defaults to the largest coefficient).
    Polynomial& prune(double rel_tol = kPruneTolerance, double scale = -1.0) {
        if (scale < 0.0) scale = max_abs_coefficient();
        const double cut = rel_tol * scale;
        std::erase_if(terms_, [cut](const auto& kv) { return std::abs(kv.second) <= cut; });
        return *this;
    }

    Polynomial pruned(double rel_tol = kPruneTolerance, double scale = -1.0) const {
        Polynomial r = *this;
        r.prune(rel_tol, scale);
        return r;
    }

    cplx evaluate(cplx x, cplx y) const {
        if (terms_.empty()) return {};
        const int da = max_a(), db = max_b();
        std::vector<cplx> xp(da + 1), yp(db + 1);
        xp[0] = yp[0] = 1.0;
        for (int i = 1; i <= da; ++i) xp[i] = xp[i - 1] * x;
        for (int i = 1; i <= db; ++i) yp[i] = yp[i - 1] * y;
        cplx s{};
        for (const auto& [m, c] : terms_) s += c * xp[m.a] * yp[m.b];
        return s;
    }

    Polynomial derivative(Axis axis, int order = 1) const {
        Polynomial r;
        for (const auto& [m, c] : terms_) {
            const int e = axis == Axis::q ? m.a : m.b;
            if (e < order) continue;
            double f = 1.0;
            for (int i = 0; i < order; ++i) f *= e - i;
            if (axis == Axis::q)
                r.terms_[{m.a - order, m.b}] = c * f;
            else
                r.terms_[{m.a, m.b - order}] = c * f;
        }
        return r;
    }

    Polynomial conj() const {
        Polynomial r;
        for (const auto& [m, c] : terms_) r.terms_[m] = std::conj(c);
        return r;
    }

    /**
     * Substitute x = U00 s + U01 t + v0, y = U10 s + U11 t + v1 and expand in (s, t).
     */
    Polynomial substitute_affine(const std::array<std::array<double, 2>, 2>& U,
                                 const std::array<double, 2>& v) const {
        if (terms_.empty()) return {};
        const int da = max_a(), db = max_b();
        std::vector<Polynomial> xp(da + 1), yp(db + 1);
        xp[0] = yp[0] = constant(1.0);
        const Polynomial xs = affine(v[0], U[0][0], U[0][1]);
        const Polynomial ys = affine(v[1], U[1][0], U[1][1]);
        for (int i = 1; i <= da; ++i) xp[i] = xp[i - 1] * xs;
        for (int i = 1; i <= db; ++i) yp[i] = yp[i - 1] * ys;
        Polynomial r;
        for (const auto& [m, c] : terms_) r += (xp[m.a] * yp[m.b]) * c;
        return r;
    }

    Polynomial& operator+=(const Polynomial& o) {
        for (const auto& [m, c] : o.terms_) add_term(m.a, m.b, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        for (const auto& [m, c] : o.terms_) add_term(m.a, m.b, -c);
        return *this;
    }
    Polynomial& operator*=(cplx s) {
        if (s == cplx{}) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, c] : terms_) c *= s;
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, cplx s) { return a *= s; }
    friend Polynomial operator*(cplx s, Polynomial a) { return a *= s; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        Polynomial r;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) r.add_term(ma.a + mb.a, ma.b + mb.b, ca * cb);
        return r;
    }

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

  private:
    Terms terms_;
};

/// Classical phase-space symbol: a polynomial in (q, p) with no exponential part.
using PolynomialSymbol = Polynomial;

/// Integer power of a polynomial.
inline Polynomial pow(const Polynomial& base, int n) {
    Polynomial r = Polynomial::constant(1.0);
    for (int i = 0; i < n; ++i) r = r * base;
    return r;
}

}  // namespace moyal
