#pragma once

#include <map>
#include <utility>
#include <vector>

#include "moyal/poly_gauss.hpp"

namespace moyal {

enum class Side { left, right };

/// One term  coefficient(q, p) * d^dq/dq^dq d^dp/dp^dp.
struct BoppTerm {
    Polynomial coefficient;
    int dq = 0;
    int dp = 0;
};

/**
 * Differential operator realizing star multiplication by a polynomial symbol.
 *
 * Left:  s * f = s(q + i hbar/2 d_p, p - i hbar/2 d_q) f
 * Right: f * s = s(q - i hbar/2 d_p, p + i hbar/2 d_q) f
 */
class BoppOperator {
  public:
    BoppOperator(std::vector<BoppTerm> terms, Side side, double hbar)
        : terms_(std::move(terms)), side_(side), hbar_(hbar) {}

    const std::vector<BoppTerm>& terms() const { return terms_; }
    Side side() const { return side_; }
    double hbar() const { return hbar_; }

    int differential_order() const {
        int d = 0;
        for (const auto& t : terms_) d = std::max(d, t.dq + t.dp);
        return d;
    }

  private:
    std::vector<BoppTerm> terms_;
    Side side_;
    double hbar_;
};

/// Expand the shifted-argument substitution of s into a finite list of terms.
inline BoppOperator bopp_from_symbol(const PolynomialSymbol& s, Side side, double hbar) {
    if (!(hbar > 0.0)) throw ParameterError("bopp_from_symbol: hbar must be positive");
    std::vector<BoppTerm> terms;
    const cplx half_i_hbar(0.0, 0.5 * hbar);
    const int da = s.max_a(), db = s.max_b();
    double fa = 1.0;  // a!
    for (int a = 0; a <= da; ++a) {
        if (a > 0) fa *= a;
        const Polynomial sa = s.derivative(Axis::q, a);
        double fb = 1.0;  // b!
        for (int b = 0; b <= db; ++b) {
            if (b > 0) fb *= b;
            Polynomial d = sa.derivative(Axis::p, b);
            if (d.is_zero()) continue;
            const int sign_exp = side == Side::left ? b : a;
            cplx c = std::pow(half_i_hbar, a + b) / (fa * fb);
            if (sign_exp % 2) c = -c;
            // derivative orders on the operand are swapped relative to the symbol's
            terms.push_back({d * c, b, a});
        }
    }
    return BoppOperator(std::move(terms), side, hbar);
}

inline BoppOperator identity_operator(double hbar) {
    return bopp_from_symbol(Polynomial::constant(1.0), Side::left, hbar);
}

/// Exact application of a Bopp operator; the result keeps f's exponent and frame.
inline PolyGauss apply(const BoppOperator& op, const PolyGauss& f) {
    require_same_hbar(op.hbar(), f.hbar(), "apply");
    std::map<std::pair<int, int>, PolyGauss> derivs;
    derivs.emplace(std::pair{0, 0}, f);
    auto get = [&](int dq, int dp) -> const PolyGauss& {
        // build d_q^dq d_p^dp f incrementally from cached lower orders
        for (int i = 0; i <= dq; ++i) {
            for (int j = 0; j <= dp; ++j) {
                if (derivs.contains({i, j})) continue;
                const PolyGauss& base = j > 0 ? derivs.at({i, j - 1}) : derivs.at({i - 1, j});
                derivs.emplace(std::pair{i, j}, derivative(base, j > 0 ? Axis::p : Axis::q));
            }
        }
        return derivs.at({dq, dp});
    };

    Polynomial acc;
    double scale = 0.0;
    for (const auto& t : op.terms()) {
        const PolyGauss& d = get(t.dq, t.dp);
        Polynomial contrib = detail::symbol_in_frame(t.coefficient, f.frame()) * d.polynomial();
        scale = std::max(scale, contrib.max_abs_coefficient());
        acc += contrib;
    }
    acc.prune(kPruneTolerance, scale);
    return PolyGauss(std::move(acc), f.shape(), f.hbar(), f.frame());
}

/// s * f for a polynomial symbol s.
inline PolyGauss star_left(const PolynomialSymbol& s, const PolyGauss& f) {
    return apply(bopp_from_symbol(s, Side::left, f.hbar()), f);
}

/// f * s for a polynomial symbol s.
inline PolyGauss star_right(const PolyGauss& f, const PolynomialSymbol& s) {
    return apply(bopp_from_symbol(s, Side::right, f.hbar()), f);
}

}  // namespace moyal
