#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "moyal/errors.hpp"

namespace moyal {

/// Laguerre polynomial L_n(y) by the three-term recurrence.
inline double laguerre(int n, double y) {
    if (n < 0) throw ParameterError("laguerre: n must be nonnegative");
    if (n == 0) return 1.0;
    double prev = 1.0, cur = 1.0 - y;
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 - y) * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

/// Pair (L_n(y), L_n'(y)).
inline std::pair<double, double> laguerre_with_derivative(int n, double y) {
    if (n < 0) throw ParameterError("laguerre: n must be nonnegative");
    if (n == 0) return {1.0, 0.0};
    // L_k' = L_{k-1}' - L_{k-1}
    double prev = 1.0, cur = 1.0 - y;
    double dprev = 0.0, dcur = -1.0;
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 - y) * cur - k * prev) / (k + 1.0);
        const double dnext = dcur - cur;
        prev = cur;
        cur = next;
        dprev = dcur;
        dcur = dnext;
    }
    (void)dprev;
    return {cur, dcur};
}

/// Coefficients c_k of L_n(y) = sum_k c_k y^k.
inline std::vector<double> laguerre_coefficients(int n) {
    if (n < 0) throw ParameterError("laguerre: n must be nonnegative");
    std::vector<double> c(static_cast<std::size_t>(n) + 1);
    c[0] = 1.0;
    for (int k = 0; k < n; ++k) c[k + 1] = -c[k] * (n - k) / ((k + 1.0) * (k + 1.0));
    return c;
}

/**
 * All n roots of L_n in increasing order.
 *
 * The roots of L_{k+1} interlace those of L_k, so each root is bracketed by
 * consecutive roots of the previous degree (with 0 and 4k + 6 as outer bounds)
 * and refined by Newton steps safeguarded with bisection.
 */
inline std::vector<double> laguerre_roots(int n) {
    if (n < 0) throw ParameterError("laguerre_roots: n must be nonnegative");
    std::vector<double> roots;
    for (int k = 1; k <= n; ++k) {
        std::vector<double> edges;
        edges.push_back(0.0);
        edges.insert(edges.end(), roots.begin(), roots.end());
        edges.push_back(4.0 * k + 2.0);
        std::vector<double> next;
        next.reserve(k);
        for (int i = 0; i < k; ++i) {
            double lo = edges[i], hi = edges[i + 1];
            double flo = laguerre(k, lo), fhi = laguerre(k, hi);
            if (flo == 0.0) {
                next.push_back(lo);
                continue;
            }
            if (fhi == 0.0) {
                next.push_back(hi);
                continue;
            }
            if ((flo > 0.0) == (fhi > 0.0)) throw ConvergenceError("laguerre_roots: bracketing failed");
            double x = 0.5 * (lo + hi);
            for (int it = 0; it < 200; ++it) {
                const auto [f, df] = laguerre_with_derivative(k, x);
                if (f == 0.0) break;
                if ((f > 0.0) == (flo > 0.0))
                    lo = x;
                else
                    hi = x;
                double xn = df != 0.0 ? x - f / df : 0.5 * (lo + hi);
                if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
                if (std::abs(xn - x) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, x)) {
                    x = xn;
                    break;
                }
                x = xn;
            }
            next.push_back(x);
        }
        roots = std::move(next);
    }
    return roots;
}

/**
 * Confluent hypergeometric function F(aa; bb; y) = sum_k (aa)_k / (bb)_k y^k / k!.
 *
 * Terminates exactly for nonpositive integer aa.  For y < 0 with general aa the
 * Kummer transformation F(aa; bb; y) = e^y F(bb - aa; bb; -y) keeps terms positive.
 */
inline double kummer(double aa, double bb, double y) {
    if (bb <= 0.0 && bb == std::floor(bb)) throw DomainError("kummer: bb must not be a nonpositive integer");
    const bool terminating = aa <= 0.0 && aa == std::floor(aa);
    if (!terminating && y < 0.0) return std::exp(y) * kummer(bb - aa, bb, -y);

    constexpr int kMaxTerms = 100000;
    long double term = 1.0L, sum = 1.0L;
    const long double eps = std::numeric_limits<long double>::epsilon();
    for (int k = 0; k < kMaxTerms; ++k) {
        if (terminating && aa + k == 0.0) return static_cast<double>(sum);
        term *= (static_cast<long double>(aa) + k) / ((static_cast<long double>(bb) + k) * (k + 1)) * y;
        sum += term;
        if (!std::isfinite(static_cast<double>(sum))) throw ConvergenceError("kummer: overflow");
        if (!terminating && k > std::abs(aa) && std::abs(term) <= eps * std::abs(sum)) return static_cast<double>(sum);
    }
    throw ConvergenceError("kummer: series did not converge");
}

}  // namespace moyal
