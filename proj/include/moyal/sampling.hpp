#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "moyal/errors.hpp"

namespace moyal {

/// Axis-aligned phase-space rectangle.
struct Box {
    double qmin = -4.0;
    double qmax = 4.0;
    double pmin = -4.0;
    double pmax = 4.0;

    double area() const { return (qmax - qmin) * (pmax - pmin); }
    bool valid() const { return qmax > qmin && pmax > pmin; }
};

/// Index skipped at the start of every Halton sequence.
inline constexpr std::size_t kHaltonSkip = 17;

/// Radical inverse of i in the given base.
inline double radical_inverse(std::size_t i, unsigned base) {
    double inv = 1.0 / base, f = inv, r = 0.0;
    while (i > 0) {
        r += f * static_cast<double>(i % base);
        i /= base;
        f *= inv;
    }
    return r;
}

/// Deterministic Halton points in the unit cube [0,1)^D.
template <std::size_t D>
std::vector<std::array<double, D>> halton(std::size_t n) {
    static_assert(D >= 1 && D <= 6);
    constexpr unsigned primes[] = {2, 3, 5, 7, 11, 13};
    std::vector<std::array<double, D>> pts(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t d = 0; d < D; ++d) pts[i][d] = radical_inverse(i + kHaltonSkip, primes[d]);
    return pts;
}

/// Halton points mapped into a box.
inline std::vector<std::array<double, 2>> sample_points(const Box& box, std::size_t n) {
    if (!box.valid()) throw ParameterError("sample_points: empty box");
    auto pts = halton<2>(n);
    for (auto& x : pts) {
        x[0] = box.qmin + (box.qmax - box.qmin) * x[0];
        x[1] = box.pmin + (box.pmax - box.pmin) * x[1];
    }
    return pts;
}

}  // namespace moyal
