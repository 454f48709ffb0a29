#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "moyal/errors.hpp"
#include "moyal/parallel.hpp"
#include "moyal/polynomial.hpp"

namespace moyal {

/// Uniform rectangular (q, p) grid including both end points.
struct GridSpec {
    double qmin = -8.0;
    double qmax = 8.0;
    double pmin = -8.0;
    double pmax = 8.0;
    int nq = 128;
    int np = 128;

    static GridSpec square(double L, int n) { return {-L, L, -L, L, n, n}; }

    void validate() const {
        if (!(qmax > qmin) || !(pmax > pmin)) throw ParameterError("GridSpec: empty box");
        if (nq < 8 || np < 8) throw ParameterError("GridSpec: at least 8 nodes per axis");
        if (!std::isfinite(qmin) || !std::isfinite(qmax) || !std::isfinite(pmin) || !std::isfinite(pmax))
            throw ParameterError("GridSpec: non-finite bounds");
    }

    double dq() const { return (qmax - qmin) / (nq - 1); }
    double dp() const { return (pmax - pmin) / (np - 1); }
    double q(int i) const { return qmin + i * dq(); }
    double p(int j) const { return pmin + j * dp(); }
    std::size_t size() const { return static_cast<std::size_t>(nq) * static_cast<std::size_t>(np); }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Complex samples on a GridSpec, row-major over q then p.
struct GridField {
    GridSpec spec;
    std::vector<cplx> values;
    double hbar = 1.0;
    std::vector<std::string> warnings;

    GridField() = default;
    GridField(GridSpec s, double h) : spec(s), values(s.size()), hbar(h) {
        spec.validate();
        if (!(hbar > 0.0)) throw ParameterError("GridField: hbar must be positive");
    }

    cplx& at(int i, int j) { return values[static_cast<std::size_t>(i) * spec.np + j]; }
    cplx at(int i, int j) const { return values[static_cast<std::size_t>(i) * spec.np + j]; }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : values) m = std::max(m, std::abs(v));
        return m;
    }

    /// Trapezoid-rule integral over the box.
    cplx integral() const {
        cplx s{};
        for (int i = 0; i < spec.nq; ++i) {
            const double wq = (i == 0 || i == spec.nq - 1) ? 0.5 : 1.0;
            cplx row{};
            for (int j = 0; j < spec.np; ++j) row += ((j == 0 || j == spec.np - 1) ? 0.5 : 1.0) * at(i, j);
            s += wq * row;
        }
        return s * spec.dq() * spec.dp();
    }

    GridField& operator*=(cplx s) {
        for (auto& v : values) v *= s;
        return *this;
    }
};

inline void require_same_grid(const GridField& a, const GridField& b, const char* where) {
    if (!(a.spec == b.spec)) throw ParameterError(std::string(where) + ": grid specs differ");
    if (a.hbar != b.hbar) throw ParameterError(std::string(where) + ": mismatched hbar");
}

inline GridField operator-(const GridField& a, const GridField& b) {
    require_same_grid(a, b, "grid subtraction");
    GridField r = a;
    r.warnings.insert(r.warnings.end(), b.warnings.begin(), b.warnings.end());
    for (std::size_t k = 0; k < r.values.size(); ++k) r.values[k] -= b.values[k];
    return r;
}

/// Pointwise evaluation of f(q, p) at the grid nodes.
template <class F>
GridField sample(const F& f, const GridSpec& spec, double hbar) {
    GridField g(spec, hbar);
    parallel_for(static_cast<std::size_t>(spec.nq), [&](std::size_t i) {
        const double q = spec.q(static_cast<int>(i));
        for (int j = 0; j < spec.np; ++j) g.at(static_cast<int>(i), j) = cplx(f(q, spec.p(j)));
    });
    for (const auto& v : g.values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DomainError("sample: non-finite value");
    return g;
}

/// Sampling of a PolyGauss-like object, inheriting its hbar.
template <class F>
    requires requires(const F& f) { f.hbar(); }
GridField sample(const F& f, const GridSpec& spec) {
    return sample(f, spec, f.hbar());
}

struct GridDistance {
    double sup_rel = 0.0;
    double l2_rel = 0.0;
};

/// Distances of b from a, relative to the norms of a.
inline GridDistance grid_distance(const GridField& a, const GridField& b) {
    if (!(a.spec == b.spec)) throw ParameterError("grid_distance: grid specs differ");
    double sup_d = 0.0, sup_a = 0.0, l2_d = 0.0, l2_a = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k) {
        const double d = std::abs(a.values[k] - b.values[k]);
        const double m = std::abs(a.values[k]);
        sup_d = std::max(sup_d, d);
        sup_a = std::max(sup_a, m);
        l2_d += d * d;
        l2_a += m * m;
    }
    GridDistance r;
    r.sup_rel = sup_a > 0.0 ? sup_d / sup_a : sup_d;
    r.l2_rel = l2_a > 0.0 ? std::sqrt(l2_d / l2_a) : std::sqrt(l2_d);
    return r;
}

// ---------------------------------------------------------------------------
// CSV format
//
//   # key: value          (any number of header lines)
//   # grid: qmin qmax nq pmin pmax np
//   # hbar: value
//   q,p,W                 (column header)
//   rows in grid order, 17 significant digits, scientific notation
// ---------------------------------------------------------------------------

/// Locale-independent scientific formatting with 17 significant digits.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific, 16);
    return std::string(buf, res.ptr);
}

inline void write_grid_csv(std::ostream& os, const GridField& f,
                           const std::vector<std::pair<std::string, std::string>>& header = {}) {
    for (const auto& [k, v] : header) os << "# " << k << ": " << v << '\n';
    const GridSpec& s = f.spec;
    os << "# grid: " << format_double(s.qmin) << ' ' << format_double(s.qmax) << ' ' << s.nq << ' '
       << format_double(s.pmin) << ' ' << format_double(s.pmax) << ' ' << s.np << '\n';
    os << "# hbar: " << format_double(f.hbar) << '\n';
    os << "q,p,W\n";
    std::string line;
    for (int i = 0; i < s.nq; ++i) {
        const std::string q = format_double(s.q(i));
        for (int j = 0; j < s.np; ++j) {
            line.clear();
            line += q;
            line += ',';
            line += format_double(s.p(j));
            line += ',';
            line += format_double(f.at(i, j).real());
            line += '\n';
            os << line;
        }
    }
}

namespace detail {

inline double parse_double(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ParameterError("read_grid_csv: malformed number '" + std::string(s) + "'");
    return v;
}

}  // namespace detail

/// Parse a field written by write_grid_csv (real values); header entries are returned alongside.
inline GridField read_grid_csv(std::istream& is, std::vector<std::pair<std::string, std::string>>* header = nullptr) {
    std::string line;
    GridSpec spec;
    bool have_grid = false;
    double hbar = 1.0;
    while (std::getline(is, line)) {
        if (line.rfind("# ", 0) == 0) {
            const auto colon = line.find(':');
            if (colon == std::string::npos) continue;
            const std::string key = line.substr(2, colon - 2);
            const std::string value = line.substr(std::min(line.size(), colon + 2));
            if (key == "grid") {
                std::istringstream ss(value);
                std::string a, b, c, d, e, f;
                ss >> a >> b >> c >> d >> e >> f;
                spec = {detail::parse_double(a), detail::parse_double(b), detail::parse_double(d),
                        detail::parse_double(e), std::stoi(c), std::stoi(f)};
                have_grid = true;
            } else if (key == "hbar") {
                hbar = detail::parse_double(value);
            } else if (header) {
                header->emplace_back(key, value);
            }
            continue;
        }
        break;  // column header
    }
    if (!have_grid) throw ParameterError("read_grid_csv: missing grid header");
    GridField f(spec, hbar);
    std::size_t k = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (k >= f.values.size()) throw ParameterError("read_grid_csv: too many rows");
        const auto c2 = line.rfind(',');
        if (c2 == std::string::npos) throw ParameterError("read_grid_csv: malformed row");
        f.values[k++] = detail::parse_double(std::string_view(line).substr(c2 + 1));
    }
    if (k != f.values.size()) throw ParameterError("read_grid_csv: row count does not match grid");
    return f;
}

}  // namespace moyal
