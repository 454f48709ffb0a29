#pragma once

#include <cmath>

#include "moyal/bopp.hpp"
#include "moyal/integrate.hpp"
#include "moyal/special.hpp"
#include "moyal/star.hpp"

namespace moyal {

/**
 * Gaussian exp(-A_qq q^2 - A_pp p^2) annihilated by the left star action of
 * the linear symbol c_q q + c_p p.
 *
 * Writing the condition (c_q q + c_p p) f + (i hbar/2)(c_q d_p f - c_p d_q f) = 0
 * for a separable Gaussian and matching the q and p coefficients gives
 * A_qq = i c_q / (hbar c_p) and A_pp = -i c_p / (hbar c_q).
 */
inline QuadForm annihilated_gaussian(cplx cq, cplx cp, double hbar) {
    if (cq == cplx{} || cp == cplx{}) throw ParameterError("annihilated_gaussian: both coefficients must be nonzero");
    const cplx i(0.0, 1.0);
    return QuadForm::make(i * cq / (hbar * cp), 0.0, -i * cp / (hbar * cq));
}

/// Norm  int |psi|^2 dq dp  of a quasi-amplitude (equal to int psi * conj(psi) by the trace property).
inline double quasi_norm2(const PolyGauss& psi) { return integrate(multiply(psi, conj(psi))).real(); }

/// psi rescaled to unit quasi-norm.
inline PolyGauss normalized(const PolyGauss& psi) {
    const double n2 = quasi_norm2(psi);
    if (!(n2 > 0.0)) throw DomainError("normalized: zero quasi-amplitude");
    return scale(psi, 1.0 / std::sqrt(n2));
}

/// Wigner function psi * conj(psi) of a quasi-amplitude.
inline PolyGauss wigner_of(const PolyGauss& psi) { return polygauss_star(psi, conj(psi)); }

/// Polynomial L_n(2 (x^2 + y^2)) in frame coordinates.
inline Polynomial laguerre_radial(int n) {
    const std::vector<double> c = laguerre_coefficients(n);
    const Polynomial r2 = Polynomial::monomial(2, 0, 2.0) + Polynomial::monomial(0, 2, 2.0);
    Polynomial out, power = Polynomial::constant(1.0);
    for (int k = 0; k <= n; ++k) {
        out += power * cplx(c[k]);
        if (k < n) power = power * r2;
    }
    return out;
}

/**
 * One-dimensional harmonic oscillator H = p^2/(2m) + m omega^2 q^2 / 2.
 */
struct OscillatorSector {
    double m = 1.0;
    double omega = 1.0;
    double hbar = 1.0;

    void validate() const {
        if (!(m > 0.0) || !(omega > 0.0) || !(hbar > 0.0) || !std::isfinite(m * omega * hbar))
            throw ParameterError("oscillator: mass, frequency and hbar must be positive");
    }

    Polynomial hamiltonian() const {
        return Polynomial::monomial(0, 2, 0.5 / m) + Polynomial::monomial(2, 0, 0.5 * m * omega * omega);
    }

    /// sqrt(m omega / (2 hbar)) (q + i p / (m omega))
    Polynomial annihilator() const {
        const double s = std::sqrt(m * omega / (2.0 * hbar));
        return Polynomial::affine(0.0, s, cplx(0.0, s / (m * omega)));
    }

    /// sqrt(m omega / (2 hbar)) (q - i p / (m omega))
    Polynomial creator() const {
        const double s = std::sqrt(m * omega / (2.0 * hbar));
        return Polynomial::affine(0.0, s, cplx(0.0, -s / (m * omega)));
    }

    double energy(int n) const { return hbar * omega * (n + 0.5); }

    /// Exponent -2H/(hbar omega) and its whitening frame.
    QuadForm envelope() const { return QuadForm::make(m * omega / hbar, 0.0, 1.0 / (m * omega * hbar)); }

    /// Normalized ground quasi-amplitude from the annihilation condition.
    PolyGauss ground() const {
        validate();
        const Polynomial a = annihilator();
        const QuadForm shape = annihilated_gaussian(a.coefficient(1, 0), a.coefficient(0, 1), hbar);
        return normalized(PolyGauss(Polynomial::constant(1.0), shape, hbar, natural_frame(shape)));
    }

    /// k applications of the creation operator, renormalized.
    PolyGauss excite(const PolyGauss& psi, int k) const {
        if (k < 0) throw ParameterError("excite: k must be nonnegative");
        if (k == 0) return psi;
        PolyGauss r = psi;
        const BoppOperator up = bopp_from_symbol(creator(), Side::left, hbar);
        for (int i = 0; i < k; ++i) r = apply(up, r);
        return normalized(r);
    }

    /// Closed-form Wigner function ((-1)^n / (pi hbar)) e^{-2H/(hbar omega)} L_n(4H/(hbar omega)).
    PolyGauss wigner(int n) const {
        validate();
        if (n < 0) throw ParameterError("wigner: n must be nonnegative");
        const QuadForm shape = envelope();
        const double sign = n % 2 ? -1.0 : 1.0;
        return PolyGauss(laguerre_radial(n) * cplx(sign / (M_PI * hbar)), shape, hbar, natural_frame(shape));
    }
};

}  // namespace moyal
