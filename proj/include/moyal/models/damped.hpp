#pragma once

#include <cmath>

#include "moyal/models/oscillator.hpp"

namespace moyal {

/// Damped oscillator H = (P^2 + Q^2)/2 - (lambda/2)(QP + PQ), with hbar = 1.
struct DampedParams {
    double lam = 0.0;
    int n = 0;

    void validate() const {
        if (!(std::abs(lam) < 1.0)) throw ParameterError("damped oscillator: |lambda| must be < 1");
        if (n < 0) throw ParameterError("damped oscillator: n must be nonnegative");
    }

    /// a = (1 - lambda^2) / 2
    double a() const { return 0.5 * (1.0 - lam * lam); }
};

/// z = (p^2 + q^2)/2 - lambda q p
inline double z_coordinate(double q, double p, double lam) { return 0.5 * (p * p + q * q) - lam * q * p; }

/// E_n = sqrt(1 - lambda^2) (n + 1/2)
inline double damped_energy(const DampedParams& dp) {
    dp.validate();
    return std::sqrt(1.0 - dp.lam * dp.lam) * (dp.n + 0.5);
}

/// Phase-space symbol (p^2 + q^2)/2 - lambda q p.
inline PolynomialSymbol damped_hamiltonian(double lam) {
    if (!(std::abs(lam) < 1.0)) throw ParameterError("damped oscillator: |lambda| must be < 1");
    Polynomial h = Polynomial::monomial(2, 0, 0.5) + Polynomial::monomial(0, 2, 0.5);
    h.add_term(1, 1, -lam);
    return h;
}

/// y = 2 sqrt(2/a) z = 4 z / sqrt(1 - lambda^2)
inline double damped_y(double q, double p, double lam) {
    return 4.0 * z_coordinate(q, p, lam) / std::sqrt(1.0 - lam * lam);
}

/// Exponent -y/2 as a quadratic form.
inline QuadForm damped_envelope(double lam) {
    const double c = 2.0 / std::sqrt(1.0 - lam * lam);
    return QuadForm::make(0.5 * c, -0.5 * c * lam, 0.5 * c);
}

namespace detail {

/// e^{-y/2} L_n(y) with the polynomial stored in the whitening frame, where y = 2 (xi^2 + eta^2).
inline PolyGauss damped_profile(const DampedParams& dp, cplx scale) {
    dp.validate();
    const QuadForm shape = damped_envelope(dp.lam);
    return PolyGauss(laguerre_radial(dp.n) * scale, shape, 1.0, natural_frame(shape));
}

}  // namespace detail

/// Quasi-amplitude e^{-y/2} L_n(y), normalized to int psi * conj(psi) = 1.
inline PolyGauss damped_quasiamplitude(const DampedParams& dp) { return normalized(detail::damped_profile(dp, 1.0)); }

/// Wigner function ((-1)^n / pi) e^{-y/2} L_n(y).
inline PolyGauss damped_wigner(const DampedParams& dp) {
    return detail::damped_profile(dp, (dp.n % 2 ? -1.0 : 1.0) / M_PI);
}

}  // namespace moyal
