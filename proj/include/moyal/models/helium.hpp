#pragma once

#include <array>
#include <cmath>
#include <utility>

#include "moyal/models/oscillator.hpp"
#include "moyal/residual.hpp"
#include "moyal/sampling.hpp"

namespace moyal {

/**
 * Two electrons bound harmonically to the nucleus with a harmonic
 * electron-electron term of strength xi.  In the u/v coordinates the
 * Hamiltonian separates into oscillators of frequency omega and
 * omega sqrt(1 - xi).
 */
struct HeliumParams {
    double m = 1.0;
    double omega = 1.0;
    double xi = 0.0;
    double hbar = 1.0;

    void validate() const {
        if (!(xi >= 0.0 && xi < 1.0)) throw ParameterError("helium: xi must satisfy 0 <= xi < 1");
        u_sector().validate();
    }

    double omega_u() const { return omega; }
    double omega_v() const { return omega * std::sqrt(1.0 - xi); }
    OscillatorSector u_sector() const { return {m, omega_u(), hbar}; }
    OscillatorSector v_sector() const { return {m, omega_v(), hbar}; }
};

/// psi(u, v, p_u, p_v) = phi(u, p_u) chi(v, p_v)
struct HeliumState {
    int nu = 0;
    int nv = 0;
    PolyGauss u_factor;
    PolyGauss v_factor;
    HeliumParams params;
};

inline HeliumState helium_ground(const HeliumParams& params) {
    params.validate();
    return {0, 0, params.u_sector().ground(), params.v_sector().ground(), params};
}

/// Apply ku creation operators in the u sector and kv in the v sector.
inline HeliumState helium_excite(const HeliumState& state, int ku, int kv) {
    if (ku < 0 || kv < 0) throw ParameterError("helium_excite: excitation counts must be nonnegative");
    const HeliumParams& hp = state.params;
    return {state.nu + ku, state.nv + kv, hp.u_sector().excite(state.u_factor, ku),
            hp.v_sector().excite(state.v_factor, kv), hp};
}

/// Diagonal ladder: k quanta in each sector.
inline HeliumState helium_excite(const HeliumState& state, int k) { return helium_excite(state, k, k); }

/// E = hbar omega_u (nu + 1/2) + hbar omega_v (nv + 1/2)
inline double helium_energy(int nu, int nv, const HeliumParams& params) {
    params.validate();
    if (nu < 0 || nv < 0) throw ParameterError("helium_energy: quantum numbers must be nonnegative");
    return params.u_sector().energy(nu) + params.v_sector().energy(nv);
}

/// First order in xi: hbar omega (nu + 1/2) + hbar omega (1 - xi/2)(nv + 1/2); ground value hbar omega (1 - xi/4).
inline double helium_energy_first_order(int nu, int nv, const HeliumParams& params) {
    params.validate();
    const double hw = params.hbar * params.omega;
    return hw * (nu + 0.5) + hw * (1.0 - 0.5 * params.xi) * (nv + 0.5);
}

/// Sector Wigner functions; the 4D Wigner function is their product.
inline std::pair<PolyGauss, PolyGauss> helium_wigner(const HeliumState& state) {
    return {wigner_of(state.u_factor), wigner_of(state.v_factor)};
}

/**
 * max |(H * psi) - E psi| / max |psi| over 4D Halton samples in box x box,
 * using H * (phi chi) = (H_u * phi) chi + phi (H_v * chi).
 */
inline double helium_eigen_residual(const HeliumState& state, double E, const Box& box, std::size_t n_samples) {
    if (n_samples < 1) throw ParameterError("helium_eigen_residual: n_samples must be positive");
    const HeliumParams& hp = state.params;
    const PolyGauss Hphi = star_left(hp.u_sector().hamiltonian(), state.u_factor);
    const PolyGauss Hchi = star_left(hp.v_sector().hamiltonian(), state.v_factor);
    auto pts = halton<4>(n_samples);
    std::vector<std::array<double, 2>> pu, pv;
    for (auto& x : pts) {
        x[0] = box.qmin + (box.qmax - box.qmin) * x[0];
        x[1] = box.pmin + (box.pmax - box.pmin) * x[1];
        x[2] = box.qmin + (box.qmax - box.qmin) * x[2];
        x[3] = box.pmin + (box.pmax - box.pmin) * x[3];
        pu.push_back({x[0], x[1]});
        pv.push_back({x[2], x[3]});
    }
    const double scale = max_abs_on_box(state.u_factor, box, pu) * max_abs_on_box(state.v_factor, box, pv);
    if (scale == 0.0) return 0.0;
    double r = 0.0;
    for (const auto& x : pts) {
        const cplx phi = state.u_factor(x[0], x[1]), chi = state.v_factor(x[2], x[3]);
        const cplx lhs = Hphi(x[0], x[1]) * chi + phi * Hchi(x[2], x[3]);
        r = std::max(r, std::abs(lhs - E * phi * chi));
    }
    return r / scale;
}

}  // namespace moyal
