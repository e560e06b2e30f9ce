#pragma once

/// Scalar functionals of a state and the threshold-set classification built
/// from them.
///
/// With M = int(|u|^2+|v|^2), F = Im int(conj(u) grad u + conj(v) grad v),
/// A = int(|grad u|^2+|grad v|^2) and Phi = int(|u|^4+2 beta |uv|^2+|v|^4):
///
///   E = A/2 - Phi/4,  S = 8A - 6Phi,  J = E + M/2,  K = 2A - (3/2)Phi.
///
/// Momentum and kinetic sums are evaluated on the spectral side; by Parseval
/// they equal the gradient-based integrals to roundoff, at a quarter of the
/// transforms.

#include "nls2/grid.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace nls2 {

struct InvariantReport {
    double mass = 0.0;
    std::array<double, 3> momentum = {0.0, 0.0, 0.0};
    double energy = 0.0;
    double kinetic = 0.0;
    double quartic = 0.0;
    double s_value = 0.0;
    double j_value = 0.0;
    double k_value = 0.0;
    double time = 0.0;
};

namespace detail {

// momentum and kinetic contributions of one field from its spectrum
inline void spectral_moments(const ComplexField& hat, std::array<double, 3>& momentum,
                             double& kinetic) {
    const Grid& g = hat.grid;
    const double vol = g.spacing * g.spacing * g.spacing;
    double fx = 0.0, fy = 0.0, fz = 0.0, kin = 0.0;
    std::size_t idx = 0;
    for (int ix = 0; ix < g.n; ++ix) {
        double dx = g.deriv_multiplier[ix], kx = g.wavenumbers[ix];
        for (int iy = 0; iy < g.n; ++iy) {
            double dy = g.deriv_multiplier[iy], ky = g.wavenumbers[iy];
            for (int iz = 0; iz < g.n; ++iz, ++idx) {
                double dz = g.deriv_multiplier[iz], kz = g.wavenumbers[iz];
                double p = std::norm(hat.values[idx]);
                fx += dx * p;
                fy += dy * p;
                fz += dz * p;
                // full wavenumbers here: the Nyquist cosine carries gradient
                // energy between samples, and the evolution Hamiltonian
                // conserves exactly this sum
                kin += (kx * kx + ky * ky + kz * kz) * p;
            }
        }
    }
    momentum[0] += fx * vol;
    momentum[1] += fy * vol;
    momentum[2] += fz * vol;
    kinetic += kin * vol;
}

} // namespace detail

inline InvariantReport evaluate_invariants(const SystemState& s) {
    const Grid& g = s.u.grid;
    if (!(s.v.grid == g)) throw std::invalid_argument("evaluate_invariants: u and v grids differ");
    const double vol = g.spacing * g.spacing * g.spacing;

    InvariantReport rep;
    rep.time = s.time;

    double mass = 0.0, quartic = 0.0;
    for (std::size_t i = 0; i < s.u.values.size(); ++i) {
        double u2 = std::norm(s.u.values[i]);
        double v2 = std::norm(s.v.values[i]);
        mass += u2 + v2;
        quartic += u2 * u2 + 2.0 * s.beta * u2 * v2 + v2 * v2;
    }
    rep.mass = mass * vol;
    rep.quartic = quartic * vol;

    detail::spectral_moments(to_spectral(s.u), rep.momentum, rep.kinetic);
    detail::spectral_moments(to_spectral(s.v), rep.momentum, rep.kinetic);

    rep.energy = rep.kinetic / 2.0 - rep.quartic / 4.0;
    rep.s_value = 8.0 * rep.kinetic - 6.0 * rep.quartic;
    rep.j_value = rep.energy + rep.mass / 2.0;
    rep.k_value = 2.0 * rep.kinetic - 1.5 * rep.quartic;
    return rep;
}

inline double mass(const SystemState& s) {
    const double vol = std::pow(s.u.grid.spacing, 3);
    double m = 0.0;
    for (std::size_t i = 0; i < s.u.values.size(); ++i)
        m += std::norm(s.u.values[i]) + std::norm(s.v.values[i]);
    return m * vol;
}

inline std::array<double, 3> momentum(const SystemState& s) {
    std::array<double, 3> f = {0.0, 0.0, 0.0};
    double kin = 0.0;
    detail::spectral_moments(to_spectral(s.u), f, kin);
    detail::spectral_moments(to_spectral(s.v), f, kin);
    return f;
}

inline double kinetic(const SystemState& s) {
    std::array<double, 3> f = {0.0, 0.0, 0.0};
    double kin = 0.0;
    detail::spectral_moments(to_spectral(s.u), f, kin);
    detail::spectral_moments(to_spectral(s.v), f, kin);
    return kin;
}

inline double quartic(const SystemState& s) {
    const double vol = std::pow(s.u.grid.spacing, 3);
    double q = 0.0;
    for (std::size_t i = 0; i < s.u.values.size(); ++i) {
        double u2 = std::norm(s.u.values[i]);
        double v2 = std::norm(s.v.values[i]);
        q += u2 * u2 + 2.0 * s.beta * u2 * v2 + v2 * v2;
    }
    return q * vol;
}

inline double energy(const SystemState& s) { return kinetic(s) / 2.0 - quartic(s) / 4.0; }
inline double s_functional(const SystemState& s) { return 8.0 * kinetic(s) - 6.0 * quartic(s); }
inline double j_functional(const SystemState& s) { return energy(s) + mass(s) / 2.0; }
inline double k_functional(const SystemState& s) { return 2.0 * kinetic(s) - 1.5 * quartic(s); }

/// Phi / (M^{1/2} A^{3/2}); bounded by the sharp interpolation constant and
/// attained at ground states. Undefined on states with zero mass or zero
/// gradient content.
inline double gn_ratio(const SystemState& s) {
    InvariantReport rep = evaluate_invariants(s);
    if (rep.mass <= 0.0 || rep.kinetic <= 0.0)
        throw std::domain_error("gn_ratio: undefined for states without mass and gradient content");
    return rep.quartic / (std::sqrt(rep.mass) * std::pow(rep.kinetic, 1.5));
}

// ---------------------------------------------------------------------------
// Ground-state-derived constants and threshold sets
// ---------------------------------------------------------------------------

struct GroundStateConstants {
    double mass_gs = 0.0;     // M(P,Q)
    double kinetic_gs = 0.0;  // A(P,Q)
    double energy_gs = 0.0;   // E(P,Q)
    double quartic_gs = 0.0;  // Phi(P,Q)
    double j0 = 0.0;          // J(P,Q)
    double kgn = 0.0;         // 4 / (3 sqrt(M(P,Q) A(P,Q)))
};

/// Strict dichotomy-set membership: M*E and M*A both below their
/// ground-state products.
inline bool in_set_K(const SystemState& s, const GroundStateConstants& gs) {
    InvariantReport rep = evaluate_invariants(s);
    return rep.mass * rep.energy < gs.mass_gs * gs.energy_gs &&
           rep.mass * rep.kinetic < gs.mass_gs * gs.kinetic_gs;
}

/// Membership in {J < J0, K >= 0}.
inline bool in_set_Kplus(const SystemState& s, const GroundStateConstants& gs) {
    InvariantReport rep = evaluate_invariants(s);
    return rep.j_value < gs.j0 && rep.k_value >= 0.0;
}

enum class Classification { GlobalAndScatters, BlowsUpIfRadial, AboveThreshold };

inline const char* to_string(Classification c) {
    switch (c) {
        case Classification::GlobalAndScatters: return "GlobalAndScatters";
        case Classification::BlowsUpIfRadial: return "BlowsUpIfRadial";
        case Classification::AboveThreshold: return "AboveThreshold";
    }
    return "?";
}

/// Threshold comparison of one state. AboveThreshold is an explicit
/// "no claim": membership comparisons are strict and nothing is inferred at
/// or beyond the energy threshold.
inline Classification classify(const SystemState& s, const GroundStateConstants& gs) {
    if (!(s.beta > 0.0)) throw std::invalid_argument("classify: requires beta > 0");
    InvariantReport rep = evaluate_invariants(s);
    double me = rep.mass * rep.energy;
    double ma = rep.mass * rep.kinetic;
    double me_thr = gs.mass_gs * gs.energy_gs;
    double ma_thr = gs.mass_gs * gs.kinetic_gs;
    if (me < me_thr && ma < ma_thr) return Classification::GlobalAndScatters;
    if (me < me_thr && ma > ma_thr) return Classification::BlowsUpIfRadial;
    return Classification::AboveThreshold;
}

/// True when either product sits within 1e-9 (relative) of its threshold;
/// strict comparisons are unreliable there and callers should surface it.
inline bool near_threshold(const SystemState& s, const GroundStateConstants& gs,
                           double rel = 1e-9) {
    InvariantReport rep = evaluate_invariants(s);
    double me = rep.mass * rep.energy;
    double ma = rep.mass * rep.kinetic;
    double me_thr = gs.mass_gs * gs.energy_gs;
    double ma_thr = gs.mass_gs * gs.kinetic_gs;
    return std::abs(me - me_thr) <= rel * std::abs(me_thr) ||
           std::abs(ma - ma_thr) <= rel * std::abs(ma_thr);
}

} // namespace nls2
