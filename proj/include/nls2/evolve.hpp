#pragma once

/// Time integration of the coupled system by Strang splitting and the
/// trajectory-level diagnostics built on it (conservation reports, blow-up
/// and resolution monitors, virial identities).
///
/// The nonlinear substep rotates phases pointwise with the moduli frozen --
/// exact for that subflow, and exactly mass-preserving. The linear substep is
/// the diagonal spectral multiplier exp(-i |k|^2 dt). Both substeps are
/// unitary, so mass is conserved to roundoff regardless of dt.

#include "nls2/functionals.hpp"
#include "nls2/grid.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nls2 {

struct EvolutionConfig {
    double dt = 1e-3;
    double t_end = 1.0;
    int report_every = 50;                   // steps between invariant reports
    double blowup_kinetic_factor = 10.0;     // kinetic growth that flags blow-up
    double blowup_amplitude_fraction = 0.5;  // of the resolvable bound k_max = pi n / L
    double tail_fraction_limit = 1e-3;       // spectral mass allowed in the top third
    int checkpoint_every = 0;                // reports per stored field checkpoint, 0 = none
};

enum class Verdict { ReachedTEnd, BlowUpDetected, ResolutionLoss };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::ReachedTEnd: return "ReachedTEnd";
        case Verdict::BlowUpDetected: return "BlowUpDetected";
        case Verdict::ResolutionLoss: return "ResolutionLoss";
    }
    return "?";
}

struct TrajectoryRecord {
    InvariantReport invariants;
    double l4_u = 0.0, l4_v = 0.0;        // spatial L4 norms
    double l5_pow_u = 0.0, l5_pow_v = 0.0;  // ||.||_{L5}^5, the decay integrand
    double l5_accumulated = 0.0;          // trapezoid of the integrand up to this time
    double tail_fraction = 0.0;           // spectral mass beyond (2/3) k_max
    double max_amplitude = 0.0;
};

struct Trajectory {
    std::vector<TrajectoryRecord> records;
    std::vector<SystemState> checkpoints;
    Verdict verdict = Verdict::ReachedTEnd;
    double verdict_time = 0.0;
    std::vector<std::string> warnings;
};

// ---------------------------------------------------------------------------
// Stepper
// ---------------------------------------------------------------------------

namespace detail {

inline void nonlinear_half_step(SystemState& s, double half_dt) {
    const double beta = s.beta;
    for (std::size_t i = 0; i < s.u.values.size(); ++i) {
        double u2 = std::norm(s.u.values[i]);
        double v2 = std::norm(s.v.values[i]);
        double au = half_dt * (u2 + beta * v2);
        double av = half_dt * (v2 + beta * u2);
        s.u.values[i] *= complexd(std::cos(au), std::sin(au));
        s.v.values[i] *= complexd(std::cos(av), std::sin(av));
    }
}

inline void linear_full_step(ComplexField& f, double dt) {
    const Grid& g = f.grid;
    ComplexField hat = to_spectral(f);
    std::size_t idx = 0;
    for (int ix = 0; ix < g.n; ++ix) {
        double kx = g.wavenumbers[ix];
        for (int iy = 0; iy < g.n; ++iy) {
            double ky = g.wavenumbers[iy];
            for (int iz = 0; iz < g.n; ++iz, ++idx) {
                double kz = g.wavenumbers[iz];
                double arg = -dt * (kx * kx + ky * ky + kz * kz);
                hat.values[idx] *= complexd(std::cos(arg), std::sin(arg));
            }
        }
    }
    f = to_physical(hat);
}

} // namespace detail

/// One Strang step: exact nonlinear phase half-step, exact linear spectral
/// step, second nonlinear half-step. Works for dt of either sign, and
/// step_strang(step_strang(s, dt), -dt) is the identity to roundoff.
inline SystemState step_strang(SystemState s, double dt) {
    detail::nonlinear_half_step(s, dt / 2.0);
    detail::linear_full_step(s.u, dt);
    detail::linear_full_step(s.v, dt);
    detail::nonlinear_half_step(s, dt / 2.0);
    s.time += dt;
    return s;
}

// ---------------------------------------------------------------------------
// Trajectory driver
// ---------------------------------------------------------------------------

namespace detail {

// One pass over the state: invariants, decay norms, spectral tail fraction.
inline TrajectoryRecord inspect_state(const SystemState& s) {
    const Grid& g = s.u.grid;
    const double vol = g.spacing * g.spacing * g.spacing;

    TrajectoryRecord rec;
    rec.invariants.time = s.time;

    double mass = 0.0, quartic = 0.0, l4u = 0.0, l4v = 0.0, l5u = 0.0, l5v = 0.0, amp = 0.0;
    for (std::size_t i = 0; i < s.u.values.size(); ++i) {
        double u2 = std::norm(s.u.values[i]);
        double v2 = std::norm(s.v.values[i]);
        mass += u2 + v2;
        quartic += u2 * u2 + 2.0 * s.beta * u2 * v2 + v2 * v2;
        l4u += u2 * u2;
        l4v += v2 * v2;
        l5u += u2 * u2 * std::sqrt(u2);
        l5v += v2 * v2 * std::sqrt(v2);
        amp = std::max(amp, std::max(u2, v2));
    }
    rec.invariants.mass = mass * vol;
    rec.invariants.quartic = quartic * vol;
    rec.l4_u = std::pow(l4u * vol, 0.25);
    rec.l4_v = std::pow(l4v * vol, 0.25);
    rec.l5_pow_u = l5u * vol;
    rec.l5_pow_v = l5v * vol;
    rec.max_amplitude = std::sqrt(amp);

    ComplexField uhat = to_spectral(s.u);
    ComplexField vhat = to_spectral(s.v);
    // top third of the representable |k| range (which extends to sqrt(3) times
    // the axis Nyquist in the cube corners); for radial data the resolvable
    // band ends at the inscribed sphere, so mass out here is alias-generated
    const double k_cut = (2.0 / 3.0) * std::sqrt(3.0) * g.nyquist();
    double total = 0.0, tail = 0.0;
    std::size_t idx = 0;
    for (int ix = 0; ix < g.n; ++ix) {
        double kx = g.wavenumbers[ix], dx = g.deriv_multiplier[ix];
        for (int iy = 0; iy < g.n; ++iy) {
            double ky = g.wavenumbers[iy], dy = g.deriv_multiplier[iy];
            for (int iz = 0; iz < g.n; ++iz, ++idx) {
                double kz = g.wavenumbers[iz], dz = g.deriv_multiplier[iz];
                double p = std::norm(uhat.values[idx]) + std::norm(vhat.values[idx]);
                rec.invariants.momentum[0] += dx * p;
                rec.invariants.momentum[1] += dy * p;
                rec.invariants.momentum[2] += dz * p;
                // full wavenumbers: this is the kinetic sum the flow conserves
                rec.invariants.kinetic += (kx * kx + ky * ky + kz * kz) * p;
                total += p;
                if (kx * kx + ky * ky + kz * kz >= k_cut * k_cut) tail += p;
            }
        }
    }
    rec.invariants.momentum[0] *= vol;
    rec.invariants.momentum[1] *= vol;
    rec.invariants.momentum[2] *= vol;
    rec.invariants.kinetic *= vol;
    rec.tail_fraction = total > 0.0 ? tail / total : 0.0;

    rec.invariants.energy = rec.invariants.kinetic / 2.0 - rec.invariants.quartic / 4.0;
    rec.invariants.s_value = 8.0 * rec.invariants.kinetic - 6.0 * rec.invariants.quartic;
    rec.invariants.j_value = rec.invariants.energy + rec.invariants.mass / 2.0;
    rec.invariants.k_value = 2.0 * rec.invariants.kinetic - 1.5 * rec.invariants.quartic;
    return rec;
}

} // namespace detail

/// Repeated Strang stepping with reports every report_every steps. Halts
/// early with BlowUpDetected on kinetic growth or amplitude beyond the
/// resolvable bound, and with ResolutionLoss on NaN or on spectral-tail mass
/// crossing its limit. Detection order matches that listing.
inline Trajectory evolve(const SystemState& initial, const EvolutionConfig& cfg) {
    if (cfg.dt == 0.0) throw std::invalid_argument("evolve: dt must be nonzero");
    if (cfg.report_every < 1) throw std::invalid_argument("evolve: report_every must be >= 1");
    const double span = cfg.t_end - initial.time;
    if (span * cfg.dt < 0.0)
        throw std::invalid_argument("evolve: t_end is unreachable with this dt sign");
    const std::int64_t nsteps = std::llround(span / cfg.dt);

    Trajectory traj;
    SystemState s = initial;

    TrajectoryRecord first = detail::inspect_state(s);
    const double kinetic0 = first.invariants.kinetic;
    const double amp_bound = cfg.blowup_amplitude_fraction * s.u.grid.nyquist();

    // stability guidance: the nonlinear phase rate should stay well inside a
    // step
    double nl_rate = 0.0;
    for (std::size_t i = 0; i < s.u.values.size(); ++i) {
        double u2 = std::norm(s.u.values[i]);
        double v2 = std::norm(s.v.values[i]);
        nl_rate = std::max(nl_rate, std::max(u2 + s.beta * v2, v2 + s.beta * u2));
    }
    if (std::abs(cfg.dt) * nl_rate >= 0.5)
        traj.warnings.push_back("dt * max nonlinear rate = " +
                                std::to_string(std::abs(cfg.dt) * nl_rate) +
                                " >= 0.5; accuracy is degraded");

    traj.records.push_back(first);
    if (cfg.checkpoint_every > 0) traj.checkpoints.push_back(s);

    std::int64_t report_count = 0;
    for (std::int64_t step = 1; step <= nsteps; ++step) {
        s = step_strang(std::move(s), cfg.dt);
        if (step % cfg.report_every != 0 && step != nsteps) continue;

        if (!all_finite(s.u) || !all_finite(s.v)) {
            traj.verdict = Verdict::ResolutionLoss;
            traj.verdict_time = s.time;
            return traj;
        }
        TrajectoryRecord rec = detail::inspect_state(s);
        const TrajectoryRecord& prev = traj.records.back();
        double dt_report = rec.invariants.time - prev.invariants.time;
        rec.l5_accumulated = prev.l5_accumulated +
                             0.5 * dt_report *
                                 (prev.l5_pow_u + prev.l5_pow_v + rec.l5_pow_u + rec.l5_pow_v);
        traj.records.push_back(rec);
        ++report_count;
        if (cfg.checkpoint_every > 0 && report_count % cfg.checkpoint_every == 0)
            traj.checkpoints.push_back(s);

        if (rec.invariants.kinetic > cfg.blowup_kinetic_factor * kinetic0 ||
            rec.max_amplitude > amp_bound) {
            traj.verdict = Verdict::BlowUpDetected;
            traj.verdict_time = s.time;
            return traj;
        }
        if (rec.tail_fraction > cfg.tail_fraction_limit) {
            traj.verdict = Verdict::ResolutionLoss;
            traj.verdict_time = s.time;
            return traj;
        }
    }
    traj.verdict = Verdict::ReachedTEnd;
    traj.verdict_time = s.time;
    if (cfg.checkpoint_every > 0 && (traj.checkpoints.empty() ||
                                     traj.checkpoints.back().time != s.time))
        traj.checkpoints.push_back(s);
    return traj;
}

// ---------------------------------------------------------------------------
// Virial identities
// ---------------------------------------------------------------------------

struct VirialWeight {
    enum class Kind {
        Centered,  // |x - c|^2 inside radius, C4 taper to zero on [radius, 2 radius]
        Truncated  // R^2 zeta(x/R) with zeta the quadratic-core compactly
                   // supported bump; same radial function, data confined to R
    };
    Kind kind = Kind::Centered;
    double radius = 6.0;
};

struct VirialReport {
    double v = 0.0;
    double v_prime = 0.0;
    double v_double_prime = 0.0;
};

namespace detail {

// radial weight profile rho(s) = s^2 on [0,1], C4 taper to 0 on [1,2];
// derivatives are closed-form polynomials
struct WeightProfile {
    double rho, d1, d2, d3, d4;
};

inline WeightProfile weight_profile(double s) {
    WeightProfile w{};
    if (s <= 1.0) {
        w.rho = s * s;
        w.d1 = 2.0 * s;
        w.d2 = 2.0;
        return w;
    }
    if (s >= 2.0) return w;
    const double t = s - 1.0;
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
    const double S = ((((70 * t - 315) * t + 540) * t - 420) * t + 126) * t4 * t;
    const double S1 = ((((630 * t - 2520) * t + 3780) * t - 2520) * t + 630) * t4;
    const double S2 = ((((5040 * t - 17640) * t + 22680) * t - 12600) * t + 2520) * t3;
    const double S3 = ((((35280 * t - 105840) * t + 113400) * t - 50400) * t + 7560) * t2;
    const double S4 = ((((211680 * t - 529200) * t + 453600) * t - 151200) * t + 15120) * t;
    const double s2 = s * s;
    w.rho = s2 * (1.0 - S);
    w.d1 = 2.0 * s * (1.0 - S) - s2 * S1;
    w.d2 = 2.0 * (1.0 - S) - 4.0 * s * S1 - s2 * S2;
    w.d3 = -6.0 * S1 - 6.0 * s * S2 - s2 * S3;
    w.d4 = -12.0 * S2 - 8.0 * s * S3 - s2 * S4;
    return w;
}

} // namespace detail

/// Weighted-mass virial quantities: V from the weight integral, V' from the
/// momentum-density formula, V'' from the second-variation formula with the
/// weight's analytic derivatives. On the quadratic core the V'' integrand
/// degenerates to 8 |grad|^2 - 6 (quartic density), i.e. V'' -> S when the
/// data is confined there.
inline VirialReport virial(const SystemState& s, const VirialWeight& weight) {
    const Grid& g = s.u.grid;
    const double vol = g.spacing * g.spacing * g.spacing;
    const double R = weight.radius;
    if (!(R > 0.0)) throw std::invalid_argument("virial: weight radius must be positive");

    // localization precondition: the compact-support hypothesis must be honest
    const double confine_radius =
        weight.kind == VirialWeight::Kind::Centered ? R : 2.0 * R;
    const auto c = g.center();
    double mass_total = 0.0, mass_outside = 0.0;
    std::size_t idx = 0;
    for (int ix = 0; ix < g.n; ++ix) {
        double dx = g.coord(ix) - c[0];
        for (int iy = 0; iy < g.n; ++iy) {
            double dy = g.coord(iy) - c[1];
            for (int iz = 0; iz < g.n; ++iz, ++idx) {
                double dz = g.coord(iz) - c[2];
                double m = std::norm(s.u.values[idx]) + std::norm(s.v.values[idx]);
                mass_total += m;
                if (dx * dx + dy * dy + dz * dz > confine_radius * confine_radius)
                    mass_outside += m;
            }
        }
    }
    if (mass_outside > 1e-8 * mass_total)
        throw std::invalid_argument(
            "virial: mass fraction " + std::to_string(mass_outside / mass_total) +
            " outside radius " + std::to_string(confine_radius) +
            " violates the localization precondition");

    auto grad_u = gradient(s.u);
    auto grad_v = gradient(s.v);

    VirialReport rep;
    idx = 0;
    for (int ix = 0; ix < g.n; ++ix) {
        double dx = g.coord(ix) - c[0];
        for (int iy = 0; iy < g.n; ++iy) {
            double dy = g.coord(iy) - c[1];
            for (int iz = 0; iz < g.n; ++iz, ++idx) {
                double dz = g.coord(iz) - c[2];
                double r2 = dx * dx + dy * dy + dz * dz;
                double r = std::sqrt(r2);
                double sarg = r / R;
                if (sarg >= 2.0) continue;
                detail::WeightProfile w = detail::weight_profile(sarg);

                double u2 = std::norm(s.u.values[idx]);
                double v2 = std::norm(s.v.values[idx]);
                double dens = u2 + v2;
                double quart = u2 * u2 + 2.0 * s.beta * u2 * v2 + v2 * v2;

                rep.v += R * R * w.rho * dens;

                std::array<double, 3> xhat = {0.0, 0.0, 0.0};
                double d1_over_s = 2.0;  // limit of rho'(s)/s at 0
                if (r > 1e-12) {
                    xhat = {dx / r, dy / r, dz / r};
                    d1_over_s = w.d1 / sarg;
                }

                // V': 2 grad(phi) . (Im conj(u) grad u + Im conj(v) grad v)
                for (int a = 0; a < 3; ++a) {
                    double grad_phi = R * w.d1 * xhat[a];
                    double mom = (std::conj(s.u.values[idx]) * grad_u[a].values[idx]).imag() +
                                 (std::conj(s.v.values[idx]) * grad_v[a].values[idx]).imag();
                    rep.v_prime += 2.0 * grad_phi * mom;
                }

                // V'': 4 sum_{k,j} phi_{kj} Re(d_k u d_j conj(u) + ...)
                //      - lap^2(phi) dens - lap(phi) quart
                double hess = 0.0;
                for (int a = 0; a < 3; ++a) {
                    for (int b = 0; b < 3; ++b) {
                        double phi_ab = w.d2 * xhat[a] * xhat[b] +
                                        d1_over_s * ((a == b ? 1.0 : 0.0) - xhat[a] * xhat[b]);
                        double re = (grad_u[a].values[idx] * std::conj(grad_u[b].values[idx]) +
                                     grad_v[a].values[idx] * std::conj(grad_v[b].values[idx]))
                                        .real();
                        hess += phi_ab * re;
                    }
                }
                double lap_phi = w.d2 + 2.0 * d1_over_s;
                double bilap_phi = 0.0;
                if (sarg > 1.0) {
                    // zero on the quadratic core; closed form on the taper
                    bilap_phi = (w.d4 + 4.0 * w.d3 / sarg) / (R * R);
                }
                rep.v_double_prime += 4.0 * hess - bilap_phi * dens - lap_phi * quart;
            }
        }
    }
    rep.v *= vol;
    rep.v_prime *= vol;
    rep.v_double_prime *= vol;
    return rep;
}

} // namespace nls2
