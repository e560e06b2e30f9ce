#pragma once

/// Exact symmetry transforms of the flow: amplitude/space scaling and
/// Galilean boosts, realized so their algebraic identities hold to roundoff
/// on band-limited grid data.

#include "nls2/functionals.hpp"
#include "nls2/grid.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace nls2 {

/// (u, v) -> (lambda u(lambda x), lambda v(lambda x)) with t -> lambda^2 t.
/// The rescaled grid keeps the point count and shrinks the box by lambda, so
/// new grid points land exactly on old ones: sample values just scale by
/// lambda and no resampling (hence no aliasing) occurs.
inline SystemState rescale(const SystemState& s, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("rescale: lambda must be positive");
    SystemState out = s;
    Grid g = make_grid(s.u.grid.n, s.u.grid.length / lambda);
    out.u.grid = g;
    out.v.grid = g;
    for (auto& z : out.u.values) z *= lambda;
    for (auto& z : out.v.values) z *= lambda;
    out.time = s.time * lambda * lambda;
    return out;
}

enum class BoostPolicy {
    SnapToLattice,  // round xi0 to multiples of 2 pi / L: phase is box-periodic
    Exact           // use xi0 as given; wrap-around mismatch at the faces is
                    // O(|u| at the boundary), acceptable only for localized data
};

/// Galilean boost (e^{i(x.xi0 - t|xi0|^2)} u(x - 2 t xi0, t), same for v).
/// The shift by 2 t xi0 is a spectral phase multiplication, exact for
/// band-limited fields. Returns the state together with the xi0 actually used
/// (it differs from the request under SnapToLattice).
inline std::pair<SystemState, std::array<double, 3>> boost_with_xi(
    const SystemState& s, std::array<double, 3> xi0, double t,
    BoostPolicy policy = BoostPolicy::SnapToLattice) {
    const Grid& g = s.u.grid;
    const double dk = 2.0 * std::numbers::pi / g.length;
    if (policy == BoostPolicy::SnapToLattice)
        for (auto& c : xi0) c = dk * std::round(c / dk);

    SystemState out = s;
    const double phase_t = -t * (xi0[0] * xi0[0] + xi0[1] * xi0[1] + xi0[2] * xi0[2]);

    auto apply = [&](const ComplexField& in) {
        ComplexField f = in;
        if (t != 0.0) {
            // translate by 2 t xi0 spectrally
            ComplexField hat = to_spectral(in);
            std::size_t idx = 0;
            for (int ix = 0; ix < g.n; ++ix) {
                double kx = g.wavenumbers[ix];
                for (int iy = 0; iy < g.n; ++iy) {
                    double ky = g.wavenumbers[iy];
                    for (int iz = 0; iz < g.n; ++iz, ++idx) {
                        double kz = g.wavenumbers[iz];
                        double arg = -2.0 * t * (kx * xi0[0] + ky * xi0[1] + kz * xi0[2]);
                        hat.values[idx] *= complexd(std::cos(arg), std::sin(arg));
                    }
                }
            }
            f = to_physical(hat);
        }
        std::size_t idx = 0;
        for (int ix = 0; ix < g.n; ++ix) {
            double px = xi0[0] * g.coord(ix);
            for (int iy = 0; iy < g.n; ++iy) {
                double py = xi0[1] * g.coord(iy);
                for (int iz = 0; iz < g.n; ++iz, ++idx) {
                    double arg = px + py + xi0[2] * g.coord(iz) + phase_t;
                    f.values[idx] *= complexd(std::cos(arg), std::sin(arg));
                }
            }
        }
        return f;
    };

    out.u = apply(s.u);
    out.v = apply(s.v);
    return {std::move(out), xi0};
}

inline SystemState boost(const SystemState& s, const std::array<double, 3>& xi0, double t,
                         BoostPolicy policy = BoostPolicy::SnapToLattice) {
    return boost_with_xi(s, xi0, t, policy).first;
}

/// Boost by xi0 = -F/M at t = 0, which cancels the momentum. The exact
/// (off-lattice) policy is required here; the residual momentum is at the
/// level of the data's box-face tails.
inline std::pair<SystemState, std::array<double, 3>> zero_momentum_boost(const SystemState& s) {
    double m = mass(s);
    if (!(m > 0.0)) throw std::invalid_argument("zero_momentum_boost: state has zero mass");
    std::array<double, 3> f = momentum(s);
    std::array<double, 3> xi0 = {-f[0] / m, -f[1] / m, -f[2] / m};
    return boost_with_xi(s, xi0, 0.0, BoostPolicy::Exact);
}

} // namespace nls2
