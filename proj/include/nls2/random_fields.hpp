#pragma once

/// Seeded test ensembles. The generator is pinned (mt19937_64 + Box-Muller)
/// so fixed seeds reproduce identical fields everywhere.

#include "nls2/grid.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace nls2 {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() {  // [0, 1)
        return double(engine_() >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1 + 1e-300));
        double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Complex Gaussian field, band-limited to frequency indices |m| <= n/4 per
/// axis, unit RMS in physical space (in expectation).
inline ComplexField band_limited_field(const Grid& g, Rng& rng, int max_freq = -1) {
    if (max_freq < 0) max_freq = g.n / 4;
    ComplexField hat = make_field(g);
    std::size_t band_modes = 0;
    auto freq_of = [&](int m) { return (m <= g.n / 2) ? m : m - g.n; };
    for (int ix = 0; ix < g.n; ++ix) {
        if (std::abs(freq_of(ix)) > max_freq) continue;
        for (int iy = 0; iy < g.n; ++iy) {
            if (std::abs(freq_of(iy)) > max_freq) continue;
            for (int iz = 0; iz < g.n; ++iz) {
                if (std::abs(freq_of(iz)) > max_freq) continue;
                hat.values[g.index(ix, iy, iz)] = complexd(rng.gaussian(), rng.gaussian());
                ++band_modes;
            }
        }
    }
    const double amp = std::sqrt(double(g.size()) / (2.0 * double(band_modes)));
    for (auto& z : hat.values) z *= amp;
    return to_physical(hat);
}

inline SystemState band_limited_state(const Grid& g, double beta, std::uint64_t seed,
                                      int max_freq = -1) {
    Rng rng(seed);
    SystemState s;
    s.u = band_limited_field(g, rng, max_freq);
    s.v = band_limited_field(g, rng, max_freq);
    s.beta = beta;
    return s;
}

/// Sum of two plane-wave-modulated Gaussians per component, kept narrow and
/// near the box center so face tails sit below ~1e-10 of the peak. Used for
/// boost and virial experiments that assume localized data.
inline ComplexField localized_field(const Grid& g, Rng& rng) {
    ComplexField f = make_field(g);
    const auto c = g.center();
    const double dk = 2.0 * std::numbers::pi / g.length;
    for (int hump = 0; hump < 2; ++hump) {
        double amp = rng.uniform(0.3, 1.0);
        double sigma = rng.uniform(0.7, 1.0);
        double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
        std::array<double, 3> x0, k0;
        for (int a = 0; a < 3; ++a) {
            x0[a] = c[a] + rng.uniform(-1.0, 1.0);
            k0[a] = dk * std::floor(rng.uniform(-2.0, 3.0));  // lattice modulation
        }
        std::size_t idx = 0;
        for (int ix = 0; ix < g.n; ++ix) {
            double dx = g.coord(ix) - x0[0];
            for (int iy = 0; iy < g.n; ++iy) {
                double dy = g.coord(iy) - x0[1];
                for (int iz = 0; iz < g.n; ++iz, ++idx) {
                    double dz = g.coord(iz) - x0[2];
                    double r2 = dx * dx + dy * dy + dz * dz;
                    double envelope = amp * std::exp(-r2 / (2.0 * sigma * sigma));
                    double th = k0[0] * g.coord(ix) + k0[1] * g.coord(iy) +
                                k0[2] * g.coord(iz) + phase;
                    f.values[idx] += envelope * complexd(std::cos(th), std::sin(th));
                }
            }
        }
    }
    return f;
}

inline SystemState localized_state(const Grid& g, double beta, std::uint64_t seed) {
    Rng rng(seed);
    SystemState s;
    s.u = localized_field(g, rng);
    s.v = localized_field(g, rng);
    s.beta = beta;
    return s;
}

} // namespace nls2
