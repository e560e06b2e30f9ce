#pragma once

/// Periodic-box discretization and the spectral calculus on it: unitary
/// transforms, derivatives, quadrature and radial embedding. Fields are
/// plain value types; every operation here is a pure function.

#include "nls2/fft.hpp"
#include "nls2/radial_profile.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>

namespace nls2 {

using complexd = std::complex<double>;

struct Grid {
    int n = 0;               // points per axis, power of two
    double length = 0.0;     // physical side length L
    double spacing = 0.0;    // L / n, exact since n is a power of two
    std::vector<double> wavenumbers;        // 2*pi*m/L, m = 0,1,..,n/2,-n/2+1,..,-1
    std::vector<double> deriv_multiplier;   // same, but zero at the Nyquist index

    std::size_t size() const { return std::size_t(n) * n * n; }
    std::size_t index(int ix, int iy, int iz) const {
        return (std::size_t(ix) * n + iy) * n + iz;
    }
    double coord(int i) const { return i * spacing; }
    std::array<double, 3> center() const { return {length / 2, length / 2, length / 2}; }
    double nyquist() const { return std::numbers::pi * n / length; }

    bool operator==(const Grid& other) const {
        return n == other.n && length == other.length;
    }
};

inline Grid make_grid(int n_per_axis, double box_length) {
    if (n_per_axis < 8 || (n_per_axis & (n_per_axis - 1)) != 0)
        throw std::invalid_argument("make_grid: n_per_axis must be a power of two >= 8, got " +
                                    std::to_string(n_per_axis));
    if (!(box_length > 0.0))
        throw std::invalid_argument("make_grid: box_length must be positive");

    Grid g;
    g.n = n_per_axis;
    g.length = box_length;
    g.spacing = box_length / n_per_axis;
    g.wavenumbers.resize(n_per_axis);
    g.deriv_multiplier.resize(n_per_axis);
    const double dk = 2.0 * std::numbers::pi / box_length;
    for (int m = 0; m < n_per_axis; ++m) {
        int freq = (m <= n_per_axis / 2) ? m : m - n_per_axis;
        g.wavenumbers[m] = dk * freq;
        // The Nyquist mode samples as a pure cosine whose derivative vanishes
        // at every grid point, so odd-order spectral derivatives drop it.
        g.deriv_multiplier[m] = (m == n_per_axis / 2) ? 0.0 : dk * freq;
    }
    return g;
}

struct ComplexField {
    Grid grid;
    detail::cvector values;
};

inline ComplexField make_field(const Grid& g) {
    ComplexField f;
    f.grid = g;
    f.values.assign(g.size(), complexd(0.0, 0.0));
    return f;
}

/// Pair (u, v) of fields on a shared grid at a common time.
struct SystemState {
    ComplexField u;
    ComplexField v;
    double time = 0.0;
    double beta = 0.0;
};

inline SystemState make_state(const Grid& g, double beta) {
    SystemState s;
    s.u = make_field(g);
    s.v = make_field(g);
    s.beta = beta;
    return s;
}

inline SystemState scaled(const SystemState& s, double amplitude) {
    SystemState out = s;
    for (auto& z : out.u.values) z *= amplitude;
    for (auto& z : out.v.values) z *= amplitude;
    return out;
}

inline bool all_finite(const ComplexField& f) {
    for (const auto& z : f.values)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

inline double max_abs(const ComplexField& f) {
    double m = 0.0;
    for (const auto& z : f.values) m = std::max(m, std::abs(z));
    return m;
}

// ---------------------------------------------------------------------------
// Transforms. Unitary normalization: both directions scale by N^{-1/2},
// so the round trip is the identity and Parseval holds with the same
// volume element h^3 on both sides.
// ---------------------------------------------------------------------------

inline ComplexField to_spectral(const ComplexField& f) {
    ComplexField out;
    out.grid = f.grid;
    out.values.resize(f.values.size());
    detail::dft3(f.grid.n, f.values.data(), out.values.data(), true);
    const double scale = 1.0 / std::sqrt(double(f.grid.size()));
    for (auto& z : out.values) z *= scale;
    return out;
}

inline ComplexField to_physical(const ComplexField& coeffs) {
    ComplexField out;
    out.grid = coeffs.grid;
    out.values.resize(coeffs.values.size());
    detail::dft3(coeffs.grid.n, coeffs.values.data(), out.values.data(), false);
    const double scale = 1.0 / std::sqrt(double(coeffs.grid.size()));
    for (auto& z : out.values) z *= scale;
    return out;
}

/// Spectral gradient: component j is to_physical(i * k_j * to_spectral(f)).
inline std::array<ComplexField, 3> gradient(const ComplexField& f) {
    const Grid& g = f.grid;
    ComplexField hat = to_spectral(f);
    std::array<ComplexField, 3> grad;
    ComplexField comp;
    comp.grid = g;
    comp.values.resize(g.size());
    for (int axis = 0; axis < 3; ++axis) {
        std::size_t idx = 0;
        for (int ix = 0; ix < g.n; ++ix) {
            for (int iy = 0; iy < g.n; ++iy) {
                for (int iz = 0; iz < g.n; ++iz, ++idx) {
                    int m = axis == 0 ? ix : (axis == 1 ? iy : iz);
                    comp.values[idx] = complexd(0.0, g.deriv_multiplier[m]) * hat.values[idx];
                }
            }
        }
        grad[axis].grid = g;
        grad[axis].values.resize(g.size());
        detail::dft3(g.n, comp.values.data(), grad[axis].values.data(), false);
        const double scale = 1.0 / std::sqrt(double(g.size()));
        for (auto& z : grad[axis].values) z *= scale;
    }
    return grad;
}

// ---------------------------------------------------------------------------
// Quadrature: rectangle rule, spectrally accurate for smooth periodic
// integrands.
// ---------------------------------------------------------------------------

inline double integrate(const Grid& g, std::span<const double> samples) {
    if (samples.size() != g.size())
        throw std::invalid_argument("integrate: sample count does not match grid");
    double sum = 0.0;
    for (double s : samples) sum += s;
    return sum * g.spacing * g.spacing * g.spacing;
}

/// integral of |f|^2
inline double integrate_abs2(const ComplexField& f) {
    double sum = 0.0;
    for (const auto& z : f.values) sum += std::norm(z);
    return sum * f.grid.spacing * f.grid.spacing * f.grid.spacing;
}

/// Squared H1 grid norm: integral of |f|^2 + |grad f|^2 (spectral gradient).
inline double h1_norm_sq(const ComplexField& f) {
    const Grid& g = f.grid;
    ComplexField hat = to_spectral(f);
    double sum = 0.0;
    std::size_t idx = 0;
    for (int ix = 0; ix < g.n; ++ix) {
        double kx = g.wavenumbers[ix];
        for (int iy = 0; iy < g.n; ++iy) {
            double ky = g.wavenumbers[iy];
            for (int iz = 0; iz < g.n; ++iz, ++idx) {
                double kz = g.wavenumbers[iz];
                sum += (1.0 + kx * kx + ky * ky + kz * kz) * std::norm(hat.values[idx]);
            }
        }
    }
    return sum * g.spacing * g.spacing * g.spacing;
}

// ---------------------------------------------------------------------------
// Radial embedding
// ---------------------------------------------------------------------------

/// Places a radial profile onto the grid as a real-valued field centered at
/// the box center, using 4-point (cubic) Lagrange interpolation in r.
inline ComplexField embed_radial(const RadialProfile& profile, const Grid& g) {
    const auto& r = profile.radii;
    const auto& s = profile.samples;
    if (r.size() < 4 || r.size() != s.size())
        throw std::invalid_argument("embed_radial: profile needs at least 4 samples");

    const double half_diagonal = std::sqrt(3.0) * g.length / 2.0;
    const double r_last = r.back();
    if (r_last < half_diagonal) {
        // Profile does not cover the box; only acceptable if it has decayed.
        bool decayed = false;
        for (double v : s)
            if (std::abs(v) < 1e-12) { decayed = true; break; }
        if (!decayed || std::abs(s.back()) > 1e-8)
            throw std::invalid_argument(
                "embed_radial: profile ends at r=" + std::to_string(r_last) +
                " with sample " + std::to_string(s.back()) +
                " and does not cover the box half-diagonal");
    }

    auto eval = [&](double rr) -> double {
        if (rr >= r_last) return 0.0;
        // locate the interval by binary search, then cubic Lagrange on the
        // 4-point stencil around it (one-sided at the ends)
        std::size_t lo = 0, hi = r.size() - 1;
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            if (r[mid] <= rr) lo = mid; else hi = mid;
        }
        std::size_t i0 = (lo == 0) ? 0 : lo - 1;
        if (i0 + 3 >= r.size()) i0 = r.size() - 4;
        double acc = 0.0;
        for (std::size_t a = 0; a < 4; ++a) {
            double w = 1.0;
            for (std::size_t b = 0; b < 4; ++b) {
                if (a == b) continue;
                w *= (rr - r[i0 + b]) / (r[i0 + a] - r[i0 + b]);
            }
            acc += w * s[i0 + a];
        }
        return acc;
    };

    ComplexField f = make_field(g);
    const auto c = g.center();
    std::size_t idx = 0;
    for (int ix = 0; ix < g.n; ++ix) {
        double dx = g.coord(ix) - c[0];
        for (int iy = 0; iy < g.n; ++iy) {
            double dy = g.coord(iy) - c[1];
            for (int iz = 0; iz < g.n; ++iz, ++idx) {
                double dz = g.coord(iz) - c[2];
                f.values[idx] = eval(std::sqrt(dx * dx + dy * dy + dz * dz));
            }
        }
    }
    return f;
}

} // namespace nls2
