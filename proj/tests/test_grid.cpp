#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nls2/grid.hpp"
#include "nls2/random_fields.hpp"

#include <cmath>
#include <numbers>

using namespace nls2;
using std::numbers::pi;

TEST_CASE("make_grid wavenumber layout") {
    Grid g = make_grid(8, 2 * pi);
    CHECK(g.spacing == doctest::Approx(2 * pi / 8).epsilon(1e-15));
    // unit box period: wavenumbers are the integers 0,1,2,3,4,-3,-2,-1
    std::vector<double> expect = {0, 1, 2, 3, 4, -3, -2, -1};
    for (int m = 0; m < 8; ++m) CHECK(g.wavenumbers[m] == doctest::Approx(expect[m]).epsilon(1e-14));
    CHECK(g.deriv_multiplier[4] == 0.0);

    Grid g2 = make_grid(16, 32.0);
    CHECK(g2.spacing == 2.0);
    double kmax = 0.0;
    for (double k : g2.wavenumbers) kmax = std::max(kmax, std::abs(k));
    CHECK(kmax == doctest::Approx(pi / 2).epsilon(1e-14));

    CHECK(g2.spacing * g2.n == g2.length);  // exact, n is a power of two

    CHECK_THROWS_AS(make_grid(7, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(0, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(64, -1.0), std::invalid_argument);
}

TEST_CASE("transforms: constant and plane-wave fields") {
    Grid g = make_grid(16, 8.0);
    ComplexField f = make_field(g);
    for (auto& z : f.values) z = complexd(1.5, -0.25);

    ComplexField hat = to_spectral(f);
    CHECK(std::abs(hat.values[g.index(0, 0, 0)]) ==
          doctest::Approx(std::abs(complexd(1.5, -0.25)) * std::sqrt(double(g.size()))).epsilon(1e-13));
    double off = 0.0;
    for (std::size_t i = 1; i < hat.values.size(); ++i) off = std::max(off, std::abs(hat.values[i]));
    CHECK(off < 1e-12);

    // e^{i k.x} with a resolved wavenumber lands on a single coefficient
    int mx = 3, my = 14, mz = 0;  // my=14 means frequency -2
    ComplexField w = make_field(g);
    std::size_t idx = 0;
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy)
            for (int iz = 0; iz < g.n; ++iz, ++idx) {
                double th = g.wavenumbers[mx] * g.coord(ix) + g.wavenumbers[my] * g.coord(iy) +
                            g.wavenumbers[mz] * g.coord(iz);
                w.values[idx] = complexd(std::cos(th), std::sin(th));
            }
    ComplexField what = to_spectral(w);
    double peak = std::abs(what.values[g.index(mx, my, mz)]);
    CHECK(peak == doctest::Approx(std::sqrt(double(g.size()))).epsilon(1e-12));
    what.values[g.index(mx, my, mz)] = 0.0;
    CHECK(max_abs(what) < 1e-11 * peak);
}

TEST_CASE("transform round trip and Parseval on a pseudorandom field") {
    Grid g = make_grid(32, 12.0);
    Rng rng(123);
    ComplexField f = band_limited_field(g, rng);

    ComplexField back = to_physical(to_spectral(f));
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        num += std::norm(back.values[i] - f.values[i]);
        den += std::norm(f.values[i]);
    }
    CHECK(std::sqrt(num / den) < 1e-12);

    double physical = integrate_abs2(f);
    double spectral = integrate_abs2(to_spectral(f));
    CHECK(std::abs(physical - spectral) <= 1e-12 * physical);
}

TEST_CASE("gradient: constant, single mode, reality") {
    Grid g = make_grid(16, 8.0);
    ComplexField f = make_field(g);
    for (auto& z : f.values) z = 2.0;
    auto grad = gradient(f);
    for (int a = 0; a < 3; ++a) CHECK(max_abs(grad[a]) < 1e-13);

    // sin(k0 x) -> k0 cos(k0 x) exactly for a resolved mode
    double k0 = g.wavenumbers[2];
    std::size_t idx = 0;
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy)
            for (int iz = 0; iz < g.n; ++iz, ++idx)
                f.values[idx] = std::sin(k0 * g.coord(ix));
    grad = gradient(f);
    double err = 0.0;
    idx = 0;
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy)
            for (int iz = 0; iz < g.n; ++iz, ++idx)
                err = std::max(err, std::abs(grad[0].values[idx] - k0 * std::cos(k0 * g.coord(ix))));
    CHECK(err < 1e-10);
    CHECK(max_abs(grad[1]) < 1e-12);

    // real field in, real gradient out (up to roundoff)
    Rng rng(77);
    ComplexField h = band_limited_field(g, rng);
    for (auto& z : h.values) z = complexd(z.real(), 0.0);
    auto gh = gradient(h);
    double max_imag = 0.0;
    for (int a = 0; a < 3; ++a)
        for (const auto& z : gh[a].values) max_imag = std::max(max_imag, std::abs(z.imag()));
    CHECK(max_imag <= 1e-10 * max_abs(h));
}

TEST_CASE("gradient matches centered finite differences at second order") {
    // fixed low-frequency field sampled on two resolutions; the FD error
    // must shrink by ~4x when the spacing halves
    auto sample = [](const Grid& g) {
        ComplexField f = make_field(g);
        std::size_t idx = 0;
        for (int ix = 0; ix < g.n; ++ix)
            for (int iy = 0; iy < g.n; ++iy)
                for (int iz = 0; iz < g.n; ++iz, ++idx) {
                    double x = g.coord(ix), y = g.coord(iy), z = g.coord(iz);
                    double q = 2 * pi / g.length;
                    f.values[idx] = std::sin(2 * q * x) * std::cos(q * y) +
                                    0.5 * std::cos(3 * q * z + q * x);
                }
        return f;
    };
    auto fd_error = [&](const Grid& g) {
        ComplexField f = sample(g);
        auto grad = gradient(f);
        double worst = 0.0;
        for (int ix = 0; ix < g.n; ++ix)
            for (int iy = 0; iy < g.n; ++iy)
                for (int iz = 0; iz < g.n; ++iz) {
                    int xp = (ix + 1) % g.n, xm = (ix + g.n - 1) % g.n;
                    complexd fd = (f.values[g.index(xp, iy, iz)] - f.values[g.index(xm, iy, iz)]) /
                                  (2.0 * g.spacing);
                    worst = std::max(worst, std::abs(fd - grad[0].values[g.index(ix, iy, iz)]));
                }
        return worst;
    };
    double coarse = fd_error(make_grid(16, 10.0));
    double fine = fd_error(make_grid(32, 10.0));
    CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("integrate: volume, mean-zero mode, Gaussian") {
    Grid g = make_grid(8, 4.0);
    std::vector<double> ones(g.size(), 1.0);
    CHECK(integrate(g, ones) == doctest::Approx(64.0).epsilon(1e-15));

    // real part of a resolved plane wave integrates to zero
    std::vector<double> wave(g.size());
    std::size_t idx = 0;
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy)
            for (int iz = 0; iz < g.n; ++iz, ++idx)
                wave[idx] = std::cos(g.wavenumbers[1] * g.coord(ix));
    CHECK(std::abs(integrate(g, wave)) < 1e-12);

    // Gaussian centered in a L=16 box: truncation is negligible
    Grid gg = make_grid(64, 16.0);
    std::vector<double> gauss(gg.size());
    auto c = gg.center();
    idx = 0;
    for (int ix = 0; ix < gg.n; ++ix)
        for (int iy = 0; iy < gg.n; ++iy)
            for (int iz = 0; iz < gg.n; ++iz, ++idx) {
                double dx = gg.coord(ix) - c[0], dy = gg.coord(iy) - c[1], dz = gg.coord(iz) - c[2];
                gauss[idx] = std::exp(-(dx * dx + dy * dy + dz * dz));
            }
    CHECK(std::abs(integrate(gg, gauss) - std::pow(pi, 1.5)) < 1e-8);

    // linearity
    Grid gl = make_grid(16, 6.0);
    Rng rng(5);
    std::vector<double> a(gl.size()), b(gl.size()), combo(gl.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = rng.gaussian();
        b[i] = rng.gaussian();
        combo[i] = 2.5 * a[i] - 1.25 * b[i];
    }
    double lhs = integrate(gl, combo);
    double rhs = 2.5 * integrate(gl, a) - 1.25 * integrate(gl, b);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (std::abs(lhs) + std::abs(rhs) + 1.0));
}

TEST_CASE("embed_radial: zero, Gaussian, truncated rejection") {
    Grid g = make_grid(32, 16.0);

    RadialProfile zero;
    for (int i = 0; i <= 4000; ++i) {
        zero.radii.push_back(i * 16.0 / 4000);
        zero.samples.push_back(0.0);
    }
    ComplexField zf = embed_radial(zero, g);
    CHECK(max_abs(zf) == 0.0);

    RadialProfile gauss;
    for (int i = 0; i <= 8000; ++i) {
        double r = i * 16.0 / 8000;
        gauss.radii.push_back(r);
        gauss.samples.push_back(std::exp(-r * r));
    }
    ComplexField gf = embed_radial(gauss, g);
    auto c = g.center();
    double err = 0.0;
    std::size_t idx = 0;
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy)
            for (int iz = 0; iz < g.n; ++iz, ++idx) {
                double dx = g.coord(ix) - c[0], dy = g.coord(iy) - c[1], dz = g.coord(iz) - c[2];
                double r2 = dx * dx + dy * dy + dz * dz;
                err = std::max(err, std::abs(gf.values[idx].real() - std::exp(-r2)));
                err = std::max(err, std::abs(gf.values[idx].imag()));
            }
    CHECK(err < 1e-6);

    RadialProfile trunc;
    for (int i = 0; i <= 100; ++i) {
        double r = i * 4.0 / 100;
        trunc.radii.push_back(r);
        trunc.samples.push_back(1.0 - 0.9 * r / 4.0 * r / 4.0);  // ends near 0.1
    }
    CHECK_THROWS_AS(embed_radial(trunc, g), std::invalid_argument);
}
