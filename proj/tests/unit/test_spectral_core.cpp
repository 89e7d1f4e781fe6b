/// Transforms, multiplier symbols, Littlewood-Paley apparatus, Riesz kernel.

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "relhartree/fft.hpp"
#include "relhartree/littlewood_paley.hpp"
#include "relhartree/multiplier.hpp"
#include "relhartree/oracles.hpp"
#include "relhartree/riesz.hpp"

using namespace relhartree;

namespace {

ComplexField random_field(const SpectralGrid& g, Space sp, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    ComplexField u(g, sp);
    for (auto& v : u.values) v = complexd(d(rng), d(rng));
    return u;
}

double discrete_l2(const ComplexField& f, double cell) {
    double s = 0;
    for (const auto& v : f.values) s += std::norm(v);
    return cell * cell * s;
}

}  // namespace

TEST_CASE("make_grid lattice and duality relation") {
    SpectralGrid g = make_grid(16, kPi);
    CHECK(g.h == Catch::Approx(2.0 * kPi / 16).epsilon(1e-15));
    CHECK(g.dxi == Catch::Approx(1.0).epsilon(1e-15));
    CHECK(g.xi(0) == Catch::Approx(-8.0));
    CHECK(g.xi(15) == Catch::Approx(7.0));
    CHECK(g.h * g.dxi * g.n == Catch::Approx(2.0 * kPi).epsilon(1e-14));

    SpectralGrid g2 = make_grid(256, 64.0);
    CHECK(g2.dxi == Catch::Approx(kPi / 64.0).epsilon(1e-15));
    // frequency lattice symmetric up to the single unpaired mode
    for (int j = 1; j < g2.n / 2; ++j)
        CHECK(g2.xi(g2.n / 2 + j) == Catch::Approx(-g2.xi(g2.n / 2 - j)).margin(1e-14));

    CHECK_THROWS_AS(make_grid(15, 10.0), ConfigError);
    CHECK_THROWS_AS(make_grid(14, 10.0), ConfigError);
    CHECK_THROWS_AS(make_grid(64, -1.0), ConfigError);
    CHECK_THROWS_AS(make_grid(64, 0.0), ConfigError);
}

TEST_CASE("forward_ft: zero, Plancherel ratio, Gaussian closed form") {
    SpectralGrid g = make_grid(128, 16.0);
    FftEngine eng(g);

    ComplexField zero(g, Space::Physical);
    ComplexField zhat = eng.forward(zero);
    for (const auto& v : zhat.values) CHECK(std::abs(v) == 0.0);

    ComplexField u = random_field(g, Space::Physical, 7);
    ComplexField v = eng.forward(u);
    const double ratio = discrete_l2(v, g.dxi) / discrete_l2(u, g.h);
    CHECK(ratio == Catch::Approx(4.0 * kPi * kPi).epsilon(1e-10));

    OracleCheck gft = gaussian_ft_oracle(256, 16.0);
    INFO(gft.name << " err=" << gft.error);
    CHECK(gft.pass);

    CHECK_THROWS_AS(eng.forward(v), ConfigError);  // wrong space tag
}

TEST_CASE("inverse_ft round trip and Gaussian inverse") {
    SpectralGrid g = make_grid(128, 12.0);
    FftEngine eng(g);
    ComplexField u = random_field(g, Space::Physical, 11);
    ComplexField back = eng.inverse(eng.forward(u));
    double sup = 0, dev = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        sup = std::max(sup, std::abs(u.values[i]));
        dev = std::max(dev, std::abs(u.values[i] - back.values[i]));
    }
    CHECK(dev < 1e-12 * sup);

    // v = 2pi Gaussian in frequency -> u = Gaussian in space
    ComplexField v(g, Space::Frequency);
    for (int j1 = 0; j1 < g.n; ++j1)
        for (int j2 = 0; j2 < g.n; ++j2) {
            const double r2 = g.xi(j1) * g.xi(j1) + g.xi(j2) * g.xi(j2);
            v.values[g.index(j1, j2)] = 2.0 * kPi * std::exp(-0.5 * r2);
        }
    ComplexField w = eng.inverse(v);
    double err = 0;
    for (int i1 = 0; i1 < g.n; ++i1)
        for (int i2 = 0; i2 < g.n; ++i2) {
            const double r2 = g.x(i1) * g.x(i1) + g.x(i2) * g.x(i2);
            err = std::max(err, std::abs(w.values[g.index(i1, i2)] - std::exp(-0.5 * r2)));
        }
    CHECK(err < 1e-8);

    CHECK_THROWS_AS(eng.inverse(u), ConfigError);
}

TEST_CASE("apply_multiplier: identity, plane-wave eigenfunction, unimodular isometry") {
    SpectralGrid g = make_grid(64, 8.0);
    FftEngine eng(g);

    ComplexField u = random_field(g, Space::Physical, 3);
    MultiplierSymbol one = make_symbol(g, "one", [](double, double) { return complexd(1.0); });
    ComplexField su = apply_multiplier(eng, u, one);
    for (std::size_t i = 0; i < u.size(); ++i)
        CHECK(std::abs(su.values[i] - u.values[i]) < 1e-13);

    // lattice mode e^{i x.xi_j} is an eigenfunction of <D> with eigenvalue <xi_j>
    const int j1 = 40, j2 = 29;
    ComplexField pw(g, Space::Physical);
    for (int i1 = 0; i1 < g.n; ++i1)
        for (int i2 = 0; i2 < g.n; ++i2) {
            const double ph = g.x(i1) * g.xi(j1) + g.x(i2) * g.xi(j2);
            pw.values[g.index(i1, i2)] = complexd(std::cos(ph), std::sin(ph));
        }
    ComplexField bu = apply_multiplier(eng, pw, bessel_symbol(g, 1.0));
    const double lam = bracket2(g.xi(j1), g.xi(j2));
    double dev = 0;
    for (std::size_t i = 0; i < pw.size(); ++i)
        dev = std::max(dev, std::abs(bu.values[i] - lam * pw.values[i]));
    CHECK(dev < 1e-10 * lam);

    // unimodular symbol preserves the discrete L2 norm
    ComplexField hu = apply_multiplier(eng, u, half_wave_symbol(g, 0.37));
    CHECK(discrete_l2(hu, g.h) == Catch::Approx(discrete_l2(u, g.h)).epsilon(1e-12));

    SpectralGrid g2 = make_grid(32, 8.0);
    MultiplierSymbol wrong = bessel_symbol(g2, 1.0);
    CHECK_THROWS_AS(apply_multiplier(eng, u, wrong), ConfigError);
}

TEST_CASE("bessel and half-wave symbol values") {
    SpectralGrid g = make_grid(16, kPi);
    MultiplierSymbol b1 = bessel_symbol(g, 1.0);
    CHECK(b1.values[g.index(8, 8)].real() == Catch::Approx(1.0));  // xi = 0
    // |xi| = sqrt(3) is not a lattice point of this grid; check the formula
    // at |xi|^2 = 1 + 1 via the (1,1) offset times scaling: use direct eval.
    MultiplierSymbol bm2 = bessel_symbol(g, -2.0);
    CHECK(bm2.values[g.index(8 + 1, 8)].real() == Catch::Approx(0.5));  // |xi|=1 -> 1/2

    // s=1 at |xi| = sqrt(3): grid with dxi=1 has (1, sqrt(2)) unavailable;
    // evaluate through make_symbol on a lattice point of squared norm 3? none.
    // Use the documented closed form instead at (1,1),|xi|^2=2: <xi> = sqrt(3).
    CHECK(b1.values[g.index(9, 9)].real() == Catch::Approx(std::sqrt(3.0)));

    MultiplierSymbol h0 = half_wave_symbol(g, 0.0);
    for (const auto& v : h0.values) CHECK(std::abs(v - complexd(1.0)) == 0.0);

    MultiplierSymbol hp = half_wave_symbol(g, kPi);
    CHECK(hp.values[g.index(8, 8)].real() == Catch::Approx(-1.0));  // e^{-i pi <0>} = -1
    CHECK(std::abs(hp.values[g.index(8, 8)].imag()) < 1e-14);

    // group law and inverse
    MultiplierSymbol ha = half_wave_symbol(g, 0.7), hb = half_wave_symbol(g, 0.9);
    MultiplierSymbol hab = half_wave_symbol(g, 1.6);
    MultiplierSymbol hneg = half_wave_symbol(g, -0.7);
    double dev = 0, devinv = 0, unimod = 0;
    for (std::size_t i = 0; i < ha.values.size(); ++i) {
        dev = std::max(dev, std::abs(ha.values[i] * hb.values[i] - hab.values[i]));
        devinv = std::max(devinv, std::abs(ha.values[i] * hneg.values[i] - complexd(1.0)));
        unimod = std::max(unimod, std::abs(std::abs(ha.values[i]) - 1.0));
    }
    CHECK(dev < 1e-13);
    CHECK(devinv < 1e-13);
    CHECK(unimod < 1e-15);
}

TEST_CASE("multiplier application commutes for diagonal operators") {
    SpectralGrid g = make_grid(64, 8.0);
    FftEngine eng(g);
    ComplexField u = random_field(g, Space::Physical, 5);
    MultiplierSymbol a = half_wave_symbol(g, 0.4);
    MultiplierSymbol b = bessel_symbol(g, 2.0);
    ComplexField ab = apply_multiplier(eng, apply_multiplier(eng, u, a), b);
    ComplexField ba = apply_multiplier(eng, apply_multiplier(eng, u, b), a);
    double dev = 0, scale = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dev = std::max(dev, std::abs(ab.values[i] - ba.values[i]));
        scale = std::max(scale, std::abs(ab.values[i]));
    }
    CHECK(dev < 1e-12 * scale);
}

TEST_CASE("Littlewood-Paley projections: support, center value, partition of unity") {
    SpectralGrid g = make_grid(64, 8.0);

    MultiplierSymbol p1 = lp_projection_symbol(g, 1.0);
    for (int j1 = 0; j1 < g.n; ++j1)
        for (int j2 = 0; j2 < g.n; ++j2) {
            const double r = std::hypot(g.xi(j1), g.xi(j2));
            const double v = p1.values[g.index(j1, j2)].real();
            CHECK(p1.values[g.index(j1, j2)].imag() == 0.0);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            if (r >= 2.0 || r <= 0.5) CHECK(v == 0.0);
        }
    // ring center |xi| = N: rho(1) - rho(2) = 1
    CHECK(p1.values[g.index(32 + 0, 32 + int(1.0 / g.dxi))].real() == Catch::Approx(1.0));

    CHECK_THROWS_AS(lp_projection_symbol(g, 0.3), ConfigError);

    // partition: rho_{<=N0} + sum_{N0<N<=Nmax} rho_N == 1 on the lattice
    const double N0 = 0.25;
    std::vector<double> dyads = lattice_dyads(g);
    std::vector<MultiplierSymbol> parts;
    parts.push_back(lp_low_symbol(g, N0));
    for (double N : dyads)
        if (N > N0) parts.push_back(lp_projection_symbol(g, N));
    double dev = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double s = 0;
        for (const auto& p : parts) s += p.values[i].real();
        dev = std::max(dev, std::abs(s - 1.0));
    }
    CHECK(dev < 1e-12);
}

TEST_CASE("Riesz kernel symbol: paper value at gamma=1, zero mode, radial symmetry") {
    SpectralGrid g = make_grid(64, 8.0);
    MultiplierSymbol k = riesz_kernel_symbol(g, 1.0);
    CHECK(k.values[g.index(32, 32)].real() == 0.0);  // declared gauge
    // |eta| = 2: F(|x|^-1) = 2pi/|eta| = pi
    const int joff = int(std::lround(2.0 / g.dxi));
    CHECK(k.values[g.index(32, 32 + joff)].real() == Catch::Approx(kPi).epsilon(1e-12));
    // radial: same value along both axes and diagonals
    CHECK(k.values[g.index(32 + joff, 32)].real() ==
          Catch::Approx(k.values[g.index(32, 32 + joff)].real()).epsilon(1e-13));

    CHECK_THROWS_AS(riesz_kernel_symbol(g, 0.0), ConfigError);
    CHECK_THROWS_AS(riesz_kernel_symbol(g, 2.0), ConfigError);

    OracleCheck r05 = riesz_pairing_oracle(0.5);
    OracleCheck r10 = riesz_pairing_oracle(1.0);
    OracleCheck r15 = riesz_pairing_oracle(1.5);
    INFO(r05.name << " err=" << r05.error);
    CHECK(r05.pass);
    INFO(r10.name << " err=" << r10.error);
    CHECK(r10.pass);
    INFO(r15.name << " err=" << r15.error);
    CHECK(r15.pass);
    // the spec's explicit constant for gamma = 1.5
    CHECK(riesz_constant(1.5) ==
          Catch::Approx(std::sqrt(2.0) * kPi * std::tgamma(0.25) / std::tgamma(0.75))
              .epsilon(1e-13));
}
