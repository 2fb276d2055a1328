#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "optibind/response.hpp"
#include "test_scenarios.hpp"

using namespace optibind;

TEST_CASE("single-particle susceptibility is one on resonance") {
    const auto chain = ChainSpec::directional(1);
    const auto chi = susceptibility_matrix(chain, chain.omega0);
    CHECK(std::abs(chi(0, 0) - 1.0) < 1e-12);
}

TEST_CASE("zero coupling gives independent Lorentzians") {
    auto chain = ChainSpec::directional(4);
    chain.g = 0.0;
    const double w = chain.omega0 + 3.7 * chain.gamma;
    const auto chi = susceptibility_matrix(chain, w);
    const std::complex<double> lorentz =
        1.0 / (std::complex<double>(0.0, 1.0) / (chain.omega0 * chain.gamma) *
               (w * w - chain.omega0 * chain.omega0 -
                std::complex<double>(0.0, chain.gamma * w)));
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            if (a == b)
                CHECK(std::abs(chi(a, b) - lorentz) < 1e-12 * std::abs(lorentz));
            else
                CHECK(std::abs(chi(a, b)) < 1e-14 * std::abs(lorentz));
        }
    }
}

TEST_CASE("inverse times susceptibility is the identity across the grid") {
    const auto chain = ChainSpec::directional(6);
    const Eigen::MatrixXd Cm = chain_coupling_over_mass(chain);
    for (double w : {chain.omega0 - 15.0 * chain.gamma, chain.omega0, chain.omega0 + 40.0 * chain.gamma}) {
        Eigen::MatrixXcd inv = (-Cm).cast<std::complex<double>>();
        inv.diagonal().array() +=
            w * w - chain.omega0 * chain.omega0 - std::complex<double>(0.0, chain.gamma * w);
        inv *= std::complex<double>(0.0, 1.0) / (chain.omega0 * chain.gamma);
        const auto chi = susceptibility_matrix(chain, w);
        CHECK((inv * chi - Eigen::MatrixXcd::Identity(6, 6)).norm() <= 1e-10);
    }
}

TEST_CASE("directional chain amplifies forward and suppresses backward") {
    const auto res = amplification_sweep(ChainSpec::directional(10));
    CHECK(res.peak_forward() > 1.0);
    CHECK(res.peak_backward() < 1.0);
}

TEST_CASE("forward gain grows with chain size, backward stays suppressed") {
    double last = 1.0;
    for (int N : {10, 20, 40}) {
        const auto res = amplification_sweep(ChainSpec::directional(N));
        CHECK(res.peak_forward() > last);
        CHECK(res.peak_backward() < 1.0);
        last = res.peak_forward();
    }
}

TEST_CASE("far off resonance the transmission dies out") {
    const auto chain = ChainSpec::directional(10);
    const auto grid = default_grid(chain);
    const auto res = amplification_sweep(chain, grid);
    CHECK(res.forward.front() < 1e-2 * res.peak_forward());
    CHECK(res.forward.back() < 1e-2 * res.peak_forward());
}

TEST_CASE("reciprocal spacing and phasing restore symmetric transmission") {
    auto chain = ChainSpec::directional(8);
    chain.phi_next = 0.0;
    chain.kd_next = 2.0 * M_PI * 5.0;
    const Eigen::MatrixXd Cm = chain_coupling_over_mass(chain);
    CHECK((Cm - Cm.transpose()).norm() <= 1e-12 * Cm.norm());
    for (double w : {chain.omega0 - 5.0 * chain.gamma, chain.omega0 + 2.0 * chain.gamma}) {
        const auto chi = susceptibility_matrix(chain, w);
        CHECK(std::abs(chi(7, 0) - chi(0, 7)) <= 1e-12 * std::abs(chi(7, 0)));
    }
}

TEST_CASE("identical dimensionless chains give identical curves") {
    const auto a = ChainSpec::directional(10, 20.0, 1.0, 1.0);
    const auto b = ChainSpec::directional(10, 20.0, 1.0, 3.7e4);
    const auto grid_a = default_grid(a, 301);
    const auto grid_b = default_grid(b, 301);
    const auto res_a = amplification_sweep(a, grid_a);
    const auto res_b = amplification_sweep(b, grid_b);
    for (std::size_t i = 0; i < grid_a.size(); ++i) {
        CHECK(res_a.forward[i] == doctest::Approx(res_b.forward[i]).epsilon(1e-9));
        CHECK(res_a.backward[i] == doctest::Approx(res_b.backward[i]).epsilon(1e-9));
    }
}

TEST_CASE("chain diffusion carries the commutator identity") {
    const auto chain = ChainSpec::directional(6);
    const Eigen::MatrixXd C = chain.mass * chain_coupling_over_mass(chain);
    const Eigen::MatrixXcd D = chain_diffusion_scaled(chain) *
                               (chain.mass * chain.omega0 * chain.g);  // units hbar = 1
    CHECK((D - D.adjoint()).norm() <= 1e-14 * D.norm());
    for (int j = 0; j < 6; ++j)
        for (int jp = 0; jp < 6; ++jp)
            CHECK(C(j, jp) - C(jp, j) ==
                  doctest::Approx(4.0 * D(j, jp).imag()).epsilon(1e-10));
}

TEST_CASE("snr ratio degrades monotonically with chain size") {
    const auto base = ChainSpec::directional(10);
    const auto pts = snr_analysis(base, {1, 5, 10, 20});
    REQUIRE(pts.size() == 4);
    CHECK(pts[0].normalized == doctest::Approx(1.0));
    for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i].normalized < pts[i - 1].normalized);
}

TEST_CASE("zero recoil noise flags a degenerate snr") {
    const auto pts = snr_analysis(ChainSpec::directional(4), {4}, 1.0, 0.0, 0.0);
    CHECK(std::isinf(pts[0].ratio));
}

TEST_CASE("physical chain and abstract chain agree after the round trip") {
    const double wavelength = 1.064e-6;
    const double k = 2.0 * M_PI / wavelength;
    const double d_next = (2.0 * M_PI * 5.0 + M_PI / 4.0) / k;
    ArrayScenario sc;
    sc.gas.gamma = 2e4;
    const auto base = obtest::silica_pair();
    for (int j = 0; j < 5; ++j) {
        sc.particles.push_back(base.particles[0]);
        TweezerSpec tw = base.tweezers[0];
        tw.focus = Vec3(j * d_next, 0.0, 0.0);
        tw.phase = j * M_PI / 4.0;
        tw.polarization_angle = M_PI / 2.0;
        sc.tweezers.push_back(tw);
    }
    const auto chain = chain_from_scenario(sc);
    CHECK(chain.N == 5);
    CHECK(chain.n == 5);
    CHECK(chain.phi_next == doctest::Approx(M_PI / 4.0));
    const Eigen::MatrixXd C_direct = coupling_matrix(sc);
    const Eigen::MatrixXd C_chain = chain.mass * chain_coupling_over_mass(chain);
    CHECK((C_direct - C_chain).cwiseAbs().maxCoeff() <= 1e-10 * C_direct.cwiseAbs().maxCoeff());
}

TEST_CASE("dispersion series: absolute sums grow like the harmonic series") {
    const double w0 = 20.0, g = 1.0;
    const auto sums = bulk_dispersion_partial_sums(M_PI / 3.0, w0, g, {1000, 2000});
    const double growth = sums.absolute[1] - sums.absolute[0];
    CHECK(growth == doctest::Approx(3.0 * g * w0 * std::log(2.0)).epsilon(1e-3));
    CHECK_FALSE(sums.natural_diverges);
}

TEST_CASE("dispersion series: natural order is Cauchy away from the bad momenta") {
    const auto sums = bulk_dispersion_partial_sums(M_PI / 3.0, 20.0, 1.0, {100000, 200000});
    const double step = std::abs(sums.natural[1] - sums.natural[0]);
    CHECK(step < 1e-3 * std::abs(sums.natural[0]));
}

TEST_CASE("dispersion series: divergent momenta are flagged") {
    CHECK(bulk_dispersion_partial_sums(0.0, 20.0, 1.0, {10}).natural_diverges);
    CHECK(bulk_dispersion_partial_sums(M_PI / 2.0, 20.0, 1.0, {10}).natural_diverges);
    CHECK(bulk_dispersion_partial_sums(2.0 * M_PI, 20.0, 1.0, {10}).natural_diverges);
    CHECK_FALSE(bulk_dispersion_partial_sums(M_PI / 3.0, 20.0, 1.0, {10}).natural_diverges);
}

TEST_CASE("dispersion series: reordering moves the limit") {
    // at kappa = pi the series collapses to (3/2) sum (-1)^j / j, whose
    // natural sum is -(3/2) ln 2 while the one-odd-two-evens reordering
    // converges to half of that
    const double w0 = 20.0, g = 1.0;
    const double scale = 2.0 * g * w0;
    const auto sums = bulk_dispersion_partial_sums(M_PI, w0, g, {300000});
    CHECK(std::abs(sums.natural[0].imag()) < 1e-9 * scale);
    CHECK(sums.natural[0].real() ==
          doctest::Approx(-scale * 1.5 * std::log(2.0)).epsilon(1e-4));
    CHECK(sums.reordered[0].real() ==
          doctest::Approx(-scale * 0.75 * std::log(2.0)).epsilon(1e-4));
}

TEST_CASE("grid defaults widen with chain size and stay ordered") {
    const auto chain = ChainSpec::directional(40);
    const auto grid = default_grid(chain);
    CHECK(grid.size() == 2001);
    CHECK(grid.front() == doctest::Approx(chain.omega0 - 400.0 * chain.gamma));
    CHECK(grid.back() == doctest::Approx(chain.omega0 + 400.0 * chain.gamma));
    for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
}

TEST_CASE("invalid chains and grids are rejected") {
    ChainSpec bad;
    bad.N = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    const auto chain = ChainSpec::directional(3);
    CHECK_THROWS_AS(amplification_sweep(chain, {1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(bulk_dispersion_partial_sums(1.0, 20.0, 1.0, {}), std::invalid_argument);
}
