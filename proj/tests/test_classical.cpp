#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "optibind/classical.hpp"
#include "optibind/binding.hpp"
#include "test_scenarios.hpp"

using namespace optibind;
using obtest::random_scenario;
using obtest::silica_pair;

namespace {

std::vector<Vec3> foci_positions(const ArrayScenario& sc) {
    std::vector<Vec3> pos;
    for (const auto& tw : sc.tweezers) pos.push_back(tw.focus);
    return pos;
}

}  // namespace

TEST_CASE("single particle at its focus feels no optical-gradient force") {
    auto sc = silica_pair();
    sc.particles.resize(1);
    sc.tweezers.resize(1);
    const auto F = classical_binding_force(foci_positions(sc), sc);
    // gradient scale of the trap term
    const double scale = sc.constants.eps0 * sc.chi(0) * sc.particles[0].volume() / 4.0 *
                         sc.tweezers[0].amplitude * sc.tweezers[0].amplitude * sc.wavenumber();
    CHECK(F[0].norm() <= 1e-8 * scale);
}

TEST_CASE("symmetric reciprocal pair: axial binding forces are opposite") {
    const auto sc = silica_pair(6e-6, 0.5, 0.5);
    const auto pos = foci_positions(sc);
    const auto F = classical_binding_force(pos, sc);
    const auto grad = optical_gradient_force(pos, sc);
    const double fz1 = F[0][2] - grad[0][2];
    const double fz2 = F[1][2] - grad[1][2];
    CHECK(fz1 == doctest::Approx(-fz2).epsilon(1e-8));
}

TEST_CASE("one-way pair: cross force slopes follow the coupling matrix") {
    const auto pair = unidirectional_pair_config(silica_pair());
    const auto C = binding_matrices(pair).C;
    const double kd = pair.wavenumber() * pair.distance(0, 1);
    const double h = 1e-3 / pair.local_k();
    auto pos = foci_positions(pair);

    const auto slope = [&](std::size_t jf, std::size_t jm) {
        auto p = pos;
        p[jm][2] = h;
        const double up = classical_binding_force(p, pair)[jf][2];
        p[jm][2] = -h;
        const double dn = classical_binding_force(p, pair)[jf][2];
        return (up - dn) / (2.0 * h);
    };
    // full-field slopes carry O(1/kd) corrections to the far-field couplings
    const double c12 = slope(0, 1);
    const double c21 = slope(1, 0);
    CHECK(c12 == doctest::Approx(C(0, 1)).epsilon(5.0 / kd));
    CHECK(std::abs(c21) <= 5.0 / kd * std::abs(C(0, 1)));
}

TEST_CASE("conservative potential vanishes as the contrast goes away") {
    auto weak = silica_pair();
    for (auto& p : weak.particles) p.permittivity = 1.0 + 1e-8;
    const auto ref = silica_pair();
    const auto pos = foci_positions(ref);
    const double v_weak = std::abs(conservative_potential(pos, weak));
    const double v_ref = std::abs(conservative_potential(pos, ref));
    CHECK(v_weak <= 1e-15 * v_ref);
}

TEST_CASE("conservative potential is real-valued and label-symmetric") {
    const auto sc = silica_pair(6.3e-6, 1.2, 0.4, 1.0, 2.0);
    auto swapped = sc;
    std::swap(swapped.particles[0], swapped.particles[1]);
    std::swap(swapped.tweezers[0], swapped.tweezers[1]);
    auto pos = foci_positions(sc);
    std::vector<Vec3> pos_swapped{pos[1], pos[0]};
    CHECK(conservative_potential(pos, sc) ==
          doctest::Approx(conservative_potential(pos_swapped, swapped)).epsilon(1e-12));
}

TEST_CASE("far-field potential oscillates as cos(kd)/d") {
    // polarization transverse to the axis, equal phases
    const double k = 2.0 * M_PI / 1.064e-6;
    const double d0 = 40.0 * 2.0 * M_PI / k;  // k d = 80 pi
    std::vector<double> vd;
    for (int m = 0; m < 3; ++m) {
        const double d = d0 + m * 2.0 * M_PI / k;
        const auto sc = silica_pair(d, 0.0, 0.0);
        vd.push_back(conservative_potential(foci_positions(sc), sc) * d);
    }
    CHECK(vd[1] == doctest::Approx(vd[0]).epsilon(2e-2));
    CHECK(vd[2] == doctest::Approx(vd[0]).epsilon(2e-2));

    const double d_half = d0 + M_PI / k;  // half a period: cosine flips sign
    const auto sc = silica_pair(d_half, 0.0, 0.0);
    const double flipped = conservative_potential(foci_positions(sc), sc) * d_half;
    CHECK(flipped == doctest::Approx(-vd[0]).epsilon(5e-2));
}

TEST_CASE("conservative force is the downhill gradient of the potential") {
    const auto sc = silica_pair(6e-6, 0.8, 0.1, 1.3, 0.2);
    auto pos = foci_positions(sc);
    pos[0] += Vec3(0.05e-6, -0.03e-6, 0.04e-6);
    // a larger step than the force default: the binding part is ~40x smaller
    // than the trap force, so the subtraction needs value-roundoff headroom
    const double step = 1e-3 / sc.wavenumber();
    const auto F = classical_binding_force(pos, sc, true, step);
    const auto grad = optical_gradient_force(pos, sc, step);
    const Vec3 f_binding = F[0] - grad[0];

    const double h0 = 1e-3 / sc.wavenumber();
    Vec3 fd;
    for (int a = 0; a < 3; ++a) {
        const auto dv = [&](double h) {
            auto p = pos;
            p[0][a] += h;
            const double up = conservative_potential(p, sc);
            p[0][a] = pos[0][a] - h;
            const double dn = conservative_potential(p, sc);
            return (up - dn) / (2.0 * h);
        };
        const double c1 = dv(h0), c2 = dv(h0 / 2.0);
        fd[a] = -(4.0 * c2 - c1) / 3.0;
    }
    CHECK((f_binding - fd).norm() <= 1e-8 * f_binding.norm());
}

TEST_CASE("gradient-extracted couplings match the linearized matrix") {
    std::mt19937_64 rng(404);
    for (int trial = 0; trial < 4; ++trial) {
        const auto sc = random_scenario(rng, trial % 2 == 0 ? 2 : 3);
        const auto C = coupling_matrix(sc);
        const auto grad = coupling_from_force_gradient(sc);
        CHECK(grad.converged);
        const double scale = C.cwiseAbs().maxCoeff();
        for (Eigen::Index a = 0; a < C.rows(); ++a)
            for (Eigen::Index b = 0; b < C.cols(); ++b) {
                if (a == b) continue;
                CHECK(std::abs(grad.C(a, b) - C(a, b)) <=
                      1e-6 * std::max(std::abs(C(a, b)), 1e-3 * scale));
            }
    }
}

TEST_CASE("gradient couplings reproduce reciprocity and one-way structure") {
    const auto rec = silica_pair(6e-6, 0.9, 0.9);
    const auto g1 = coupling_from_force_gradient(rec);
    CHECK(g1.C(0, 1) == doctest::Approx(g1.C(1, 0)).epsilon(1e-8));

    const auto pair = unidirectional_pair_config(silica_pair());
    const auto g2 = coupling_from_force_gradient(pair);
    CHECK(std::abs(g2.C(1, 0)) <= 1e-6 * std::abs(g2.C(0, 1)));
}

TEST_CASE("overlapping particles are rejected") {
    const auto sc = silica_pair();
    std::vector<Vec3> pos{Vec3::Zero(), Vec3::Zero()};
    CHECK_THROWS_AS(classical_binding_force(pos, sc), std::invalid_argument);
    CHECK_THROWS_AS(conservative_potential(pos, sc), std::invalid_argument);
}
