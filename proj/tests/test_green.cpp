#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "optibind/green.hpp"

using namespace optibind;

namespace {
const double k = 2.0 * M_PI / 1.064e-6;

Vec3 random_dir(std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    Vec3 v{n(rng), n(rng), n(rng)};
    return v.normalized();
}
}  // namespace

TEST_CASE("axial displacement gives a diagonal tensor") {
    const Vec3 r(0.0, 0.0, 3e-6);
    const Tensor3c G = green_full(r, k);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            if (a != b) CHECK(std::abs(G(a, b)) == 0.0);
    CHECK(G(0, 0) == G(1, 1));
}

TEST_CASE("far-field term dominates at large k r") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 10; ++i) {
        const Vec3 r = (1000.0 / k) * random_dir(rng);
        const Tensor3c full = green_full(r, k);
        const Tensor3c far = far_field_green(r, k);
        CHECK((full - far).norm() / far.norm() < 2.0 / 1000.0);
    }
}

TEST_CASE("helmholtz residual is small at the default step") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> mag(0.5, 50.0);
    for (int i = 0; i < 10; ++i) {
        const Vec3 r = (mag(rng) / k) * random_dir(rng);
        CHECK(helmholtz_residual(r, k, default_helmholtz_step(k)) < 1e-6);
    }
}

TEST_CASE("helmholtz residual drops at least quadratically with the step") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> mag(0.5, 50.0);
    for (int i = 0; i < 5; ++i) {
        const double u = mag(rng);
        const Vec3 r = (u / k) * random_dir(rng);
        const double h0 = std::min(0.25, 0.02 * u) / k;
        const double r0 = helmholtz_residual(r, k, h0);
        const double r1 = helmholtz_residual(r, k, h0 / 2.0);
        const double order = std::log2(r0 / r1);
        CHECK(order >= 2.0);
    }
}

TEST_CASE("static tensor: traceless, axial closed form, k->0 limit") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 10; ++i) {
        const Vec3 r = 5e-6 * random_dir(rng);
        CHECK(std::abs(green_static(r).trace()) < 1e-12 * green_static(r).norm());
    }
    const double d = 2.5e-6;
    const Tensor3 G0 = green_static(Vec3(0.0, 0.0, d));
    const double scale = 1.0 / (4.0 * M_PI * d * d * d);
    CHECK(G0(0, 0) == doctest::Approx(-scale).epsilon(1e-14));
    CHECK(G0(1, 1) == doctest::Approx(-scale).epsilon(1e-14));
    CHECK(G0(2, 2) == doctest::Approx(2.0 * scale).epsilon(1e-14));

    // k -> 0 limit of the full tensor
    const Vec3 r(1.1e-6, -0.4e-6, 2.0e-6);
    const double k_small = 1e-5 / r.norm();
    const Tensor3c full = green_full(r, k_small);
    const Tensor3 stat = green_static(r);
    CHECK((full - stat.cast<std::complex<double>>()).norm() / stat.norm() < 1e-9);
}

TEST_CASE("transverse tensor: origin value, branch continuity, imaginary part") {
    const Tensor3c at0 = green_transverse(Vec3::Zero(), k);
    const std::complex<double> want(0.0, k * k * k / (6.0 * M_PI));
    CHECK((at0 - want * Tensor3c::Identity()).norm() < 1e-14 * at0.norm());

    // both branches agree at the crossover radius
    std::mt19937_64 rng(19);
    for (int i = 0; i < 5; ++i) {
        const Vec3 dir = random_dir(rng);
        const Vec3 r = (kTransverseCrossover / k) * dir;
        const Tensor3c expanded = green_transverse(r * (1.0 - 1e-12), k);
        const Tensor3c subtracted = green_transverse(r * (1.0 + 1e-12), k);
        CHECK((expanded - subtracted).norm() / subtracted.norm() < 1e-6);
    }

    // Im G_t(0) matches the small-r limit of Im G
    const Vec3 r = (1e-4 / k) * Vec3(1.0, 0.0, 0.0);
    const Tensor3c full = green_full(r, k);
    CHECK((full.imag() - at0.imag()).norm() / at0.imag().norm() < 1e-6);
}

TEST_CASE("far-field tensor: transversality and eigenvalues") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 10; ++i) {
        const Vec3 r = 4e-6 * random_dir(rng);
        const Tensor3c far = far_field_green(r, k);
        CHECK((far * r.cast<std::complex<double>>()).norm() <= 1e-15 * far.norm() * r.norm());

        Eigen::ComplexEigenSolver<Tensor3c> es(far);
        const double expect = k * k / (4.0 * M_PI * r.norm());
        int nonzero = 0;
        for (int a = 0; a < 3; ++a) {
            const double m = std::abs(es.eigenvalues()[a]);
            if (m > 1e-10 * expect) {
                ++nonzero;
                CHECK(m == doctest::Approx(expect).epsilon(1e-12));
            }
        }
        CHECK(nonzero == 2);
    }

    const Vec3 r = (100.0 / k) * random_dir(rng);
    const Tensor3c far = far_field_green(r, k);
    const Tensor3c full = green_full(r, k);
    CHECK((full - far).norm() / far.norm() <= 2.0 / 100.0);
}

TEST_CASE("symmetry and parity") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> mag(0.3, 40.0);
    for (int i = 0; i < 20; ++i) {
        const Vec3 r = (mag(rng) / k) * random_dir(rng);
        const Tensor3c G = green_full(r, k);
        CHECK((G - G.transpose()).norm() <= 1e-15 * G.norm());
        CHECK((G - green_full(-r, k)).norm() <= 1e-15 * G.norm());
    }
}

TEST_CASE("full = static + transverse away from the origin") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> mag(0.01, 30.0);
    for (int i = 0; i < 20; ++i) {
        const Vec3 r = (mag(rng) / k) * random_dir(rng);
        const Tensor3c sum =
            green_static(r).cast<std::complex<double>>() + green_transverse(r, k);
        const Tensor3c full = green_full(r, k);
        CHECK((sum - full).norm() <= 1e-12 * full.norm());
    }
}

TEST_CASE("singular arguments are rejected") {
    CHECK_THROWS_AS(green_full(Vec3::Zero(), k), std::domain_error);
    CHECK_THROWS_AS(green_static(Vec3::Zero()), std::domain_error);
    CHECK_THROWS_AS(far_field_green(Vec3::Zero(), k), std::domain_error);
    CHECK_THROWS_AS(green_full(Vec3::UnitX(), 0.0), std::domain_error);
    CHECK_NOTHROW(green_transverse(Vec3::Zero(), k));
}
