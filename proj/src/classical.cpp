#include "optibind/classical.hpp"

#include <cmath>
#include <stdexcept>

#include "optibind/green.hpp"

namespace optibind {

namespace {

constexpr std::complex<double> I{0.0, 1.0};

void check_positions(const std::vector<Vec3>& positions, const ArrayScenario& sc) {
    if (positions.size() != sc.size())
        throw std::invalid_argument("classical force: positions do not match the scenario");
    for (std::size_t a = 0; a < positions.size(); ++a)
        for (std::size_t b = a + 1; b < positions.size(); ++b)
            if ((positions[a] - positions[b]).norm() == 0.0)
                throw std::invalid_argument("classical force: overlapping particles");
}

double alpha_scalar(const ArrayScenario& sc, std::size_t j) {
    return sc.constants.eps0 * sc.chi(j) * sc.particles[j].volume();
}

// Per-particle energy-like function whose r-gradient is the force on j.
double force_potential(const ArrayScenario& sc, const std::vector<Vec3>& positions,
                       std::size_t j, const Vec3& r, bool conservative_only) {
    const double k = sc.wavenumber();
    const Vec3c EL = laser_field(r, sc.tweezers);
    double phi = alpha_scalar(sc, j) / 4.0 * EL.squaredNorm();
    for (std::size_t jp = 0; jp < sc.size(); ++jp) {
        if (jp == j) continue;
        const Vec3c ELp = laser_field(positions[jp], sc.tweezers);
        const Vec3 sep = r - positions[jp];
        const Tensor3c G = conservative_only
                               ? green_full(sep, k).real().cast<std::complex<double>>().eval()
                               : green_full(sep, k);
        phi += alpha_scalar(sc, j) * alpha_scalar(sc, jp) / (2.0 * sc.constants.eps0) *
               std::real(EL.dot(G * ELp));
    }
    return phi;
}

}  // namespace

namespace {

template <typename F>
Vec3 gradient4(const F& phi, const Vec3& r, double h) {
    Vec3 g;
    for (int a = 0; a < 3; ++a) {
        Vec3 e = Vec3::Zero();
        e[a] = 1.0;
        g[a] = (-phi(r + 2.0 * h * e) + 8.0 * phi(r + h * e) - 8.0 * phi(r - h * e) +
                phi(r - 2.0 * h * e)) /
               (12.0 * h);
    }
    return g;
}

}  // namespace

std::vector<Vec3> classical_binding_force(const std::vector<Vec3>& positions,
                                          const ArrayScenario& sc, bool conservative_only,
                                          double step) {
    sc.require_valid();
    check_positions(positions, sc);
    const double h = step > 0.0 ? step : 1e-6 / sc.wavenumber();
    std::vector<Vec3> forces(sc.size());
    for (std::size_t j = 0; j < sc.size(); ++j) {
        const auto phi = [&](const Vec3& r) {
            return force_potential(sc, positions, j, r, conservative_only);
        };
        forces[j] = gradient4(phi, positions[j], h);
    }
    return forces;
}

std::vector<Vec3> optical_gradient_force(const std::vector<Vec3>& positions,
                                         const ArrayScenario& sc, double step) {
    sc.require_valid();
    check_positions(positions, sc);
    const double h = step > 0.0 ? step : 1e-6 / sc.wavenumber();
    std::vector<Vec3> forces(sc.size());
    for (std::size_t j = 0; j < sc.size(); ++j) {
        const auto phi = [&](const Vec3& r) {
            return alpha_scalar(sc, j) / 4.0 * laser_field(r, sc.tweezers).squaredNorm();
        };
        forces[j] = gradient4(phi, positions[j], h);
    }
    return forces;
}

double conservative_potential(const std::vector<Vec3>& positions, const ArrayScenario& sc) {
    sc.require_valid();
    check_positions(positions, sc);
    const double k = sc.wavenumber();
    double V = 0.0;
    for (std::size_t j = 0; j < sc.size(); ++j) {
        const Vec3c Ej = laser_field(positions[j], sc.tweezers);
        for (std::size_t jp = 0; jp < sc.size(); ++jp) {
            if (jp == j) continue;
            const Vec3c Ejp = laser_field(positions[jp], sc.tweezers);
            const Tensor3 reG = green_full(positions[j] - positions[jp], k).real();
            V += -sc.constants.eps0 / 4.0 * sc.particles[j].volume() *
                 sc.particles[jp].volume() * sc.chi(j) * sc.chi(jp) *
                 std::real(Ejp.dot(reG.cast<std::complex<double>>() * Ej));
        }
    }
    return V;
}

namespace {

// Axial force on particle j in the frozen far-field model: the only
// displacement dependence is through the local plane-wave phases.
double farfield_axial_force(const ArrayScenario& sc, const Eigen::VectorXd& z, std::size_t j) {
    const double k = sc.wavenumber();
    const double kappa = sc.local_k();
    const Vec3c Ej = sc.tweezers[j].amplitude_vector();
    double f = 0.0;
    for (std::size_t jp = 0; jp < sc.size(); ++jp) {
        if (jp == j) continue;
        const Tensor3c Gff = far_field_green(sc.tweezers[j].focus - sc.tweezers[jp].focus, k);
        const Vec3c Ejp = sc.tweezers[jp].amplitude_vector();
        const std::complex<double> m = Ej.dot(Gff * Ejp);
        const std::complex<double> phase =
            std::exp(I * kappa * (z[static_cast<Eigen::Index>(jp)] -
                                  z[static_cast<Eigen::Index>(j)]));
        f += alpha_scalar(sc, j) * alpha_scalar(sc, jp) / (2.0 * sc.constants.eps0) *
             std::real(-I * kappa * phase * m);
    }
    return f;
}

}  // namespace

GradientCoupling coupling_from_force_gradient(const ArrayScenario& sc) {
    sc.require_valid();
    const auto N = static_cast<Eigen::Index>(sc.size());
    const double kappa = sc.local_k();

    GradientCoupling out;
    out.C = Eigen::MatrixXd::Zero(N, N);
    out.converged = true;
    double worst = 0.0, scale = 0.0;

    for (Eigen::Index j = 0; j < N; ++j) {
        for (Eigen::Index jp = 0; jp < N; ++jp) {
            if (j == jp) continue;
            // largest coupling this pair could produce; convergence floor for
            // entries where the slope itself is (near) zero
            const double pair_scale =
                alpha_scalar(sc, static_cast<std::size_t>(j)) *
                alpha_scalar(sc, static_cast<std::size_t>(jp)) / (2.0 * sc.constants.eps0) *
                kappa * kappa *
                std::abs(sc.tweezers[j].amplitude_vector().dot(
                    far_field_green(sc.tweezers[j].focus - sc.tweezers[jp].focus,
                                    sc.wavenumber()) *
                    sc.tweezers[jp].amplitude_vector()));
            const auto slope = [&](double h) {
                Eigen::VectorXd z = Eigen::VectorXd::Zero(N);
                const auto f = [&](double zv) {
                    z[jp] = zv;
                    return farfield_axial_force(sc, z, static_cast<std::size_t>(j));
                };
                return (-f(2.0 * h) + 8.0 * f(h) - 8.0 * f(-h) + f(-2.0 * h)) / (12.0 * h);
            };
            double h = 1e-2 / kappa;
            double prev = slope(h);
            double best = prev, err = std::abs(prev);
            for (int it = 0; it < 6; ++it) {
                h /= 2.0;
                const double cur = slope(h);
                best = (16.0 * cur - prev) / 15.0;
                err = std::abs(cur - prev);
                prev = cur;
                if (err <= 1e-9 * pair_scale) break;
            }
            out.C(j, jp) = best;
            worst = std::max(worst, err);
            scale = std::max(scale, pair_scale);
        }
    }
    out.rel_fd_error = scale > 0.0 ? worst / scale : 0.0;
    out.converged = out.rel_fd_error <= 1e-8;
    return out;
}

}  // namespace optibind
