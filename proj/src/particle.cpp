#include "optibind/particle.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <stdexcept>

namespace optibind {

bool ParticleSpec::is_sphere(double rel_tol) const {
    const double l0 = diameters[0];
    return std::abs(diameters[1] - l0) <= rel_tol * l0 &&
           std::abs(diameters[2] - l0) <= rel_tol * l0;
}

ParticleSpec ParticleSpec::sphere(double radius, double permittivity, double density) {
    ParticleSpec p;
    p.diameters = Vec3::Constant(2.0 * radius);
    p.permittivity = permittivity;
    p.mass = density * p.volume();
    p.validate();
    return p;
}

ParticleSpec ParticleSpec::ellipsoid(const Vec3& diameters, double permittivity, double density) {
    ParticleSpec p;
    p.diameters = diameters;
    p.permittivity = permittivity;
    p.mass = density * p.volume();
    p.validate();
    return p;
}

void ParticleSpec::validate() const {
    if (!(diameters.minCoeff() > 0.0))
        throw std::invalid_argument("particle: axis diameters must be positive");
    if (!(permittivity > 1.0))
        throw std::invalid_argument("particle: relative permittivity must exceed 1");
    if (!(mass > 0.0)) throw std::invalid_argument("particle: mass must be positive");
}

Eigen::Vector3d depolarization_eigenvalues(const Vec3& diameters) {
    if (!(diameters.minCoeff() > 0.0))
        throw std::invalid_argument("depolarization: axis diameters must be positive");
    // Work with axes scaled by the largest one; the integral is scale invariant.
    const Vec3 l = diameters / diameters.maxCoeff();
    Eigen::Vector3d N;
    for (int i = 0; i < 3; ++i) {
        const double li = l[i], lj = l[(i + 1) % 3], lk = l[(i + 2) % 3];
        // Substituting s = li^2 tan^2(theta) maps [0, inf) onto [0, pi/2) and
        // removes the slowly decaying tail.
        const auto integrand = [&](double theta) {
            const double t = std::tan(theta);
            const double s = li * li * t * t;
            return std::sin(theta) / std::sqrt((s + lj * lj) * (s + lk * lk));
        };
        const double integral = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
            integrand, 0.0, M_PI / 2.0, 15, 1e-14);
        // N_i = (l1 l2 l3 / 2) Int ds (...)  ->  (l1 l2 l3 / li) Int sin(theta) (...) d theta
        N[i] = l.prod() / li * integral;
    }
    return N;
}

Tensor3 depolarization_tensor(const Vec3& diameters) {
    return depolarization_eigenvalues(diameters).asDiagonal();
}

Tensor3 susceptibility(double permittivity, const Tensor3& depolarization) {
    if (!(permittivity > 1.0))
        throw std::invalid_argument("susceptibility: permittivity must exceed 1");
    Eigen::SelfAdjointEigenSolver<Tensor3> es(depolarization);
    const Eigen::Vector3d N = es.eigenvalues();
    Eigen::Vector3d chi;
    for (int i = 0; i < 3; ++i) chi[i] = (permittivity - 1.0) / (1.0 + N[i] * (permittivity - 1.0));
    return es.eigenvectors() * chi.asDiagonal() * es.eigenvectors().transpose();
}

double sphere_susceptibility(double permittivity) {
    return 3.0 * (permittivity - 1.0) / (permittivity + 2.0);
}

namespace {

// Radical-inverse (van der Corput) sequence in base b.
double radical_inverse(std::size_t n, unsigned base) {
    double inv = 1.0 / base, value = 0.0, f = inv;
    while (n > 0) {
        value += f * static_cast<double>(n % base);
        n /= base;
        f *= inv;
    }
    return value;
}

// Uniform point in the ellipsoid with semi-axes `semi`, from three uniforms.
Vec3 ellipsoid_point(double u1, double u2, double u3, const Vec3& semi) {
    const double rho = std::cbrt(u1);
    const double ct = 2.0 * u2 - 1.0;
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    const double phi = 2.0 * M_PI * u3;
    return {semi[0] * rho * st * std::cos(phi), semi[1] * rho * st * std::sin(phi),
            semi[2] * rho * ct};
}

}  // namespace

namespace {

// Angular part of the pair integral: Int d^2n (|An|^2 1 + (An)(An)^T)/|An|^3
// over the unit sphere, by Gauss-Legendre x trapezoid product quadrature.
Tensor3 angular_moment(const Vec3& semi, int nt) {
    const int nphi = 2 * nt;
    Tensor3 acc = Tensor3::Zero();
    for (int a = 0; a < nt; ++a) {
        // Gauss-Legendre nodes via Newton on the Legendre recurrence
        double t = std::cos(M_PI * (a + 0.75) / (nt + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int m = 2; m <= nt; ++m) {
                const double p2 = ((2.0 * m - 1.0) * t * p1 - (m - 1.0) * p0) / m;
                p0 = p1;
                p1 = p2;
            }
            dp = nt * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - t * t) * dp * dp);
        const double st = std::sqrt(std::max(0.0, 1.0 - t * t));
        for (int b = 0; b < nphi; ++b) {
            const double phi = 2.0 * M_PI * b / nphi;
            const Vec3 an(semi[0] * st * std::cos(phi), semi[1] * st * std::sin(phi),
                          semi[2] * t);
            const double n2 = an.squaredNorm();
            const double n1 = std::sqrt(n2);
            acc += w * (n2 * Tensor3::Identity() + an * an.transpose()) / (n2 * n1);
        }
    }
    return acc * (2.0 * M_PI / nphi);
}

}  // namespace

RadiationCorrection radiation_correction(const ParticleSpec& particle, double k) {
    particle.validate();
    if (!(k > 0.0)) throw std::invalid_argument("radiation_correction: wavenumber must be positive");

    const Tensor3 chi = susceptibility(particle.permittivity,
                                       depolarization_tensor(particle.diameters));
    const Vec3 semi = particle.diameters / 2.0;
    // s-integral in scaled coordinates s = A t, t = tau nhat: homogeneity of
    // degree -1 pulls 1/tau out, the unit-ball overlap volume
    // (4 pi / 3)(1 - 3 tau/4 + tau^3/16) integrates against tau to 8 pi/15.
    const double det_a = semi.prod();
    const Tensor3 ang = angular_moment(semi, 64);
    const Tensor3 ang_lo = angular_moment(semi, 48);
    const Tensor3 pair_integral = 8.0 * M_PI / 15.0 * det_a * det_a * ang;

    const double V = particle.volume();
    RadiationCorrection out;
    out.tensor = k * k / (8.0 * M_PI * V) * (chi * pair_integral * chi);
    out.rel_error = (ang - ang_lo).norm() / ang.norm();
    out.samples = 0;
    out.size_warning = k * particle.max_diameter() > 0.5;
    out.converged = out.rel_error <= 1e-4;
    return out;
}

RadiationCorrection radiation_correction_sampled(const ParticleSpec& particle, double k,
                                                 std::size_t samples, const Vec3& center) {
    particle.validate();
    if (!(k > 0.0)) throw std::invalid_argument("radiation_correction: wavenumber must be positive");
    if (samples < 1000) throw std::invalid_argument("radiation_correction: too few samples");

    const Tensor3 chi = susceptibility(particle.permittivity,
                                       depolarization_tensor(particle.diameters));
    const Vec3 semi = particle.diameters / 2.0;
    static const unsigned bases[6] = {2, 3, 5, 7, 11, 13};

    Tensor3 acc[2] = {Tensor3::Zero(), Tensor3::Zero()};
    std::size_t cnt[2] = {0, 0};
    for (std::size_t m = 0; m < samples; ++m) {
        double u[6];
        for (int d = 0; d < 6; ++d) u[d] = radical_inverse(m + 1, bases[d]);
        const Vec3 r = center + ellipsoid_point(u[0], u[1], u[2], semi);
        const Vec3 rp = center + ellipsoid_point(u[3], u[4], u[5], semi);
        const Vec3 s = r - rp;
        const double sn = s.norm();
        if (sn == 0.0) continue;
        const Tensor3 m3 = (sn * sn * Tensor3::Identity() + s * s.transpose()) / (sn * sn * sn);
        const int half = m < samples / 2 ? 0 : 1;
        acc[half] += m3;
        ++cnt[half];
    }
    const Tensor3 mean_a = acc[0] / static_cast<double>(cnt[0]);
    const Tensor3 mean_b = acc[1] / static_cast<double>(cnt[1]);
    const Tensor3 mean = (acc[0] + acc[1]) / static_cast<double>(cnt[0] + cnt[1]);

    const double V = particle.volume();
    const double pref = k * k * V / (8.0 * M_PI);
    RadiationCorrection out;
    out.tensor = pref * (chi * mean * chi);
    out.rel_error = 0.5 * (mean_a - mean_b).norm() / mean.norm();
    out.samples = samples;
    out.size_warning = k * particle.max_diameter() > 0.5;
    out.converged = out.rel_error <= 1e-4;
    return out;
}

double sphere_radiation_correction(double k, double radius, double chi) {
    return 4.0 / 15.0 * (k * radius) * (k * radius) * chi * chi;
}

Tensor3 polarizability(const ParticleSpec& particle, const Tensor3& chi,
                       const PhysicalConstants& pc) {
    return pc.eps0 * particle.volume() * chi;
}

}  // namespace optibind
