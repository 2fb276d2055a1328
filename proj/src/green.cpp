#include "optibind/green.hpp"

#include <cmath>
#include <stdexcept>

namespace optibind {

namespace {

constexpr std::complex<double> I{0.0, 1.0};

// G in units of k^3, as a function of the scaled displacement u = k r.
Tensor3c green_full_scaled(const Vec3& u) {
    const double un = u.norm();
    const Vec3 n = u / un;
    const Tensor3 nn = n * n.transpose();
    const std::complex<double> phase = std::exp(I * un);
    const Tensor3 near = 3.0 * nn - Tensor3::Identity();
    const Tensor3 far = Tensor3::Identity() - nn;
    Tensor3c g = near * ((1.0 - I * un) / (un * un * un)) + far * (1.0 / un);
    return (phase / (4.0 * M_PI)) * g;
}

Tensor3 green_static_scaled(const Vec3& u) {
    const double un = u.norm();
    const Vec3 n = u / un;
    return (3.0 * n * n.transpose() - Tensor3::Identity()) / (4.0 * M_PI * un * un * un);
}

// Small-argument expansion of (G - G0)/k^3 up to third order in k.
Tensor3c green_transverse_expansion_scaled(const Vec3& u) {
    Tensor3c g = I * (1.0 / (6.0 * M_PI)) * Tensor3c::Identity();
    const double un = u.norm();
    if (un > 0.0) {
        const Vec3 n = u / un;
        g += ((Tensor3::Identity() + n * n.transpose()) / (8.0 * M_PI * un))
                 .cast<std::complex<double>>();
    }
    return g;
}

void require_offorigin(const Vec3& r, const char* what) {
    if (r.norm() == 0.0)
        throw std::domain_error(std::string(what) + ": singular at r = 0");
}

void require_wavenumber(double k) {
    if (!(k > 0.0)) throw std::domain_error("green tensor: wavenumber must be positive");
}

}  // namespace

Tensor3c green_full(const Vec3& r, double k) {
    require_offorigin(r, "green_full");
    require_wavenumber(k);
    return k * k * k * green_full_scaled(k * r);
}

Tensor3 green_static(const Vec3& r) {
    require_offorigin(r, "green_static");
    const double rn = r.norm();
    const Vec3 n = r / rn;
    return (3.0 * n * n.transpose() - Tensor3::Identity()) / (4.0 * M_PI * rn * rn * rn);
}

Tensor3c green_transverse(const Vec3& r, double k) {
    require_wavenumber(k);
    const Vec3 u = k * r;
    if (u.norm() < kTransverseCrossover)
        return k * k * k * green_transverse_expansion_scaled(u);
    return k * k * k *
           (green_full_scaled(u) - green_static_scaled(u).cast<std::complex<double>>());
}

Tensor3c far_field_green(const Vec3& r, double k) {
    require_offorigin(r, "far_field_green");
    require_wavenumber(k);
    const double rn = r.norm();
    const Vec3 n = r / rn;
    const Tensor3 proj = Tensor3::Identity() - n * n.transpose();
    return std::exp(I * k * rn) * k * k / (4.0 * M_PI * rn) * proj.cast<std::complex<double>>();
}

namespace {

// 4th-order central first and second difference weights.
template <typename F>
Tensor3c d1(const F& f, const Vec3& u, int axis, double h) {
    Vec3 e = Vec3::Zero();
    e[axis] = 1.0;
    return (-f(u + 2.0 * h * e) + 8.0 * f(u + h * e) - 8.0 * f(u - h * e) + f(u - 2.0 * h * e)) /
           (12.0 * h);
}

template <typename F>
Tensor3c d2(const F& f, const Vec3& u, int axis, double h) {
    Vec3 e = Vec3::Zero();
    e[axis] = 1.0;
    return (-f(u + 2.0 * h * e) + 16.0 * f(u + h * e) - 30.0 * f(u) + 16.0 * f(u - h * e) -
            f(u - 2.0 * h * e)) /
           (12.0 * h * h);
}

}  // namespace

double helmholtz_residual(const Vec3& r, double k, double step) {
    require_offorigin(r, "helmholtz_residual");
    require_wavenumber(k);
    const Vec3 u0 = k * r;
    const double h = k * step;
    const auto g = [](const Vec3& u) { return green_full_scaled(u); };

    // curl curl G = grad(div G) - laplace G, column by column.
    Tensor3c laplacian = Tensor3c::Zero();
    for (int a = 0; a < 3; ++a) laplacian += d2(g, u0, a, h);

    // div G per column: (div G)_l = d_i G_il; gradient of that needs mixed
    // partials d_a d_i G_il, done with nested first-difference stencils.
    Tensor3c grad_div = Tensor3c::Zero();
    for (int a = 0; a < 3; ++a) {
        const auto div_row = [&](const Vec3& u) -> Tensor3c {
            Tensor3c m = Tensor3c::Zero();
            for (int i = 0; i < 3; ++i) m.row(0) += d1(g, u, i, h).row(i);
            return m;
        };
        grad_div.row(a) = d1(div_row, u0, a, h).row(0);
    }

    const Tensor3c gval = g(u0);
    const Tensor3c residual = grad_div - laplacian - gval;
    return residual.norm() / gval.norm();
}

}  // namespace optibind
