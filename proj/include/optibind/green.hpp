#pragma once

#include <Eigen/Dense>
#include <complex>

namespace optibind {

using Vec3 = Eigen::Vector3d;
using Vec3c = Eigen::Vector3cd;
using Tensor3 = Eigen::Matrix3d;
using Tensor3c = Eigen::Matrix3cd;

// Dipole Green tensors of free space, all in SI units (1/m^3). Lengths are
// rescaled by the wavenumber internally, so these are safe to call at
// nanometer arguments.
//
// green_full:   G(r) = [grad x grad + k^2] e^{ikr}/(4 pi r), closed form for r != 0
// green_static: electrostatic limit k -> 0 (real, traceless)
// green_transverse: G - G0, regular everywhere; below the crossover radius
//               k|r| = 1e-3 a cubic small-argument expansion is used to avoid
//               cancellation, with G_t(0) = i k^3/(6 pi) * Identity
// far_field_green: the 1/r radiation term alone, transverse to r

Tensor3c green_full(const Vec3& r, double k);
Tensor3 green_static(const Vec3& r);
Tensor3c green_transverse(const Vec3& r, double k);
Tensor3c far_field_green(const Vec3& r, double k);

// Crossover radius (in units of 1/k) between the subtracted and expanded
// branches of green_transverse.
inline constexpr double kTransverseCrossover = 1e-3;

// Relative residual of the vector Helmholtz equation,
// || curl curl G - k^2 G ||_F / || k^2 G ||_F, with curl curl evaluated as
// grad(div G) - laplace G by 4th-order central differences of step h.
double helmholtz_residual(const Vec3& r, double k, double step);

// Default stencil step for helmholtz_residual.
inline double default_helmholtz_step(double k) { return 1e-3 / k; }

}  // namespace optibind
