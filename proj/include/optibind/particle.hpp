#pragma once

#include <Eigen/Dense>
#include <cstddef>

#include "optibind/constants.hpp"
#include "optibind/green.hpp"

namespace optibind {

// A rigid dielectric ellipsoid. Axis lengths are the full diameters along the
// principal axes (the convention the shape integrals below are written in);
// the volume is (pi/6) l1 l2 l3, which reduces to (4/3) pi R^3 for a sphere
// of diameter 2R.
struct ParticleSpec {
    Vec3 diameters;       // principal-axis diameters [m]
    double permittivity;  // relative, > 1
    double mass;          // [kg]

    double volume() const { return M_PI / 6.0 * diameters.prod(); }
    double max_diameter() const { return diameters.maxCoeff(); }
    bool is_sphere(double rel_tol = 1e-9) const;
    double radius() const { return diameters[0] / 2.0; }  // spheres only

    static ParticleSpec sphere(double radius, double permittivity, double density);
    static ParticleSpec ellipsoid(const Vec3& diameters, double permittivity, double density);

    void validate() const;  // throws std::invalid_argument
};

// Eigenvalues of the shape depolarization tensor, from adaptive quadrature of
// the standard elliptic integral. They are positive and sum to one.
Eigen::Vector3d depolarization_eigenvalues(const Vec3& diameters);
Tensor3 depolarization_tensor(const Vec3& diameters);

// chi = (eps - 1) / (1 + N (eps - 1)), evaluated eigenvalue-wise in the
// principal frame.
Tensor3 susceptibility(double permittivity, const Tensor3& depolarization);

// Exact sphere value 3 (eps - 1) / (eps + 2).
double sphere_susceptibility(double permittivity);

// Radiation correction to the susceptibility from the double volume integral
// of (|s|^2 1 + s x s)/|s|^3 over the particle. Scales as V^{2/3} and is
// independent of where the particle sits.
struct RadiationCorrection {
    Tensor3 tensor;           // delta chi
    double rel_error;         // estimate, see each routine
    std::size_t samples;
    bool size_warning;        // k * max diameter > 0.5, outside the deep Rayleigh regime
    bool converged;           // rel_error <= 1e-4
};

// Primary route: the integrand is homogeneous of degree -1 in s = r - r',
// so the pair integral factorizes exactly into the radial moment of the
// ellipsoid overlap volume times a smooth angular integral, evaluated by
// product quadrature. rel_error compares two quadrature resolutions.
RadiationCorrection radiation_correction(const ParticleSpec& particle, double k);

// Independent route: quasi-random (Halton) sampling over the ellipsoid pair
// with a split-sample error estimate; `center` shifts the integration
// domain, which must not change the result.
RadiationCorrection radiation_correction_sampled(const ParticleSpec& particle, double k,
                                                 std::size_t samples = 1000000,
                                                 const Vec3& center = Vec3::Zero());

// Closed form of the same correction for a sphere: (4/15) (kR)^2 chi^2.
double sphere_radiation_correction(double k, double radius, double chi);

// alpha = eps0 V chi  [C m^2 / V]
Tensor3 polarizability(const ParticleSpec& particle, const Tensor3& chi,
                       const PhysicalConstants& pc = {});

}  // namespace optibind
