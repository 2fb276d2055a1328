#pragma once

#include <complex>
#include <span>
#include <vector>

#include "optibind/constants.hpp"
#include "optibind/green.hpp"
#include "optibind/particle.hpp"

namespace optibind {

// One optical tweezer propagating along +z with its focus in the z = 0 plane
// and linear polarization in the x-y plane. The polarization angle is
// measured from +x.
struct TweezerSpec {
    Vec3 focus = Vec3::Zero();        // e_z . focus = 0 [m]
    double waist = 1e-6;              // [m]
    double wavelength = 1.064e-6;     // [m]
    double amplitude = 0.0;           // |E_j| [V/m]
    double phase = 0.0;               // phi_j [rad]
    double polarization_angle = 0.0;  // from +x, in-plane [rad]

    double wavenumber() const { return 2.0 * M_PI / wavelength; }
    double rayleigh_range() const { return wavenumber() * waist * waist / 2.0; }
    Vec3 polarization() const {
        return {std::cos(polarization_angle), std::sin(polarization_angle), 0.0};
    }
    // Complex focus amplitude vector |E| e^{i phi} e_pol.
    Vec3c amplitude_vector() const {
        return std::polar(amplitude, phase) * polarization().cast<std::complex<double>>();
    }

    void validate() const;
};

// Gaussian envelope f_tw(r) = exp(-(x^2+y^2) / w^2 (1 + i z/z_R)) / (1 + i z/z_R),
// normalized to 1 at the focus.
std::complex<double> tweezer_envelope(const Vec3& r, const TweezerSpec& tw);

// E_L(r) = sum_j E_j e^{i k z} f_tw(r - d_j).
Vec3c laser_field(const Vec3& r, std::span<const TweezerSpec> tweezers);

// Trap frequency along the optical axis, m w^2 = eps0 chi_tilde V |E|^2 / (2 z_R^2).
double trap_frequency(const ParticleSpec& particle, const TweezerSpec& tw, double chi_tilde,
                      const PhysicalConstants& pc = {});

// Field amplitude that produces a requested axial trap frequency.
double amplitude_for_trap_frequency(double omega, const ParticleSpec& particle,
                                    const TweezerSpec& tw, double chi_tilde,
                                    const PhysicalConstants& pc = {});

// Effective axial wavenumber k - 1/z_R, reduced by the Gouy phase.
double local_wavenumber(double k, double rayleigh_range);

// Gaussian-beam power-to-amplitude map |E|^2 = 4 P / (pi eps0 c w^2).
double amplitude_from_power(double power, double waist, const PhysicalConstants& pc = {});
double power_from_amplitude(double amplitude, double waist, const PhysicalConstants& pc = {});

}  // namespace optibind
