#include "optibind/tweezer.hpp"

#include <cmath>
#include <stdexcept>

namespace optibind {

void TweezerSpec::validate() const {
    if (!(waist > 0.0)) throw std::invalid_argument("tweezer: waist must be positive");
    if (!(wavelength > 0.0)) throw std::invalid_argument("tweezer: wavelength must be positive");
    if (!(amplitude >= 0.0)) throw std::invalid_argument("tweezer: amplitude must be nonnegative");
    if (focus[2] != 0.0)
        throw std::invalid_argument("tweezer: focus must lie in the z = 0 plane");
}

std::complex<double> tweezer_envelope(const Vec3& r, const TweezerSpec& tw) {
    const std::complex<double> q(1.0, r[2] / tw.rayleigh_range());
    const double rho2 = r[0] * r[0] + r[1] * r[1];
    return std::exp(-rho2 / (tw.waist * tw.waist * q)) / q;
}

Vec3c laser_field(const Vec3& r, std::span<const TweezerSpec> tweezers) {
    if (tweezers.empty()) throw std::invalid_argument("laser_field: no tweezers");
    Vec3c field = Vec3c::Zero();
    for (const auto& tw : tweezers) {
        const std::complex<double> plane = std::exp(std::complex<double>(0.0, tw.wavenumber() * r[2]));
        field += tw.amplitude_vector() * plane * tweezer_envelope(r - tw.focus, tw);
    }
    return field;
}

double trap_frequency(const ParticleSpec& particle, const TweezerSpec& tw, double chi_tilde,
                      const PhysicalConstants& pc) {
    if (!(chi_tilde > 0.0)) throw std::invalid_argument("trap_frequency: chi_tilde must be positive");
    const double zr = tw.rayleigh_range();
    return std::sqrt(pc.eps0 * chi_tilde * particle.volume() * tw.amplitude * tw.amplitude /
                     (2.0 * particle.mass * zr * zr));
}

double amplitude_for_trap_frequency(double omega, const ParticleSpec& particle,
                                    const TweezerSpec& tw, double chi_tilde,
                                    const PhysicalConstants& pc) {
    const double zr = tw.rayleigh_range();
    return omega * zr * std::sqrt(2.0 * particle.mass / (pc.eps0 * chi_tilde * particle.volume()));
}

double local_wavenumber(double k, double rayleigh_range) {
    if (!(rayleigh_range > 0.0))
        throw std::invalid_argument("local_wavenumber: Rayleigh range must be positive");
    return k - 1.0 / rayleigh_range;
}

double amplitude_from_power(double power, double waist, const PhysicalConstants& pc) {
    return std::sqrt(4.0 * power / (M_PI * pc.eps0 * pc.c * waist * waist));
}

double power_from_amplitude(double amplitude, double waist, const PhysicalConstants& pc) {
    return amplitude * amplitude * M_PI * pc.eps0 * pc.c * waist * waist / 4.0;
}

}  // namespace optibind
