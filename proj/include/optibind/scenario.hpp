#pragma once

#include <string>
#include <vector>

#include "optibind/particle.hpp"
#include "optibind/tweezer.hpp"

namespace optibind {

struct GasSpec {
    double gamma = 0.0;        // velocity damping rate [1/s]
    double temperature = 0.0;  // [K]
    bool thermal_noise = false;  // add 2 m gamma kB T momentum diffusion
};

// A full experiment description: one tweezer per particle, common laser
// wavelength and waist, gas damping. The far-field coupling formulas assume
// well separated, spherical particles; validate() encodes those gates
// (pairwise focus distance > 5 waists and k d > 2 pi).
struct ArrayScenario {
    std::vector<ParticleSpec> particles;
    std::vector<TweezerSpec> tweezers;
    GasSpec gas;
    PhysicalConstants constants;
    // Set when the user explicitly waived the validation gates (--force).
    bool validation_overridden = false;

    std::size_t size() const { return particles.size(); }
    double wavenumber() const { return tweezers.at(0).wavenumber(); }
    double waist() const { return tweezers.at(0).waist; }
    double rayleigh_range() const { return tweezers.at(0).rayleigh_range(); }
    double local_k() const { return local_wavenumber(wavenumber(), rayleigh_range()); }

    double distance(std::size_t j, std::size_t jp) const {
        return (tweezers[j].focus - tweezers[jp].focus).norm();
    }
    Vec3 pair_axis(std::size_t j, std::size_t jp) const {
        return (tweezers[j].focus - tweezers[jp].focus).normalized();
    }

    // Scalar susceptibility of particle j (spheres) and its radiation-corrected
    // counterpart chi + (4/15)(kR)^2 chi^2.
    double chi(std::size_t j) const;
    double chi_tilde(std::size_t j) const;
    double trap_omega(std::size_t j) const;

    struct Validation {
        bool ok = true;
        std::vector<std::string> issues;
    };
    Validation validate() const;
    // Throws std::invalid_argument listing all issues, unless
    // validation_overridden is set.
    void require_valid() const;
};

}  // namespace optibind
