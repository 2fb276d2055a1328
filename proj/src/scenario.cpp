#include "optibind/scenario.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace optibind {

double ArrayScenario::chi(std::size_t j) const {
    return sphere_susceptibility(particles.at(j).permittivity);
}

double ArrayScenario::chi_tilde(std::size_t j) const {
    const double c = chi(j);
    return c + sphere_radiation_correction(wavenumber(), particles.at(j).radius(), c);
}

double ArrayScenario::trap_omega(std::size_t j) const {
    return trap_frequency(particles.at(j), tweezers.at(j), chi_tilde(j), constants);
}

ArrayScenario::Validation ArrayScenario::validate() const {
    Validation v;
    auto fail = [&](const std::string& s) {
        v.ok = false;
        v.issues.push_back(s);
    };

    if (particles.empty()) fail("scenario: needs at least one particle");
    if (particles.size() != tweezers.size())
        fail("scenario: particles and tweezers lists must have equal length");
    if (!(gas.gamma >= 0.0)) fail("scenario: gas damping must be nonnegative");
    if (!(gas.temperature >= 0.0)) fail("scenario: gas temperature must be nonnegative");

    for (std::size_t j = 0; j < particles.size(); ++j) {
        try {
            particles[j].validate();
        } catch (const std::exception& e) {
            fail("particle " + std::to_string(j) + ": " + e.what());
        }
        if (!particles[j].is_sphere())
            fail("particle " + std::to_string(j) +
                 ": coupling formulas assume spheres (isotropic susceptibility)");
    }
    for (std::size_t j = 0; j < tweezers.size(); ++j) {
        try {
            tweezers[j].validate();
        } catch (const std::exception& e) {
            fail("tweezer " + std::to_string(j) + ": " + e.what());
        }
    }
    if (v.issues.empty()) {
        const double lambda0 = tweezers[0].wavelength;
        const double w0 = tweezers[0].waist;
        for (std::size_t j = 1; j < tweezers.size(); ++j) {
            if (std::abs(tweezers[j].wavelength - lambda0) > 1e-12 * lambda0)
                fail("tweezer " + std::to_string(j) + ": all tweezers must share one wavelength");
            if (std::abs(tweezers[j].waist - w0) > 1e-9 * w0)
                fail("tweezer " + std::to_string(j) + ": all tweezers must share one waist");
        }
        const double k = wavenumber();
        for (std::size_t j = 0; j < tweezers.size(); ++j) {
            for (std::size_t jp = j + 1; jp < tweezers.size(); ++jp) {
                const double d = distance(j, jp);
                std::ostringstream pair;
                pair << "foci " << j << "," << jp;
                if (d == 0.0) {
                    fail(pair.str() + ": coincident");
                    continue;
                }
                if (d <= 5.0 * w0)
                    fail(pair.str() + ": distance " + std::to_string(d) +
                         " m violates the non-overlap gate d > 5 w");
                if (k * d <= 2.0 * M_PI)
                    fail(pair.str() + ": k d = " + std::to_string(k * d) +
                         " violates the far-field gate k d > 2 pi");
            }
        }
        if (local_k() <= 0.0)
            fail("scenario: Gouy-corrected wavenumber k - 1/z_R is not positive");
    }
    return v;
}

void ArrayScenario::require_valid() const {
    const auto v = validate();
    if (v.ok || validation_overridden) return;
    std::string msg = "scenario validation failed:";
    for (const auto& s : v.issues) msg += "\n  - " + s;
    throw std::invalid_argument(msg);
}

}  // namespace optibind
