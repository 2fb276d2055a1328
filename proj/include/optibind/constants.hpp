#pragma once

namespace optibind {

// CODATA 2018 values. Overridable through the scenario file for testing,
// defaults are what every computation uses.
struct PhysicalConstants {
    double eps0 = 8.8541878128e-12;  // vacuum permittivity [F/m]
    double c    = 299792458.0;       // speed of light [m/s]
    double hbar = 1.054571817e-34;   // reduced Planck constant [J s]
    double kB   = 1.380649e-23;      // Boltzmann constant [J/K]
};

}  // namespace optibind
