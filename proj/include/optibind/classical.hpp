#pragma once

#include <Eigen/Dense>
#include <vector>

#include "optibind/scenario.hpp"

namespace optibind {

// Independent classical route to the binding physics: dipole forces computed
// by numerically differentiating fields and potentials, used to cross-check
// the linearized coupling matrix.

// Cycle-averaged dipole force on every particle,
//   F_j = grad_j (alpha_j/4) |E_L(r_j)|^2
//       + grad_j sum_{j' != j} (alpha_j alpha_j' / 2 eps0)
//                 Re[ E_L*(r_j) . G(r_j - r_j') E_L(r_j') ],
// with 4th-order central differences of step 1e-6/k (step = 0 picks that
// default). conservative_only replaces G by Re G, which is the part that
// derives from the binding potential.
std::vector<Vec3> classical_binding_force(const std::vector<Vec3>& positions,
                                          const ArrayScenario& sc,
                                          bool conservative_only = false, double step = 0.0);

// The single-particle optical-potential term grad_j (alpha_j/4) |E_L(r_j)|^2
// alone, for isolating the interparticle part of the force.
std::vector<Vec3> optical_gradient_force(const std::vector<Vec3>& positions,
                                         const ArrayScenario& sc, double step = 0.0);

// Conservative binding energy
//   -(eps0/4) sum_{j != j'} V_j V_j' chi_j' chi_j
//       E_L*(r_j') . Re G(r_j - r_j') . E_L(r_j)   [J]
double conservative_potential(const std::vector<Vec3>& positions, const ArrayScenario& sc);

// Couplings extracted from the axial force gradient at the tweezer foci,
// using the far-field Green tensor frozen at the focus separations and the
// Gouy-corrected local phase e^{i (k - 1/z_R) z} as the only displacement
// dependence (the harmonic-expansion convention of the coupling formula).
// Steps are halved with Richardson extrapolation until two estimates agree.
struct GradientCoupling {
    Eigen::MatrixXd C;      // [N/m], zero diagonal
    double rel_fd_error;    // worst Richardson disagreement, relative to max |C|
    bool converged;
};
GradientCoupling coupling_from_force_gradient(const ArrayScenario& sc);

}  // namespace optibind
