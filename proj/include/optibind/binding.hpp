#pragma once

#include <Eigen/Dense>
#include <optional>

#include "optibind/scenario.hpp"

namespace optibind {

// Linearized optical-binding matrices for motion along the optical axis.
// C is the (generally nonreciprocal) coupling matrix, D the Hermitian
// positive-semidefinite momentum diffusion matrix, K the spring
// renormalizations, F the static radiation-pressure forces, omega the bare
// trap frequencies.
struct BindingMatrices {
    Eigen::MatrixXd C;       // [N/m], zero diagonal
    Eigen::MatrixXcd D;      // [kg^2 m^2 / s^3], Hermitian PSD
    Eigen::VectorXd K;       // [N/m], row sums of C
    Eigen::VectorXd F;       // [N]
    Eigen::VectorXd omega;   // [rad/s]
};

Eigen::MatrixXd coupling_matrix(const ArrayScenario& sc);
Eigen::MatrixXcd diffusion_matrix(const ArrayScenario& sc);
Eigen::VectorXd static_forces(const ArrayScenario& sc);
Eigen::VectorXd spring_renormalization(const Eigen::MatrixXd& C);
BindingMatrices binding_matrices(const ArrayScenario& sc);

// The antisymmetric part of C must be carried entirely by Im D:
// C_jj' - C_j'j = (4/hbar) Im D_jj'. The report normalizes the worst
// violation by max |C|.
struct IdentityReport {
    double max_violation = 0.0;  // absolute, [N/m]
    double scale = 0.0;          // max |C|
    double normalized = 0.0;
    bool pass = false;
};
IdentityReport structural_identity_check(const Eigen::MatrixXd& C, const Eigen::MatrixXcd& D,
                                         double hbar);

// Brute-force reconstruction of D from the photon-scattering picture: the
// bilinear position coefficient of the scattering dissipator, integrated
// numerically over emission directions and summed over polarizations. The
// off-diagonals keep only the leading 1/d order, extracted by Richardson
// extrapolation across distances d + 2 pi m / k (which leave all phases
// unchanged).
struct AngularDiffusion {
    Eigen::MatrixXcd D;
    double rel_error = 0.0;  // quadrature + extrapolation estimate
    bool converged = false;  // rel_error <= 1e-6
};
AngularDiffusion diffusion_from_angular_integral(const ArrayScenario& sc);

// Two-particle configuration with one-way coupling: k d = pi/4 + 2 pi n and
// tweezer phase difference phi_1 - phi_2 = pi/4, which makes C_21 = 0 while
// C_12 = C > 0. theta_1/2 are the polarization angles measured from the
// in-plane direction transverse to the pair axis (theta = pi/2 puts the
// polarization along the axis and switches the coupling off).
struct UnidirectionalPairOptions {
    double theta1 = 0.0;
    double theta2 = 0.0;
    std::optional<int> n;  // default: smallest n passing the validation gates
};
ArrayScenario unidirectional_pair_config(const ArrayScenario& base,
                                         const UnidirectionalPairOptions& opt = {});

// Coupling strength of the unidirectional pair,
// C = eps0 chi^2 V1 V2 k^2 (k - 1/z_R)^2 |E1||E2| cos(t1) cos(t2) / (8 pi d).
double unidirectional_coupling(const ArrayScenario& pair);

}  // namespace optibind
