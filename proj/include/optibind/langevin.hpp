#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "optibind/binding.hpp"

namespace optibind {

// Linear stochastic model for the state (z_1..z_N, p_1..p_N):
//   dx = A x dt + dW,  <dW dW^T> = noise dt,
// with drift  z' = p/m,  p' = -(m w^2 + K) z + sum C z' - gamma p, and the
// static forces absorbed into the equilibrium offsets. The classical-limit
// noise intensity of the momentum block is 2 Re D (plus the optional gas
// term 2 m gamma kB T on the diagonal).
struct LinearModel {
    Eigen::MatrixXd drift;      // 2N x 2N
    Eigen::MatrixXd noise;      // 2N x 2N, symmetric PSD, zero position block
    Eigen::MatrixXd stiffness;  // N x N, diag(m w^2 + K) - C
    Eigen::VectorXd offsets;    // 2N equilibrium shifts (z-bar, 0)
    Eigen::VectorXd mass;       // N
    Eigen::VectorXd omega;      // N
    int n() const { return static_cast<int>(mass.size()); }
    int dim() const { return 2 * n(); }
};

LinearModel build_linear_model(const ArrayScenario& sc, const BindingMatrices& bm);

struct StabilityReport {
    Eigen::VectorXcd eigenvalues;
    double max_real = 0.0;
    enum Class { Stable, Marginal, Unstable } classification = Marginal;
};
StabilityReport stability_spectrum(const LinearModel& model);

// Solves A X + X A^T + Q = 0 (complex Schur reduction, then a triangular
// sweep). Q symmetric; the result is symmetrized.
Eigen::MatrixXd lyapunov_solve(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q);

// Stationary covariance of the model. Throws on non-Hurwitz drift, quoting
// the offending eigenvalue.
Eigen::MatrixXd steady_state_covariance(const LinearModel& model);

// Covariance in the mass-frequency scaled state (m w z, p), where position
// and momentum blocks carry comparable weight. Residual and positivity
// checks are only meaningful there: in raw SI units the defining equation
// cancels over ~22 digits.
Eigen::MatrixXd scale_state_covariance(const LinearModel& model, const Eigen::MatrixXd& cov);

// || A S + S A^T + N || / || N || evaluated in the scaled frame.
double lyapunov_residual(const LinearModel& model, const Eigen::MatrixXd& sigma);

struct SimOptions {
    double dt = 0.0;                // <= 0.05 * 2 pi / max omega
    std::size_t steps = 0;
    std::size_t members = 1;
    std::uint64_t seed = 0;
    std::size_t record_members = 0;  // paths kept (displacements about equilibrium)
    std::size_t record_stride = 1;
    double moment_window = 0.5;      // trailing fraction feeding the streamed moments
};

struct TrajectoryEnsemble {
    SimOptions opts;
    int dim = 0;
    std::vector<double> times;
    std::vector<Eigen::MatrixXd> paths;  // member -> dim x recorded
    Eigen::VectorXd mean;                // streamed over window and members
    Eigen::MatrixXd second;              // <x x^T> streamed
    std::size_t samples = 0;
};

// Euler-Maruyama integration with per-member RNG streams derived from
// (seed, member index); results are reproducible for a fixed seed
// independent of threading.
TrajectoryEnsemble simulate_trajectories(const LinearModel& model, const SimOptions& opts);

// Time-and-ensemble covariance about the mean, from the streamed moments.
Eigen::MatrixXd ensemble_covariance(const TrajectoryEnsemble& ens);

}  // namespace optibind
