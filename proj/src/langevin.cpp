#include "optibind/langevin.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace optibind {

LinearModel build_linear_model(const ArrayScenario& sc, const BindingMatrices& bm) {
    const auto N = static_cast<Eigen::Index>(sc.size());
    if (bm.C.rows() != N || bm.D.rows() != N || bm.K.size() != N || bm.F.size() != N ||
        bm.omega.size() != N)
        throw std::invalid_argument("build_linear_model: matrices do not match the scenario size");

    LinearModel m;
    m.mass.resize(N);
    for (Eigen::Index j = 0; j < N; ++j) m.mass[j] = sc.particles[j].mass;
    m.omega = bm.omega;

    m.stiffness = -bm.C;
    for (Eigen::Index j = 0; j < N; ++j)
        m.stiffness(j, j) = m.mass[j] * bm.omega[j] * bm.omega[j] + bm.K[j];

    m.drift = Eigen::MatrixXd::Zero(2 * N, 2 * N);
    m.drift.topRightCorner(N, N) = m.mass.cwiseInverse().asDiagonal();
    m.drift.bottomLeftCorner(N, N) = -m.stiffness;
    m.drift.bottomRightCorner(N, N) = -sc.gas.gamma * Eigen::MatrixXd::Identity(N, N);

    m.noise = Eigen::MatrixXd::Zero(2 * N, 2 * N);
    m.noise.bottomRightCorner(N, N) = 2.0 * bm.D.real();
    if (sc.gas.thermal_noise)
        for (Eigen::Index j = 0; j < N; ++j)
            m.noise(N + j, N + j) +=
                2.0 * m.mass[j] * sc.gas.gamma * sc.constants.kB * sc.gas.temperature;

    m.offsets = Eigen::VectorXd::Zero(2 * N);
    m.offsets.head(N) = m.stiffness.partialPivLu().solve(bm.F);
    return m;
}

namespace {

// Per-coordinate scaling z -> (m w) z that removes the ~1e23 spread between
// the 1/m and stiffness blocks of the SI drift matrix; the spectrum is
// invariant, the eigensolver accuracy and the marginality threshold are not.
Eigen::VectorXd balance_scales(const LinearModel& model) {
    const int N = model.n();
    double wref = model.omega.maxCoeff();
    if (!(wref > 0.0)) wref = 1.0;
    Eigen::VectorXd t = Eigen::VectorXd::Ones(2 * N);
    for (int j = 0; j < N; ++j)
        t[j] = model.mass[j] * (model.omega[j] > 0.0 ? model.omega[j] : wref);
    return t;
}

Eigen::MatrixXd scaled_by(const Eigen::MatrixXd& m, const Eigen::VectorXd& left,
                          const Eigen::VectorXd& right) {
    return left.asDiagonal() * m * right.asDiagonal();
}

}  // namespace

StabilityReport stability_spectrum(const LinearModel& model) {
    StabilityReport rep;
    const Eigen::VectorXd t = balance_scales(model);
    const Eigen::MatrixXd balanced = scaled_by(model.drift, t, t.cwiseInverse());
    Eigen::EigenSolver<Eigen::MatrixXd> es(balanced);
    rep.eigenvalues = es.eigenvalues();
    rep.max_real = rep.eigenvalues.real().maxCoeff();
    const double eps = 1e-12 * balanced.norm();
    if (rep.max_real > eps)
        rep.classification = StabilityReport::Unstable;
    else if (rep.max_real < -eps)
        rep.classification = StabilityReport::Stable;
    else
        rep.classification = StabilityReport::Marginal;
    return rep;
}

Eigen::MatrixXd lyapunov_solve(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q) {
    const Eigen::Index n = A.rows();
    if (A.cols() != n || Q.rows() != n || Q.cols() != n)
        throw std::invalid_argument("lyapunov_solve: dimension mismatch");

    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(A.cast<std::complex<double>>());
    if (schur.info() != Eigen::Success)
        throw std::runtime_error("lyapunov_solve: Schur decomposition failed");
    const Eigen::MatrixXcd& T = schur.matrixT();
    const Eigen::MatrixXcd& U = schur.matrixU();

    Eigen::MatrixXcd M = U.adjoint() * Q.cast<std::complex<double>>() * U;
    Eigen::MatrixXcd Y = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index k = n - 1; k >= 0; --k) {
        Eigen::VectorXcd rhs = -M.col(k);
        for (Eigen::Index j = k + 1; j < n; ++j) rhs -= std::conj(T(k, j)) * Y.col(j);
        Eigen::MatrixXcd shifted = T;
        shifted.diagonal().array() += std::conj(T(k, k));
        Y.col(k) = shifted.triangularView<Eigen::Upper>().solve(rhs);
    }
    Eigen::MatrixXd X = (U * Y * U.adjoint()).real();
    return 0.5 * (X + X.transpose());
}

Eigen::MatrixXd steady_state_covariance(const LinearModel& model) {
    const auto rep = stability_spectrum(model);
    if (rep.classification != StabilityReport::Stable) {
        Eigen::Index worst = 0;
        rep.eigenvalues.real().maxCoeff(&worst);
        std::ostringstream msg;
        msg << "steady_state_covariance: drift is not Hurwitz, eigenvalue "
            << rep.eigenvalues[worst].real() << (rep.eigenvalues[worst].imag() < 0 ? " - " : " + ")
            << std::abs(rep.eigenvalues[worst].imag()) << "i has nonnegative real part";
        throw std::runtime_error(msg.str());
    }
    // solve in the balanced frame where all drift blocks are O(omega)
    const Eigen::VectorXd t = balance_scales(model);
    const Eigen::VectorXd tinv = t.cwiseInverse();
    const Eigen::MatrixXd sigma_s = lyapunov_solve(scaled_by(model.drift, t, tinv),
                                                   scaled_by(model.noise, t, t));
    return scaled_by(sigma_s, tinv, tinv);
}

Eigen::MatrixXd scale_state_covariance(const LinearModel& model, const Eigen::MatrixXd& cov) {
    const Eigen::VectorXd t = balance_scales(model);
    return scaled_by(cov, t, t);
}

double lyapunov_residual(const LinearModel& model, const Eigen::MatrixXd& sigma) {
    const Eigen::VectorXd t = balance_scales(model);
    const Eigen::MatrixXd As = scaled_by(model.drift, t, t.cwiseInverse());
    const Eigen::MatrixXd Ss = scaled_by(sigma, t, t);
    const Eigen::MatrixXd Ns = scaled_by(model.noise, t, t);
    return (As * Ss + Ss * As.transpose() + Ns).norm() / Ns.norm();
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Square root factor of the noise matrix restricted to its nonzero
// eigenspace; kicks are B * xi with xi standard normal.
Eigen::MatrixXd noise_factor(const Eigen::MatrixXd& noise) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(noise);
    const double tr = std::max(noise.trace(), 0.0);
    const double floor = -1e-12 * std::max(tr, 1e-300);
    if (es.eigenvalues().minCoeff() < floor)
        throw std::invalid_argument("simulate_trajectories: noise matrix is not PSD");
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()[i] > 0.0) keep.push_back(i);
    Eigen::MatrixXd B(noise.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c)
        B.col(static_cast<Eigen::Index>(c)) =
            es.eigenvectors().col(keep[c]) * std::sqrt(es.eigenvalues()[keep[c]]);
    return B;
}

}  // namespace

TrajectoryEnsemble simulate_trajectories(const LinearModel& model, const SimOptions& opts) {
    if (!(opts.dt > 0.0) || opts.steps == 0 || opts.members == 0)
        throw std::invalid_argument("simulate_trajectories: dt, steps and members must be positive");
    const double wmax = model.omega.maxCoeff();
    if (wmax > 0.0 && opts.dt > 0.05 * 2.0 * M_PI / wmax)
        throw std::invalid_argument("simulate_trajectories: dt exceeds 0.05 periods of the fastest mode");

    const int dim = model.dim();
    const Eigen::MatrixXd B = noise_factor(model.noise);
    const auto nkick = B.cols();
    const double sqdt = std::sqrt(opts.dt);

    TrajectoryEnsemble ens;
    ens.opts = opts;
    ens.dim = dim;
    const std::size_t window_begin =
        static_cast<std::size_t>(static_cast<double>(opts.steps) * (1.0 - opts.moment_window));
    const std::size_t recorded = opts.steps / opts.record_stride + 1;
    for (std::size_t s = 0; s <= opts.steps; s += opts.record_stride)
        ens.times.push_back(static_cast<double>(s) * opts.dt);
    ens.paths.assign(std::min(opts.record_members, opts.members),
                     Eigen::MatrixXd::Zero(dim, static_cast<Eigen::Index>(recorded)));

    std::vector<Eigen::VectorXd> mean_parts(opts.members, Eigen::VectorXd::Zero(dim));
    std::vector<Eigen::MatrixXd> second_parts(opts.members, Eigen::MatrixXd::Zero(dim, dim));
    std::vector<std::size_t> count_parts(opts.members, 0);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::int64_t mem = 0; mem < static_cast<std::int64_t>(opts.members); ++mem) {
        std::mt19937_64 rng(splitmix64(opts.seed ^ splitmix64(static_cast<std::uint64_t>(mem))));
        std::normal_distribution<double> normal;
        Eigen::VectorXd x = Eigen::VectorXd::Zero(dim);
        Eigen::VectorXd xi(nkick), tmp(dim);

        const bool record = static_cast<std::size_t>(mem) < ens.paths.size();
        if (record) ens.paths[mem].col(0) = x;
        std::size_t rec_idx = 1;

        for (std::size_t s = 1; s <= opts.steps; ++s) {
            tmp.noalias() = model.drift * x;
            for (Eigen::Index i = 0; i < nkick; ++i) xi[i] = normal(rng);
            x += opts.dt * tmp;
            x.noalias() += sqdt * (B * xi);
            if (record && s % opts.record_stride == 0)
                ens.paths[mem].col(static_cast<Eigen::Index>(rec_idx++)) = x;
            if (s >= window_begin) {
                mean_parts[mem] += x;
                second_parts[mem] += x * x.transpose();
                ++count_parts[mem];
            }
        }
    }

    // deterministic member-ordered reduction
    ens.mean = Eigen::VectorXd::Zero(dim);
    ens.second = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t mem = 0; mem < opts.members; ++mem) {
        ens.mean += mean_parts[mem];
        ens.second += second_parts[mem];
        ens.samples += count_parts[mem];
    }
    ens.mean /= static_cast<double>(ens.samples);
    ens.second /= static_cast<double>(ens.samples);
    return ens;
}

Eigen::MatrixXd ensemble_covariance(const TrajectoryEnsemble& ens) {
    if (ens.samples == 0)
        throw std::invalid_argument("ensemble_covariance: empty averaging window");
    return ens.second - ens.mean * ens.mean.transpose();
}

}  // namespace optibind
