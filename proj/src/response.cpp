#include "optibind/response.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace optibind {

namespace {
constexpr std::complex<double> I{0.0, 1.0};
}

ChainSpec ChainSpec::directional(int N, double omega0_over_gamma, double g_over_gamma,
                                 double gamma, int n) {
    ChainSpec c;
    c.N = N;
    c.gamma = gamma;
    c.omega0 = omega0_over_gamma * gamma;
    c.g = g_over_gamma * gamma;
    c.n = n;
    c.kd_next = 2.0 * M_PI * n + M_PI / 4.0;
    c.phi_next = M_PI / 4.0;
    c.validate();
    return c;
}

ChainSpec ChainSpec::with_size(int size) const {
    ChainSpec c = *this;
    c.N = size;
    return c;
}

void ChainSpec::validate() const {
    if (N < 1) throw std::invalid_argument("chain: N must be at least 1");
    if (!(omega0 > 0.0) || !(gamma > 0.0) || !(g >= 0.0))
        throw std::invalid_argument("chain: omega0 and gamma must be positive, g nonnegative");
    if (!(mass > 0.0)) throw std::invalid_argument("chain: mass must be positive");
}

double chain_coupling_rate(const ArrayScenario& sc, double omega0, double d_next) {
    const double k = sc.wavenumber();
    const double kappa = sc.local_k();
    const double V = sc.particles.at(0).volume();
    const double E0 = sc.tweezers.at(0).amplitude;
    return sc.constants.eps0 * sc.chi(0) * sc.chi(0) * V * V * k * k * kappa * kappa * E0 * E0 /
           (16.0 * M_PI * sc.particles[0].mass * omega0 * d_next);
}

ChainSpec chain_from_scenario(const ArrayScenario& sc) {
    sc.require_valid();
    if (sc.size() < 2) throw std::invalid_argument("chain_from_scenario: need at least 2 particles");
    const auto bm = binding_matrices(sc);
    ChainSpec c;
    c.N = static_cast<int>(sc.size());
    c.mass = sc.particles[0].mass;
    // equal renormalized springs assumed; use the ensemble mean
    double w2 = 0.0;
    for (Eigen::Index j = 0; j < bm.omega.size(); ++j)
        w2 += bm.omega[j] * bm.omega[j] + bm.K[j] / sc.particles[j].mass;
    c.omega0 = std::sqrt(w2 / static_cast<double>(sc.size()));
    c.gamma = sc.gas.gamma;
    const double d_next = sc.distance(0, 1);
    c.kd_next = sc.wavenumber() * d_next;
    c.n = static_cast<int>(std::lround((c.kd_next - M_PI / 4.0) / (2.0 * M_PI)));
    c.phi_next = sc.tweezers[1].phase - sc.tweezers[0].phase;
    c.g = chain_coupling_rate(sc, c.omega0, d_next);
    return c;
}

Eigen::MatrixXd chain_coupling_over_mass(const ChainSpec& chain) {
    chain.validate();
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(chain.N, chain.N);
    for (int j = 0; j < chain.N; ++j)
        for (int jp = 0; jp < chain.N; ++jp) {
            if (j == jp) continue;
            const int s = j - jp;
            const double as = std::abs(s);
            C(j, jp) = 2.0 * chain.omega0 * chain.g / as *
                       std::cos(chain.kd_next * as - chain.phi_next * s);
        }
    return C;
}

Eigen::MatrixXcd chain_diffusion_scaled(const ChainSpec& chain) {
    chain.validate();
    Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(chain.N, chain.N);
    for (int j = 0; j < chain.N; ++j) {
        D(j, j) = 14.0 / 15.0 * chain.kd_next;
        for (int jp = 0; jp < chain.N; ++jp) {
            if (j == jp) continue;
            const int s = j - jp;
            const double as = std::abs(s);
            D(j, jp) = std::sin(chain.kd_next * as) / as *
                       std::exp(I * chain.phi_next * static_cast<double>(s));
        }
    }
    return D;
}

namespace {

Eigen::MatrixXcd invert_checked(const Eigen::MatrixXcd& inv_chi) {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(inv_chi);
    Eigen::MatrixXcd chi = lu.solve(Eigen::MatrixXcd::Identity(inv_chi.rows(), inv_chi.cols()));
    if (!chi.allFinite()) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(inv_chi);
        const double cond = svd.singularValues()(0) /
                            svd.singularValues()(svd.singularValues().size() - 1);
        throw std::runtime_error("susceptibility_matrix: singular response (condition number " +
                                 std::to_string(cond) + ")");
    }
    return chi;
}

}  // namespace

Eigen::MatrixXcd susceptibility_matrix(const ChainSpec& chain, double omega) {
    chain.validate();
    const Eigen::MatrixXd Cm = chain_coupling_over_mass(chain);
    Eigen::MatrixXcd inv =
        (-Cm).cast<std::complex<double>>();
    const std::complex<double> diag =
        omega * omega - chain.omega0 * chain.omega0 - I * chain.gamma * omega;
    inv.diagonal().array() += diag;
    inv *= I / (chain.omega0 * chain.gamma);
    return invert_checked(inv);
}

Eigen::MatrixXcd susceptibility_matrix(const ArrayScenario& sc, const BindingMatrices& bm,
                                       double omega) {
    if (!(sc.gas.gamma > 0.0))
        throw std::invalid_argument("susceptibility_matrix: needs gas damping > 0");
    const auto N = static_cast<Eigen::Index>(sc.size());
    Eigen::MatrixXcd inv(N, N);
    double wbar2 = 0.0;
    for (Eigen::Index j = 0; j < N; ++j)
        wbar2 += bm.omega[j] * bm.omega[j] + bm.K[j] / sc.particles[j].mass;
    const double wbar = std::sqrt(wbar2 / static_cast<double>(N));
    for (Eigen::Index j = 0; j < N; ++j) {
        const double m = sc.particles[j].mass;
        const double wt2 = bm.omega[j] * bm.omega[j] + bm.K[j] / m;
        for (Eigen::Index jp = 0; jp < N; ++jp) {
            std::complex<double> v = -bm.C(j, jp) / m;
            if (j == jp) v += omega * omega - wt2 - I * sc.gas.gamma * omega;
            inv(j, jp) = v * I / (wbar * sc.gas.gamma);
        }
    }
    return invert_checked(inv);
}

std::vector<double> default_grid(const ChainSpec& chain, std::size_t points) {
    const double half = 10.0 * chain.gamma *
                        std::max(1.0, chain.N * chain.g / chain.gamma);
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = chain.omega0 - half +
                  2.0 * half * static_cast<double>(i) / static_cast<double>(points - 1);
    return grid;
}

double SpectrumResult::peak_forward() const {
    return *std::max_element(forward.begin(), forward.end());
}

double SpectrumResult::peak_backward() const {
    return *std::max_element(backward.begin(), backward.end());
}

SpectrumResult amplification_sweep(const ChainSpec& chain, const std::vector<double>& grid) {
    SpectrumResult res;
    res.chain = chain;
    res.omega = grid.empty() ? default_grid(chain) : grid;
    for (std::size_t i = 1; i < res.omega.size(); ++i)
        if (!(res.omega[i] > res.omega[i - 1]))
            throw std::invalid_argument("amplification_sweep: grid must be strictly increasing");
    const std::size_t P = res.omega.size();
    res.forward.resize(P);
    res.backward.resize(P);
    res.single.resize(P);
    const ChainSpec one = chain.with_size(1);
    for (std::size_t i = 0; i < P; ++i) {
        const Eigen::MatrixXcd chi = susceptibility_matrix(chain, res.omega[i]);
        res.forward[i] = std::norm(chi(chain.N - 1, 0));
        res.backward[i] = std::norm(chi(0, chain.N - 1));
        res.single[i] = std::norm(susceptibility_matrix(one, res.omega[i])(0, 0));
    }
    return res;
}

std::vector<SnrPoint> snr_analysis(const ChainSpec& base, const std::vector<int>& sizes,
                                   double signal_amplitude, double signal_omega,
                                   double diffusion_scale) {
    if (sizes.empty()) throw std::invalid_argument("snr_analysis: no chain sizes given");
    std::vector<SnrPoint> out;
    double reference = 0.0;
    for (std::size_t idx = 0; idx < sizes.size(); ++idx) {
        const ChainSpec chain = base.with_size(sizes[idx]);
        const auto grid = default_grid(chain);
        const Eigen::MatrixXcd D = diffusion_scale * chain_diffusion_scaled(chain);
        const int N = chain.N;
        const double ws = signal_omega > 0.0 ? signal_omega : chain.omega0;

        SnrPoint pt;
        pt.N = N;
        const Eigen::MatrixXcd Dsym = 2.0 * D.real().cast<std::complex<double>>();
        pt.signal = std::norm(susceptibility_matrix(chain, ws)(N - 1, 0)) * signal_amplitude *
                    signal_amplitude;
        std::vector<double> noise_density(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const Eigen::MatrixXcd chi = susceptibility_matrix(chain, grid[i]);
            const Eigen::RowVectorXcd row = chi.row(N - 1);
            const std::complex<double> q = (row * Dsym * row.adjoint()).value();
            noise_density[i] = q.real();
        }
        for (std::size_t i = 1; i < grid.size(); ++i)
            pt.noise += 0.5 * (noise_density[i] + noise_density[i - 1]) * (grid[i] - grid[i - 1]);
        pt.ratio = pt.noise > 0.0 ? pt.signal / pt.noise
                                  : std::numeric_limits<double>::infinity();
        if (idx == 0) reference = pt.ratio;
        pt.normalized = pt.ratio / reference;
        out.push_back(pt);
    }
    return out;
}

DispersionSums bulk_dispersion_partial_sums(double kappa, double omega0, double g,
                                            const std::vector<std::size_t>& checkpoints) {
    if (checkpoints.empty())
        throw std::invalid_argument("bulk_dispersion_partial_sums: no checkpoints");
    for (std::size_t i = 1; i < checkpoints.size(); ++i)
        if (checkpoints[i] <= checkpoints[i - 1])
            throw std::invalid_argument("bulk_dispersion_partial_sums: checkpoints must increase");

    DispersionSums out;
    out.checkpoints = checkpoints;
    const double scale = 2.0 * g * omega0;

    const auto wrap = [](double x) {
        double r = std::remainder(x, 2.0 * M_PI);
        return std::abs(r);
    };
    if (wrap(kappa) < 1e-12) {
        out.natural_diverges = true;
        out.note = "harmonic part e^{-i kappa j}/j diverges at kappa = 0 (mod 2 pi)";
    } else if (wrap(2.0 * kappa + M_PI) < 1e-12) {
        out.natural_diverges = true;
        out.note = "alternating part (-1)^j e^{2 i kappa j}/(2 j) loses its sign flips at "
                   "kappa = pi/2 (mod pi) and diverges";
    }

    const std::size_t Jmax = checkpoints.back();
    const auto term = [&](std::size_t j) {
        const double dj = static_cast<double>(j);
        return std::exp(-I * kappa * dj) / dj +
               (j % 2 == 0 ? 1.0 : -1.0) * std::exp(2.0 * I * kappa * dj) / (2.0 * dj);
    };

    // natural order and absolute values
    {
        std::complex<double> s = 0.0;
        double sabs = 0.0;
        std::size_t next = 0;
        for (std::size_t j = 1; j <= Jmax; ++j) {
            s += term(j);
            sabs += 1.0 / static_cast<double>(j) + 0.5 / static_cast<double>(j);
            if (j == checkpoints[next]) {
                out.natural.push_back(scale * s);
                out.absolute.push_back(scale * sabs);
                if (++next == checkpoints.size()) break;
            }
        }
    }

    // reordering: one odd-index term, then two even-index terms
    {
        std::complex<double> s = 0.0;
        std::size_t odd = 1, even = 2, consumed = 0, next = 0;
        while (consumed < Jmax && next < checkpoints.size()) {
            for (int rep = 0; rep < 3 && consumed < Jmax; ++rep) {
                if (rep == 0) {
                    s += term(odd);
                    odd += 2;
                } else {
                    s += term(even);
                    even += 2;
                }
                ++consumed;
                if (consumed == checkpoints[next]) {
                    out.reordered.push_back(scale * s);
                    ++next;
                }
            }
        }
    }
    return out;
}

}  // namespace optibind
