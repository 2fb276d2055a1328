#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "optibind/binding.hpp"

namespace optibind {

// Gas-damped chain of identical particles with the directional tweezer
// phasing: nearest-neighbor spacing k d_next = 2 pi n + pi/4 and phase
// increment phi_next = pi/4, couplings C_jj'/m = (2 w0 g / |j-j'|)
// cos(k d_next |j-j'| - phi_next (j-j')). The defaults reproduce the
// directional-amplification working point w0 = 20 gamma, g = gamma.
struct ChainSpec {
    int N = 10;
    double omega0 = 20.0;  // [rad/s]
    double gamma = 1.0;    // [1/s]
    double g = 1.0;        // [rad/s]
    int n = 1;
    double kd_next = 2.0 * M_PI + M_PI / 4.0;
    double phi_next = M_PI / 4.0;
    double mass = 1.0;  // [kg]; cancels in the normalized susceptibility

    static ChainSpec directional(int N, double omega0_over_gamma = 20.0,
                                 double g_over_gamma = 1.0, double gamma = 1.0, int n = 1);
    ChainSpec with_size(int N) const;
    void validate() const;
};

// Coupling rate of the equal-amplitude chain,
// g = eps0 chi^2 V^2 k^2 (k - 1/z_R)^2 |E0|^2 / (16 pi m w0 d_next).
double chain_coupling_rate(const ArrayScenario& sc, double omega0, double d_next);

// Chain parameters derived from a physical scenario whose tweezers sit on a
// line with the directional spacing/phasing.
ChainSpec chain_from_scenario(const ArrayScenario& sc);

Eigen::MatrixXd chain_coupling_over_mass(const ChainSpec& chain);  // C/m [1/s^2]

// Recoil-noise matrix of the chain in units of hbar m w0 g (far-field limit
// k z_R >> 1 for the diagonal).
Eigen::MatrixXcd chain_diffusion_scaled(const ChainSpec& chain);

// Mechanical susceptibility, normalized so chi_11[w0] = 1 for N = 1:
// [chi^-1]_jj' = (i / w0 gamma) [ (w^2 - w0^2 - i gamma w) d_jj' - C_jj'/m ].
Eigen::MatrixXcd susceptibility_matrix(const ChainSpec& chain, double omega);

// Scenario version with per-particle renormalized frequencies and masses;
// normalization uses the mean renormalized frequency.
Eigen::MatrixXcd susceptibility_matrix(const ArrayScenario& sc, const BindingMatrices& bm,
                                       double omega);

std::vector<double> default_grid(const ChainSpec& chain, std::size_t points = 2001);

struct SpectrumResult {
    std::vector<double> omega;    // [rad/s], strictly increasing
    std::vector<double> forward;  // |chi_N1|^2
    std::vector<double> backward; // |chi_1N|^2
    std::vector<double> single;   // |chi_11|^2 of one particle
    ChainSpec chain;
    double peak_forward() const;
    double peak_backward() const;
};
SpectrumResult amplification_sweep(const ChainSpec& chain, const std::vector<double>& grid = {});

struct SnrPoint {
    int N = 0;
    double signal = 0.0;      // |chi_N1(signal_omega)|^2 x |force|^2
    double noise = 0.0;       // recoil noise power on particle N, band-integrated
    double ratio = 0.0;
    double normalized = 0.0;  // ratio relative to the first entry
};
// Signal-to-recoil-noise trend across chain sizes: a monochromatic force of
// the given amplitude drives particle 1 at signal_omega (0 means on
// resonance), the noise is the recoil power on particle N integrated over
// the default band. diffusion_scale multiplies the recoil matrix; zero noise
// is degenerate and flagged with ratio = inf.
std::vector<SnrPoint> snr_analysis(const ChainSpec& base, const std::vector<int>& sizes,
                                   double signal_amplitude = 1.0, double signal_omega = 0.0,
                                   double diffusion_scale = 1.0);

// Partial sums of the bulk dispersion series
//   w_k^2 = w0^2 - 2 g w0 sum_j [ e^{-i k j}/j + (-1)^j e^{2 i k j}/(2 j) ],
// reported as the scaled contribution 2 g w0 S_J at the requested checkpoint
// term counts: in natural order, with absolute values, and under the
// documented reordering "one odd-index term, then two even-index terms".
struct DispersionSums {
    std::vector<std::size_t> checkpoints;
    std::vector<std::complex<double>> natural;
    std::vector<double> absolute;
    std::vector<std::complex<double>> reordered;
    bool natural_diverges = false;
    std::string note;
};
DispersionSums bulk_dispersion_partial_sums(double kappa, double omega0, double g,
                                            const std::vector<std::size_t>& checkpoints);

}  // namespace optibind
