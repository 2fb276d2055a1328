#include "optibind/binding.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace optibind {

namespace {

constexpr std::complex<double> I{0.0, 1.0};

Tensor3 transverse_projector(const Vec3& n) {
    return Tensor3::Identity() - n * n.transpose();
}

}  // namespace

Eigen::MatrixXd coupling_matrix(const ArrayScenario& sc) {
    sc.require_valid();
    const auto N = static_cast<Eigen::Index>(sc.size());
    const double k = sc.wavenumber();
    const double kappa = sc.local_k();
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(N, N);
    for (Eigen::Index j = 0; j < N; ++j) {
        const Vec3c Ej = sc.tweezers[j].amplitude_vector();
        for (Eigen::Index jp = 0; jp < N; ++jp) {
            if (jp == j) continue;
            const double d = sc.distance(j, jp);
            const Tensor3 P = transverse_projector(sc.pair_axis(j, jp));
            const Vec3c Ejp = sc.tweezers[jp].amplitude_vector();
            const double pref = sc.constants.eps0 * sc.chi(j) * sc.chi(jp) *
                                sc.particles[j].volume() * sc.particles[jp].volume() * k * k *
                                kappa * kappa / (8.0 * M_PI * d);
            const std::complex<double> overlap = Ej.dot(P.cast<std::complex<double>>() * Ejp);
            C(j, jp) = pref * std::real(std::exp(I * k * d) * overlap);
        }
    }
    return C;
}

Eigen::MatrixXcd diffusion_matrix(const ArrayScenario& sc) {
    sc.require_valid();
    const auto N = static_cast<Eigen::Index>(sc.size());
    const double k = sc.wavenumber();
    const double kappa = sc.local_k();
    const double hbar = sc.constants.hbar;
    Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(N, N);
    for (Eigen::Index j = 0; j < N; ++j) {
        const double Vj = sc.particles[j].volume();
        const double E2 = sc.tweezers[j].amplitude * sc.tweezers[j].amplitude;
        D(j, j) = hbar * sc.constants.eps0 * sc.chi(j) * sc.chi(j) * Vj * Vj * k * k * k * E2 *
                  (5.0 * kappa * kappa + 2.0 * k * k) / (120.0 * M_PI);
        const Vec3c Ej = sc.tweezers[j].amplitude_vector();
        for (Eigen::Index jp = 0; jp < N; ++jp) {
            if (jp == j) continue;
            const double d = sc.distance(j, jp);
            const Tensor3 P = transverse_projector(sc.pair_axis(j, jp));
            const Vec3c Ejp = sc.tweezers[jp].amplitude_vector();
            const double pref = hbar * sc.constants.eps0 * sc.chi(j) * sc.chi(jp) * Vj *
                                sc.particles[jp].volume() * k * k * kappa * kappa /
                                (16.0 * M_PI * d);
            // written with E_jp^* on the left, as the master equation produces it
            D(j, jp) = pref * std::sin(k * d) * Ejp.dot(P.cast<std::complex<double>>() * Ej);
        }
    }
    return D;
}

Eigen::VectorXd static_forces(const ArrayScenario& sc) {
    sc.require_valid();
    const auto N = static_cast<Eigen::Index>(sc.size());
    const double k = sc.wavenumber();
    const double kappa = sc.local_k();
    Eigen::VectorXd F(N);
    for (Eigen::Index j = 0; j < N; ++j) {
        const double Vj = sc.particles[j].volume();
        const double E2 = sc.tweezers[j].amplitude * sc.tweezers[j].amplitude;
        const Vec3c Ej = sc.tweezers[j].amplitude_vector();
        double self = 2.0 / 3.0 * Vj * k * E2 * sc.chi(j);
        double cross = 0.0;
        for (Eigen::Index jp = 0; jp < N; ++jp) {
            if (jp == j) continue;
            const double d = sc.distance(j, jp);
            const Tensor3 P = transverse_projector(sc.pair_axis(j, jp));
            const Vec3c Ejp = sc.tweezers[jp].amplitude_vector();
            cross += sc.chi(jp) * sc.particles[jp].volume() / d *
                     std::imag(std::exp(I * k * d) * Ej.dot(P.cast<std::complex<double>>() * Ejp));
        }
        F[j] = sc.constants.eps0 * sc.chi(j) * Vj * k * k * kappa / (8.0 * M_PI) * (self + cross);
    }
    return F;
}

Eigen::VectorXd spring_renormalization(const Eigen::MatrixXd& C) {
    Eigen::VectorXd K = C.rowwise().sum();  // diagonal is zero by construction
    return K;
}

BindingMatrices binding_matrices(const ArrayScenario& sc) {
    BindingMatrices bm;
    bm.C = coupling_matrix(sc);
    bm.D = diffusion_matrix(sc);
    bm.K = spring_renormalization(bm.C);
    bm.F = static_forces(sc);
    bm.omega.resize(static_cast<Eigen::Index>(sc.size()));
    for (std::size_t j = 0; j < sc.size(); ++j)
        bm.omega[static_cast<Eigen::Index>(j)] = sc.trap_omega(j);
    return bm;
}

IdentityReport structural_identity_check(const Eigen::MatrixXd& C, const Eigen::MatrixXcd& D,
                                         double hbar) {
    if (C.rows() != C.cols() || D.rows() != D.cols() || C.rows() != D.rows())
        throw std::invalid_argument("structural_identity_check: dimension mismatch");
    IdentityReport rep;
    rep.scale = C.cwiseAbs().maxCoeff();
    for (Eigen::Index j = 0; j < C.rows(); ++j)
        for (Eigen::Index jp = 0; jp < C.cols(); ++jp) {
            const double lhs = C(j, jp) - C(jp, j);
            const double rhs = 4.0 / hbar * std::imag(D(j, jp));
            rep.max_violation = std::max(rep.max_violation, std::abs(lhs - rhs));
        }
    rep.normalized = rep.scale > 0.0 ? rep.max_violation / rep.scale : 0.0;
    rep.pass = rep.normalized <= 1e-10;
    return rep;
}

namespace {

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int m = 2; m <= n; ++m) {
                const double p2 = ((2.0 * m - 1.0) * t * p1 - (m - 1.0) * p0) / m;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

struct PairGeometry {
    Vec3 mhat;  // unit vector along d_j - d_j'
    Vec3 e1;    // = e_z (foci lie in the z = 0 plane)
    Vec3 e2;
};

// Angular integral over emission directions n for one particle pair:
//   I(u) = Int d^2n a_j(n) a_j'(n) e^{-i u n.mhat} E_j'^* (1 - n n) E_j,
// with a(n) = kappa - k n_z and u = k d. Directions are parametrized in a
// frame aligned with the pair axis so the oscillatory factor depends on the
// polar variable alone.
std::complex<double> pair_angular_integral(double u, const PairGeometry& geo, double k,
                                           double kappa, const Vec3c& Ej, const Vec3c& Ejp,
                                           int nt, int nphi) {
    std::vector<double> xt, wt;
    gauss_legendre(nt, xt, wt);
    std::complex<double> acc = 0.0;
    for (int a = 0; a < nt; ++a) {
        const double t = xt[a];
        const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
        std::complex<double> ring = 0.0;
        for (int b = 0; b < nphi; ++b) {
            const double phi = 2.0 * M_PI * b / nphi;
            const Vec3 n = t * geo.mhat + s * (std::cos(phi) * geo.e1 + std::sin(phi) * geo.e2);
            const double aj = kappa - k * n[2];
            const Vec3c Pe = (Ej - n.cast<std::complex<double>>() *
                                       (n.cast<std::complex<double>>().dot(Ej)));
            ring += aj * aj * Ejp.dot(Pe);
        }
        ring *= 2.0 * M_PI / nphi;
        acc += wt[a] * std::exp(-I * u * t) * ring;
    }
    return acc;
}

// Neville extrapolation of (x_m, y_m) to x = 0.
std::complex<double> neville_at_zero(const std::vector<double>& x,
                                     std::vector<std::complex<double>> y) {
    const std::size_t n = x.size();
    for (std::size_t level = 1; level < n; ++level)
        for (std::size_t i = 0; i + level < n; ++i)
            y[i] = (x[i + level] * y[i] - x[i] * y[i + 1]) / (x[i + level] - x[i]);
    return y[0];
}

}  // namespace

AngularDiffusion diffusion_from_angular_integral(const ArrayScenario& sc) {
    sc.require_valid();
    const auto N = static_cast<Eigen::Index>(sc.size());
    const double k = sc.wavenumber();
    const double kappa = sc.local_k();
    const double hbar = sc.constants.hbar;

    AngularDiffusion out;
    out.D = Eigen::MatrixXcd::Zero(N, N);
    double worst = 0.0;

    for (Eigen::Index j = 0; j < N; ++j) {
        const Vec3c Ej = sc.tweezers[j].amplitude_vector();
        const double Vj = sc.particles[j].volume();

        // Diagonal: no oscillatory factor, any axis works.
        PairGeometry self{Vec3::UnitX(), Vec3::UnitZ(), Vec3::UnitY()};
        const std::complex<double> Ijj =
            pair_angular_integral(0.0, self, k, kappa, Ej, Ej, 32, 16);
        const double pref_jj =
            hbar * sc.constants.eps0 * k * k * k * sc.chi(j) * sc.chi(j) * Vj * Vj /
            (64.0 * M_PI * M_PI);
        out.D(j, j) = pref_jj * Ijj;

        for (Eigen::Index jp = 0; jp < N; ++jp) {
            if (jp == j) continue;
            const Vec3c Ejp = sc.tweezers[jp].amplitude_vector();
            const double d = sc.distance(j, jp);
            const double u0 = k * d;

            PairGeometry geo;
            geo.mhat = sc.pair_axis(j, jp);
            geo.e1 = Vec3::UnitZ();
            geo.e2 = geo.mhat.cross(geo.e1);

            // I(u) * u is an exact polynomial in 1/u once u is stepped in
            // whole phase periods; extrapolating to 1/u -> 0 isolates the
            // leading far-field coefficient.
            constexpr int kPoints = 6;
            const double umax = u0 + 2.0 * M_PI * (kPoints - 1);
            const int nt = static_cast<int>(std::ceil(0.75 * umax)) + 32;
            const int nphi = 16;
            std::vector<double> xs(kPoints);
            std::vector<std::complex<double>> ys(kPoints), ys_hi(kPoints);
            for (int m = 0; m < kPoints; ++m) {
                const double um = u0 + 2.0 * M_PI * m;
                xs[m] = 1.0 / um;
                ys[m] = um * pair_angular_integral(um, geo, k, kappa, Ej, Ejp, nt, nphi);
                ys_hi[m] = um * pair_angular_integral(um, geo, k, kappa, Ej, Ejp, nt + 16, nphi);
            }
            const std::complex<double> lead = neville_at_zero(xs, ys);
            const std::complex<double> lead_hi = neville_at_zero(xs, ys_hi);
            const double pref = hbar * sc.constants.eps0 * k * k * k * sc.chi(j) * sc.chi(jp) *
                                Vj * sc.particles[jp].volume() / (64.0 * M_PI * M_PI);
            out.D(j, jp) = pref * lead / u0;
            if (std::abs(lead_hi) > 0.0)
                worst = std::max(worst, std::abs(lead - lead_hi) / std::abs(lead_hi));
        }
    }
    out.rel_error = worst;
    out.converged = worst <= 1e-6;
    return out;
}

ArrayScenario unidirectional_pair_config(const ArrayScenario& base,
                                         const UnidirectionalPairOptions& opt) {
    if (base.size() != 2)
        throw std::invalid_argument("unidirectional_pair_config: needs exactly two particles");
    ArrayScenario sc = base;
    const double k = sc.tweezers[0].wavenumber();
    const double w = sc.tweezers[0].waist;

    const auto distance_of = [&](int n) { return (2.0 * M_PI * n + M_PI / 4.0) / k; };
    int n_min = 1;
    while (distance_of(n_min) <= 5.0 * w) ++n_min;
    int n = opt.n.value_or(n_min);
    if (n < n_min && !sc.validation_overridden)
        throw std::invalid_argument(
            "unidirectional_pair_config: k d = pi/4 + 2 pi n fails the far-field gates for n = " +
            std::to_string(n) + "; smallest admissible n is " + std::to_string(n_min));

    const double d = distance_of(n);
    sc.tweezers[0].focus = Vec3::Zero();
    sc.tweezers[1].focus = Vec3(d, 0.0, 0.0);
    // phi_1 - phi_2 = pi/4 realizes E_1 = E_2 e^{i pi/4}
    sc.tweezers[0].phase = M_PI / 4.0;
    sc.tweezers[1].phase = 0.0;
    // polarization angle theta measured from the in-plane transverse direction
    sc.tweezers[0].polarization_angle = M_PI / 2.0 - opt.theta1;
    sc.tweezers[1].polarization_angle = M_PI / 2.0 - opt.theta2;
    return sc;
}

double unidirectional_coupling(const ArrayScenario& pair) {
    if (pair.size() != 2)
        throw std::invalid_argument("unidirectional_coupling: needs exactly two particles");
    const double k = pair.wavenumber();
    const double kappa = pair.local_k();
    const double d = pair.distance(0, 1);
    const Vec3 axis = pair.pair_axis(1, 0);
    const auto cos_theta = [&](const TweezerSpec& tw) {
        // component of the polarization transverse to the pair axis (in plane)
        return tw.polarization().cross(axis).norm();
    };
    return pair.constants.eps0 * pair.chi(0) * pair.chi(1) * pair.particles[0].volume() *
           pair.particles[1].volume() * k * k * kappa * kappa * pair.tweezers[0].amplitude *
           pair.tweezers[1].amplitude * cos_theta(pair.tweezers[0]) * cos_theta(pair.tweezers[1]) /
           (8.0 * M_PI * d);
}

}  // namespace optibind
