#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "optibind/binding.hpp"
#include "optibind/classical.hpp"
#include "optibind/config.hpp"
#include "optibind/csv.hpp"
#include "optibind/langevin.hpp"
#include "optibind/response.hpp"

namespace ob = optibind;

namespace {

struct CommonArgs {
    std::string scenario_path;
    std::string out_dir = ".";
    bool force = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("scenario", args.scenario_path, "scenario file (JSON)")->required();
    cmd->add_option("-o,--out-dir", args.out_dir, "output directory");
    cmd->add_flag("--force", args.force, "waive validation gates");
}

ob::LoadedScenario load(const CommonArgs& args) {
    std::filesystem::create_directories(args.out_dir);
    return ob::parse_scenario(args.scenario_path, {args.force});
}

ob::ChainSpec chain_of(const ob::LoadedScenario& loaded) {
    if (loaded.chain) return *loaded.chain;
    return ob::chain_from_scenario(loaded.scenario);
}

int run_matrices(const CommonArgs& args) {
    const auto loaded = load(args);
    const auto bm = ob::binding_matrices(loaded.scenario);
    const std::string d = args.out_dir;
    ob::write_matrix_csv(d + "/C.csv", bm.C, {{"quantity", "coupling matrix C [N/m]"}});
    ob::write_complex_matrix_csv(d + "/D.csv", bm.D,
                                 {{"quantity", "diffusion matrix D [kg^2 m^2 / s^3]"}});
    ob::write_vector_csv(d + "/K.csv", bm.K, "K", {{"quantity", "spring renormalization [N/m]"}});
    ob::write_vector_csv(d + "/F.csv", bm.F, "F", {{"quantity", "static force [N]"}});
    ob::write_vector_csv(d + "/omega.csv", bm.omega, "omega",
                         {{"quantity", "trap frequency [rad/s]"}});
    const auto rep = ob::structural_identity_check(bm.C, bm.D, loaded.scenario.constants.hbar);
    std::printf("structural identity: max |C_jj' - C_j'j - 4 Im D_jj'/hbar| / max|C| = %.3e  [%s]\n",
                rep.normalized, rep.pass ? "PASS" : "FAIL");
    ob::write_manifest(d, "matrices", loaded.hash, 0,
                       {"C.csv", "D.csv", "K.csv", "F.csv", "omega.csv"});
    return rep.pass ? 0 : 3;
}

int run_spectrum(const CommonArgs& args, std::size_t points, double span_gammas) {
    const auto loaded = load(args);
    const auto chain = chain_of(loaded);
    std::vector<double> grid;
    if (span_gammas > 0.0) {
        const double half = span_gammas * chain.gamma;
        grid.resize(points);
        for (std::size_t i = 0; i < points; ++i)
            grid[i] = chain.omega0 - half +
                      2.0 * half * static_cast<double>(i) / static_cast<double>(points - 1);
    } else {
        grid = ob::default_grid(chain, points);
    }
    const auto res = ob::amplification_sweep(chain, grid);

    const std::string path = args.out_dir + "/spectrum.csv";
    ob::CsvWriter w(path);
    w.meta("N", std::to_string(chain.N));
    w.meta("omega0_over_gamma", ob::CsvWriter::format(chain.omega0 / chain.gamma));
    w.meta("g_over_gamma", ob::CsvWriter::format(chain.g / chain.gamma));
    w.header({"omega_over_gamma", "chi_fwd_abs2", "chi_back_abs2", "chi_single_abs2"});
    for (std::size_t i = 0; i < res.omega.size(); ++i)
        w.row({res.omega[i] / chain.gamma, res.forward[i], res.backward[i], res.single[i]});
    std::printf("spectrum: N=%d peak forward %.6g, peak backward %.6g -> %s\n", chain.N,
                res.peak_forward(), res.peak_backward(), path.c_str());
    ob::write_manifest(args.out_dir, "spectrum", loaded.hash, 0, {"spectrum.csv"});
    return 0;
}

int run_steady_state(const CommonArgs& args) {
    const auto loaded = load(args);
    const auto bm = ob::binding_matrices(loaded.scenario);
    const auto model = ob::build_linear_model(loaded.scenario, bm);
    const auto stab = ob::stability_spectrum(model);

    Eigen::MatrixXd eig(stab.eigenvalues.size(), 2);
    eig.col(0) = stab.eigenvalues.real();
    eig.col(1) = stab.eigenvalues.imag();
    ob::write_matrix_csv(args.out_dir + "/eigenvalues.csv", eig,
                         {{"quantity", "drift eigenvalues re, im [1/s]"}});
    const char* cls = stab.classification == ob::StabilityReport::Stable     ? "stable"
                      : stab.classification == ob::StabilityReport::Marginal ? "marginal"
                                                                             : "unstable";
    std::printf("stability: %s (max Re = %.6g 1/s)\n", cls, stab.max_real);

    const auto cov = ob::steady_state_covariance(model);  // throws if not Hurwitz
    ob::write_matrix_csv(args.out_dir + "/covariance.csv", cov,
                         {{"quantity", "steady-state covariance, state (z_1..z_N, p_1..p_N)"}});
    ob::write_manifest(args.out_dir, "steady-state", loaded.hash, 0,
                       {"eigenvalues.csv", "covariance.csv"});
    return 0;
}

int run_trajectories(const CommonArgs& args, double dt, double dt_periods, std::size_t steps,
                     std::size_t members, std::uint64_t seed, std::size_t stride) {
    const auto loaded = load(args);
    const auto bm = ob::binding_matrices(loaded.scenario);
    const auto model = ob::build_linear_model(loaded.scenario, bm);

    ob::SimOptions opts;
    opts.dt = dt > 0.0 ? dt : dt_periods * 2.0 * M_PI / model.omega.maxCoeff();
    opts.steps = steps;
    opts.members = members;
    opts.seed = seed;
    opts.record_members = 1;
    opts.record_stride = stride;
    const auto ens = ob::simulate_trajectories(model, opts);

    const int N = model.n();
    const std::string path = args.out_dir + "/trajectory.csv";
    ob::CsvWriter w(path);
    w.meta("seed", std::to_string(seed));
    w.meta("dt", ob::CsvWriter::format(opts.dt));
    w.meta("members", std::to_string(members));
    std::vector<std::string> cols{"t"};
    for (int j = 0; j < N; ++j) cols.push_back("z" + std::to_string(j + 1));
    for (int j = 0; j < N; ++j) cols.push_back("p" + std::to_string(j + 1));
    w.header(cols);
    for (std::size_t i = 0; i < ens.times.size(); ++i) {
        std::vector<double> row{ens.times[i]};
        for (int d = 0; d < model.dim(); ++d)
            row.push_back(ens.paths[0](d, static_cast<Eigen::Index>(i)) + model.offsets[d]);
        w.row(row);
    }
    ob::write_matrix_csv(args.out_dir + "/ensemble_covariance.csv", ob::ensemble_covariance(ens),
                         {{"quantity", "windowed ensemble covariance"},
                          {"samples", std::to_string(ens.samples)}});
    ob::write_manifest(args.out_dir, "trajectories", loaded.hash, seed,
                       {"trajectory.csv", "ensemble_covariance.csv"});
    return 0;
}

int run_unidirectional_check(const CommonArgs& args, double theta1, double theta2, int n) {
    const auto loaded = load(args);
    ob::UnidirectionalPairOptions opt;
    opt.theta1 = theta1;
    opt.theta2 = theta2;
    if (n > 0) opt.n = n;
    const auto pair = ob::unidirectional_pair_config(loaded.scenario, opt);
    const auto C = ob::coupling_matrix(pair);
    const auto D = ob::diffusion_matrix(pair);
    const double hbar = pair.constants.hbar;
    const std::complex<double> expected =
        std::complex<double>(1.0, 1.0) * hbar * C(0, 1) / 4.0;

    const bool c_ok = std::abs(C(1, 0)) <= 1e-10 * std::abs(C(0, 1));
    const bool d_ok = std::abs(D(0, 1) - expected) <= 1e-10 * std::abs(D(0, 1));
    std::printf("C12 = %.9e N/m\nC21 = %.9e N/m   (|C21|/|C12| = %.3e)  [%s]\n", C(0, 1), C(1, 0),
                std::abs(C(1, 0) / C(0, 1)), c_ok ? "PASS" : "FAIL");
    std::printf("D12 = %.9e + %.9e i  vs  (1+i) hbar C/4 = %.9e + %.9e i  [%s]\n",
                D(0, 1).real(), D(0, 1).imag(), expected.real(), expected.imag(),
                d_ok ? "PASS" : "FAIL");
    ob::write_manifest(args.out_dir, "unidirectional-check", loaded.hash, 0, {});
    return (c_ok && d_ok) ? 0 : 3;
}

int run_amplification_sweep(const CommonArgs& args, const std::vector<int>& sizes,
                            std::size_t points) {
    const auto loaded = load(args);
    const auto base = chain_of(loaded);
    const int n_max = *std::max_element(sizes.begin(), sizes.end());
    const auto grid = ob::default_grid(base.with_size(n_max), points);

    std::vector<ob::SpectrumResult> results;
    for (int N : sizes) results.push_back(ob::amplification_sweep(base.with_size(N), grid));

    const std::string path = args.out_dir + "/amplification.csv";
    ob::CsvWriter w(path);
    w.meta("omega0_over_gamma", ob::CsvWriter::format(base.omega0 / base.gamma));
    w.meta("g_over_gamma", ob::CsvWriter::format(base.g / base.gamma));
    std::vector<std::string> cols{"omega_over_gamma"};
    for (int N : sizes) {
        cols.push_back("fwd_N" + std::to_string(N));
        cols.push_back("back_N" + std::to_string(N));
    }
    cols.push_back("single");
    w.header(cols);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<double> row{grid[i] / base.gamma};
        for (const auto& r : results) {
            row.push_back(r.forward[i]);
            row.push_back(r.backward[i]);
        }
        row.push_back(results[0].single[i]);
        w.row(row);
    }

    const auto snr = ob::snr_analysis(base, sizes);
    ob::CsvWriter ws(args.out_dir + "/snr.csv");
    ws.header({"N", "signal", "noise", "ratio", "normalized"});
    for (const auto& p : snr)
        ws.row({static_cast<double>(p.N), p.signal, p.noise, p.ratio, p.normalized});

    for (std::size_t i = 0; i < sizes.size(); ++i)
        std::printf("N=%-3d peak forward %.6g  peak backward %.6g  snr(normalized) %.6g\n",
                    sizes[i], results[i].peak_forward(), results[i].peak_backward(),
                    snr[i].normalized);
    ob::write_manifest(args.out_dir, "amplification-sweep", loaded.hash, 0,
                       {"amplification.csv", "snr.csv"});
    return 0;
}

int run_oracle(const CommonArgs& args) {
    const auto loaded = load(args);
    const auto& sc = loaded.scenario;

    const auto C = ob::coupling_matrix(sc);
    const auto grad = ob::coupling_from_force_gradient(sc);
    const double c_scale = C.cwiseAbs().maxCoeff();
    const double c_dev = (grad.C - C).cwiseAbs().maxCoeff() / c_scale;

    const auto D = ob::diffusion_matrix(sc);
    const auto ang = ob::diffusion_from_angular_integral(sc);
    const double d_scale = D.cwiseAbs().maxCoeff();
    const double d_dev = (ang.D - D).cwiseAbs().maxCoeff() / d_scale;

    const bool ok = c_dev <= 1e-6 && d_dev <= 1e-6;
    std::printf("coupling oracle:  max |C_grad - C| / max|C| = %.3e  (fd error %.1e)\n", c_dev,
                grad.rel_fd_error);
    std::printf("diffusion oracle: max |D_ang - D| / max|D| = %.3e  (quadrature error %.1e)\n",
                d_dev, ang.rel_error);
    std::printf("%s\n", ok ? "PASS" : "FAIL");
    ob::write_manifest(args.out_dir, "oracle", loaded.hash, 0, {});
    return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"optibind: simulation and analysis of optically bound nanoparticle arrays"};
    app.require_subcommand(1);

    CommonArgs a_matrices, a_spectrum, a_steady, a_traj, a_uni, a_sweep, a_oracle;

    auto* c_matrices = app.add_subcommand("matrices", "coupling/diffusion/spring/force matrices");
    add_common(c_matrices, a_matrices);

    auto* c_spectrum = app.add_subcommand("spectrum", "mechanical susceptibility sweep");
    add_common(c_spectrum, a_spectrum);
    std::size_t sp_points = 2001;
    double sp_span = 0.0;
    c_spectrum->add_option("--grid-points", sp_points, "number of frequency samples");
    c_spectrum->add_option("--grid-span", sp_span, "half-width of the grid in units of gamma");

    auto* c_steady = app.add_subcommand("steady-state", "stability spectrum and Lyapunov covariance");
    add_common(c_steady, a_steady);

    auto* c_traj = app.add_subcommand("trajectories", "stochastic trajectory ensemble");
    add_common(c_traj, a_traj);
    double tr_dt = 0.0, tr_dt_periods = 0.02;
    std::size_t tr_steps = 20000, tr_members = 1, tr_stride = 10;
    std::uint64_t tr_seed = 0;
    c_traj->add_option("--dt", tr_dt, "time step [s]");
    c_traj->add_option("--dt-periods", tr_dt_periods, "time step as a fraction of the fastest period");
    c_traj->add_option("--steps", tr_steps, "number of steps");
    c_traj->add_option("--ensemble", tr_members, "ensemble members");
    c_traj->add_option("--seed", tr_seed, "RNG seed");
    c_traj->add_option("--stride", tr_stride, "recording stride");

    auto* c_uni = app.add_subcommand("unidirectional-check", "build and verify the one-way pair");
    add_common(c_uni, a_uni);
    double un_theta1 = 0.0, un_theta2 = 0.0;
    int un_n = 0;
    c_uni->add_option("--theta1", un_theta1, "polarization angle 1 from transverse [rad]");
    c_uni->add_option("--theta2", un_theta2, "polarization angle 2 from transverse [rad]");
    c_uni->add_option("-n", un_n, "phase winding integer in k d = 2 pi n + pi/4");

    auto* c_sweep = app.add_subcommand("amplification-sweep", "forward/backward gain across chain sizes");
    add_common(c_sweep, a_sweep);
    std::vector<int> sw_sizes{10, 20, 40};
    std::size_t sw_points = 2001;
    c_sweep->add_option("--N-list", sw_sizes, "chain sizes")->delimiter(',');
    c_sweep->add_option("--grid-points", sw_points, "number of frequency samples");

    auto* c_oracle = app.add_subcommand("oracle", "cross-check C and D against independent routes");
    add_common(c_oracle, a_oracle);

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_matrices->parsed()) return run_matrices(a_matrices);
        if (c_spectrum->parsed()) return run_spectrum(a_spectrum, sp_points, sp_span);
        if (c_steady->parsed()) return run_steady_state(a_steady);
        if (c_traj->parsed())
            return run_trajectories(a_traj, tr_dt, tr_dt_periods, tr_steps, tr_members, tr_seed,
                                    tr_stride);
        if (c_uni->parsed()) return run_unidirectional_check(a_uni, un_theta1, un_theta2, un_n);
        if (c_sweep->parsed()) return run_amplification_sweep(a_sweep, sw_sizes, sw_points);
        if (c_oracle->parsed()) return run_oracle(a_oracle);
    } catch (const ob::IoError& e) {
        std::cerr << "error[io]: " << e.what() << "\n";
        return 4;
    } catch (const ob::ConfigError& e) {
        std::cerr << "error[validation]: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error[validation]: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "error[numeric]: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
