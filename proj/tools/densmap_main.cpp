// SPDX-License-Identifier: Apache-2.0
//
// densmap command-line front end. Subcommands read a flat key = value config
// (--config PATH) plus --set overrides, and write CSV tables, DPMF binaries
// and a manifest into io.outdir. Exit codes: 0 success, 2 validation error,
// 3 numerical failure (reports are still written when possible).

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "densmap/config.hpp"
#include "densmap/dpmf.hpp"
#include "densmap/functionals.hpp"
#include "densmap/inversion.hpp"
#include "densmap/kernels.hpp"
#include "densmap/response.hpp"
#include "densmap/sturm_liouville.hpp"

namespace fs = std::filesystem;
using namespace densmap;
using io::Config;

namespace {

constexpr const char* kVersion = "densmap 0.1.0";

const std::set<std::string> kCommonKeys = {
    "io.outdir", "grid.L", "grid.M", "grid.boundary", "grid.origin",
    "time.T", "time.steps",
    "potential.form", "potential.v0", "potential.k", "potential.omega", "potential.x0",
    "potential.file", "potential.drive", "potential.drive_form", "potential.drive_amp",
    "potential.drive_omega", "potential.drive_k",
    "state.form", "state.sigma", "state.x0", "state.k0", "state.index", "state.file",
    "hamiltonian.N", "hamiltonian.interaction", "hamiltonian.lambda", "hamiltonian.a",
};

std::set<std::string> with_common(std::initializer_list<std::string> extra) {
    std::set<std::string> keys = kCommonKeys;
    keys.insert(extra);
    return keys;
}

Grid grid_from(const Config& cfg) {
    const std::string b = cfg.get_string("grid.boundary", "periodic");
    Boundary boundary;
    if (b == "periodic")
        boundary = Boundary::Periodic;
    else if (b == "dirichlet")
        boundary = Boundary::Dirichlet;
    else
        throw io::ConfigError("grid.boundary must be periodic or dirichlet");
    return build_grid(cfg.get_double("grid.L", 2.0 * std::numbers::pi),
                      std::size_t(cfg.get_int("grid.M", 64)), boundary,
                      cfg.get_double("grid.origin", 0.0));
}

TimeGrid tgrid_from(const Config& cfg) {
    return make_time_grid(cfg.get_double("time.T", 1.0),
                          std::size_t(cfg.get_int("time.steps", 200)));
}

// v(t, x) = static(x) + envelope(t) * shape(x)
struct PotentialModel {
    std::function<double(double)> statics;
    std::function<double(double)> shape;
    std::function<double(double)> envelope;

    double operator()(double t, double x) const { return statics(x) + envelope(t) * shape(x); }
};

PotentialModel potential_model(const Config& cfg) {
    PotentialModel model;
    const std::string form = cfg.get_string("potential.form", "zero");
    const double v0 = cfg.get_double("potential.v0", 1.0);
    const double k = cfg.get_double("potential.k", 1.0);
    const double omega = cfg.get_double("potential.omega", 1.0);
    const double x0 = cfg.get_double("potential.x0", 0.0);
    if (form == "zero")
        model.statics = [](double) { return 0.0; };
    else if (form == "constant")
        model.statics = [v0](double) { return v0; };
    else if (form == "cosine")
        model.statics = [v0, k](double x) { return v0 * std::cos(k * x); };
    else if (form == "harmonic")
        model.statics = [omega, x0](double x) { return 0.5 * omega * omega * (x - x0) * (x - x0); };
    else
        throw io::ConfigError("unknown potential.form: " + form);

    const std::string drive = cfg.get_string("potential.drive", "none");
    const double amp = cfg.get_double("potential.drive_amp", 0.0);
    const double dw = cfg.get_double("potential.drive_omega", 1.0);
    const double dk = cfg.get_double("potential.drive_k", 1.0);
    const std::string dform = cfg.get_string("potential.drive_form", "cosine");
    if (drive == "none") {
        model.envelope = [](double) { return 0.0; };
        model.shape = [](double) { return 0.0; };
    } else {
        if (drive == "sin")
            model.envelope = [amp, dw](double t) { return amp * std::sin(dw * t); };
        else if (drive == "cos")
            model.envelope = [amp, dw](double t) { return amp * std::cos(dw * t); };
        else
            throw io::ConfigError("potential.drive must be none, sin or cos");
        if (dform == "cosine")
            model.shape = [dk](double x) { return std::cos(dk * x); };
        else if (dform == "sine")
            model.shape = [dk](double x) { return std::sin(dk * x); };
        else if (dform == "dipole")
            model.shape = [](double x) { return x; };
        else
            throw io::ConfigError("potential.drive_form must be cosine, sine or dipole");
    }
    return model;
}

RealField sample_static(const PotentialModel& model, const Grid& g) {
    RealField v(g.M);
    for (std::size_t m = 0; m < g.M; ++m) v[m] = model.statics(g.x[m]);
    return v;
}

PotentialTrajectory sample_trajectory(const PotentialModel& model, const Grid& g,
                                      const TimeGrid& tg) {
    std::vector<RealField> fields(tg.nodes(), RealField(g.M));
    for (std::size_t i = 0; i < tg.nodes(); ++i)
        for (std::size_t m = 0; m < g.M; ++m) fields[i][m] = model(tg.time(i), g.x[m]);
    return make_potential_trajectory(std::move(fields), g, tg);
}

HamiltonianSpec spec_from(const Config& cfg, const Grid& g, const PotentialModel& model) {
    const int N = int(cfg.get_int("hamiltonian.N", 1));
    std::optional<SoftCore> w;
    if (cfg.get_string("hamiltonian.interaction", "none") == "softcore")
        w = SoftCore{cfg.get_double("hamiltonian.lambda", 1.0), cfg.get_double("hamiltonian.a", 1.0)};
    return make_spec(g, sample_static(model, g), N, w);
}

WaveFunction state_from(const Config& cfg, const Grid& g, const HamiltonianSpec& spec) {
    const std::string form = cfg.get_string("state.form", "ground");
    if (form == "constant") {
        if (spec.particles != 1) throw io::ConfigError("state.form=constant needs N = 1");
        return normalize(make_wavefunction(ComplexField(g.M, 1.0), g));
    }
    if (form == "ground") return ground_state(spec).psi;
    if (form == "eigen") {
        const std::size_t index = std::size_t(cfg.get_int("state.index", 0));
        const SpectralDecomposition sd = spectrum(spec, index + 1);
        ComplexField amp(sd.eigenvectors[index].size());
        for (std::size_t m = 0; m < amp.size(); ++m) amp[m] = sd.eigenvectors[index][m];
        return normalize(make_wavefunction(std::move(amp), g,
                                           spec.particles == 2 ? Symmetry::Symmetric
                                                               : Symmetry::None));
    }
    if (form == "gaussian") {
        if (spec.particles != 1) throw io::ConfigError("state.form=gaussian needs N = 1");
        const double sigma = cfg.get_double("state.sigma", 1.0);
        const double x0 = cfg.get_double("state.x0", 0.0);
        const double k0 = cfg.get_double("state.k0", 0.0);
        ComplexField amp(g.M);
        for (std::size_t m = 0; m < g.M; ++m) {
            const double u = g.x[m] - x0;
            amp[m] = std::polar(std::exp(-u * u / (2.0 * sigma * sigma)), k0 * g.x[m]);
        }
        return normalize(make_wavefunction(std::move(amp), g));
    }
    if (form == "file") {
        const io::DpmfData d = io::read_dpmf(cfg.require_string("state.file"));
        if (!d.is_complex) throw io::ConfigError("state.file must hold complex amplitudes");
        return normalize(make_wavefunction(d.complex_, g));
    }
    throw io::ConfigError("unknown state.form: " + form);
}

void write_manifest(const fs::path& outdir, const Config& cfg, double seconds) {
    std::ofstream out(outdir / "manifest.txt");
    out << kVersion << "\n";
    out << "simd_backend = " << kernels::active_name() << "\n";
    out << "wall_time_seconds = " << io::format_double(seconds) << "\n";
    for (const auto& [key, value] : cfg.entries()) out << key << " = " << value << "\n";
}

void write_potential_dpmf(const fs::path& path, const PotentialTrajectory& v) {
    std::vector<double> flat;
    flat.reserve(v.v.size() * v.grid.M);
    for (const RealField& f : v.v) flat.insert(flat.end(), f.begin(), f.end());
    io::write_dpmf(path.string(), {v.v.size(), v.grid.M}, flat.data());
}

void write_density_dpmf(const fs::path& path, const DensityTrajectory& n) {
    std::vector<double> flat;
    flat.reserve(n.n.size() * n.grid.M);
    for (const RealField& f : n.n) flat.insert(flat.end(), f.begin(), f.end());
    io::write_dpmf(path.string(), {n.n.size(), n.grid.M}, flat.data());
}

DensityTrajectory density_from_config(const Config& cfg, const Grid& g, const TimeGrid& tg,
                                      const std::string& file_key, int particles) {
    if (cfg.has(file_key)) {
        const io::DpmfData d = io::read_dpmf(cfg.require_string(file_key));
        if (d.rank != 2 || d.is_complex || d.dims[1] != g.M || d.dims[0] != tg.nodes())
            throw io::ConfigError(file_key + ": expected a real (nodes x M) trajectory");
        DensityTrajectory n;
        n.grid = g;
        n.tgrid = tg;
        n.particles = particles;
        n.n.assign(tg.nodes(), RealField(g.M));
        for (std::size_t i = 0; i < tg.nodes(); ++i)
            for (std::size_t m = 0; m < g.M; ++m) n.n[i][m] = d.real[i * g.M + m];
        return n;
    }
    throw io::ConfigError("missing " + file_key);
}

// ---------------------------------------------------------------- subcommands

int run_propagate(const Config& cfg, const fs::path& outdir) {
    const Grid g = grid_from(cfg);
    const TimeGrid tg = tgrid_from(cfg);
    const PotentialModel model = potential_model(cfg);
    const HamiltonianSpec spec = spec_from(cfg, g, model);
    const WaveFunction psi0 = state_from(cfg, g, spec);
    const PotentialTrajectory v = sample_trajectory(model, g, tg);
    const Trajectory traj = propagate_stepwise_static(psi0, v, spec);

    io::CsvWriter norm_csv((outdir / "norm.csv").string(), {"t", "norm"});
    io::CsvWriter obs_csv((outdir / "observables.csv").string(),
                          {"t", "norm", "x_mean", "width_sq"});
    for (std::size_t i = 0; i < tg.nodes(); ++i) {
        const double nrm = norm(traj.states[i]);
        const RealField n = density(traj.states[i]);
        double x1 = 0.0, x2 = 0.0;
        for (std::size_t m = 0; m < g.M; ++m) {
            x1 += g.x[m] * n[m];
            x2 += g.x[m] * g.x[m] * n[m];
        }
        x1 *= g.dx;
        x2 *= g.dx;
        norm_csv.row({tg.time(i), nrm});
        obs_csv.row({tg.time(i), nrm, x1, 2.0 * (x2 - x1 * x1)});
    }
    write_density_dpmf(outdir / "density.dpmf", density_trajectory(traj, spec.particles));
    const std::vector<std::uint64_t> psi_dims =
        traj.states.back().rank == 1 ? std::vector<std::uint64_t>{g.M}
                                     : std::vector<std::uint64_t>{g.M, g.M};
    io::write_dpmf((outdir / "psi_final.dpmf").string(), psi_dims,
                   traj.states.back().amplitudes.data());
    return 0;
}

int run_spectrum(const Config& cfg, const fs::path& outdir) {
    const Grid g = grid_from(cfg);
    const PotentialModel model = potential_model(cfg);
    const HamiltonianSpec spec = spec_from(cfg, g, model);
    const std::size_t K = std::size_t(cfg.get_int("spectrum.K", 8));
    const SpectralDecomposition sd = spectrum(spec, K);
    io::CsvWriter csv((outdir / "eigen.csv").string(), {"k", "energy"});
    for (std::size_t k = 0; k < K; ++k) csv.row({double(k), sd.eigenvalues[k]});
    std::vector<double> flat;
    for (const RealField& e : sd.eigenvectors) flat.insert(flat.end(), e.begin(), e.end());
    io::write_dpmf((outdir / "states.dpmf").string(), {K, sd.eigenvectors[0].size()},
                   flat.data());
    return 0;
}

// forward data generation shared by the inversion pipelines
struct ForwardData {
    Grid grid;
    TimeGrid tgrid;
    HamiltonianSpec spec;
    WaveFunction psi0;
    PotentialTrajectory v_true;
    DensityTrajectory n;
};

ForwardData forward_data(const Config& cfg) {
    ForwardData fd{grid_from(cfg), tgrid_from(cfg), {}, {}, {}, {}};
    const PotentialModel model = potential_model(cfg);
    fd.spec = spec_from(cfg, fd.grid, model);
    fd.psi0 = state_from(cfg, fd.grid, fd.spec);
    fd.v_true = sample_trajectory(model, fd.grid, fd.tgrid);
    if (cfg.has("inversion.density_file")) {
        fd.n = density_from_config(cfg, fd.grid, fd.tgrid, "inversion.density_file",
                                   fd.spec.particles);
    } else {
        const Trajectory traj = propagate_stepwise_static(fd.psi0, fd.v_true, fd.spec);
        fd.n = density_trajectory(traj, fd.spec.particles);
    }
    return fd;
}

int run_invert_fp(const Config& cfg, const fs::path& outdir) {
    const ForwardData fd = forward_data(cfg);
    InversionConfig icfg;
    icfg.mixing = cfg.get_double("inversion.alpha", 1.0);
    icfg.tol_v = cfg.get_double("inversion.tol", 1e-8);
    icfg.max_iterations = std::size_t(cfg.get_int("inversion.max_iter", 200));
    if (cfg.has("inversion.restart_interval"))
        icfg.restart_interval = cfg.get_double("inversion.restart_interval", 0.0);
    if (cfg.get_string("inversion.degeneracy", "fail") == "reuse")
        icfg.degeneracy = DegeneracyPolicy::ReuseLast;
    const std::string guess = cfg.get_string("inversion.v0", "zero");
    if (guess == "static") {
        const RealField vs = fd.spec.v_static;
        icfg.v0 = make_potential_trajectory(
            std::vector<RealField>(fd.tgrid.nodes(), vs), fd.grid, fd.tgrid);
    } else if (guess != "zero") {
        throw io::ConfigError("inversion.v0 must be zero or static");
    }

    auto [v, report] = invert_fixed_point(fd.n, fd.psi0, fd.spec, icfg);

    write_potential_dpmf(outdir / "v_recovered.dpmf", v);
    io::CsvWriter rep_csv((outdir / "report.csv").string(), {"iter", "residual", "ratio"});
    for (std::size_t i = 0; i < report.residuals.size(); ++i)
        rep_csv.row({double(i), report.residuals[i],
                     i == 0 ? std::nan("") : report.ratios[i - 1]});
    const RhoReport rho = verify_rho_problem(v, fd.n, fd.psi0, fd.spec);
    io::CsvWriter rho_csv((outdir / "rho_verdict.csv").string(),
                          {"max_l1", "rho0_l1", "dt_rho0_l1", "max_integral"});
    rho_csv.row({rho.max_l1, rho.rho0_l1, rho.dt_rho0_l1, rho.max_integral});
    return report.converged ? 0 : 3;
}

int run_invert_hj(const Config& cfg, const fs::path& outdir, bool kohn_sham) {
    const ForwardData fd = forward_data(cfg);
    HJReport hj;
    RealField s0(fd.grid.M, 0.0);
    const PotentialTrajectory v = kohn_sham ? construct_ks_potential(fd.n, s0, &hj)
                                            : invert_single_particle_hj(fd.n, s0, &hj);
    write_potential_dpmf(outdir / "v_recovered.dpmf", v);

    io::CsvWriter sum_csv((outdir / "summary.csv").string(),
                          {"s0_consistency", "sup_gap_to_generator"});
    double gap = 0.0;
    if (!kohn_sham) {
        for (std::size_t i = 0; i < fd.tgrid.nodes(); ++i) {
            RealField truth = fd.v_true.v[i];
            remove_mean(truth, fd.grid);
            RealField diff(fd.grid.M);
            for (std::size_t m = 0; m < fd.grid.M; ++m) diff[m] = v.v[i][m] - truth[m];
            gap = std::max(gap, norm_l2(diff, fd.grid));
        }
    } else {
        // forward Kohn-Sham check: one doubly occupied orbital under v
        ComplexField amp(fd.grid.M);
        for (std::size_t m = 0; m < fd.grid.M; ++m) amp[m] = std::sqrt(0.5 * fd.n.n[0][m]);
        const WaveFunction orbital = normalize(make_wavefunction(amp, fd.grid));
        const Trajectory ks = propagate_stepwise_static(orbital, v, make_spec(fd.grid));
        for (std::size_t i = 0; i < fd.tgrid.nodes(); ++i) {
            const RealField nks = density(ks.states[i]);
            RealField diff(fd.grid.M);
            for (std::size_t m = 0; m < fd.grid.M; ++m)
                diff[m] = 2.0 * nks[m] - fd.n.n[i][m];
            gap = std::max(gap, norm_l1(diff, fd.grid));
        }
    }
    sum_csv.row({hj.s0_consistency, gap});
    return 0;
}

int run_invert_taylor(const Config& cfg, const fs::path& outdir) {
    const ForwardData fd = forward_data(cfg);
    const int K = int(cfg.get_int("taylor.K", 1));
    if (K > 1)
        throw io::ConfigError("invert-taylor: data stencils provide derivatives through order 3 (K <= 1)");
    // derivative data from a centered window of a midpoint-sampled forward
    // run, differentiated on a coarser subgrid (per-step potential kinks
    // would pollute the third-derivative stencils)
    const std::size_t c = fd.tgrid.nodes() / 2;
    const std::size_t stride = std::max<std::size_t>(1, fd.tgrid.steps / 20);
    if (c < 3 * stride || c + 3 * stride >= fd.tgrid.nodes())
        throw io::ConfigError("invert-taylor: need at least 13 time nodes");
    const Trajectory traj = propagate_stepwise_static(fd.psi0, fd.v_true, fd.spec, {true});
    const DensityTrajectory n = density_trajectory(traj, fd.spec.particles);
    const double h = fd.tgrid.dt * double(stride);
    std::vector<RealField> coeffs(std::size_t(K) + 3, RealField(fd.grid.M, 0.0));
    coeffs[0] = n.n[c];
    for (std::size_t m = 0; m < fd.grid.M; ++m) {
        auto f = [&](int off) { return n.n[c + off * stride][m]; };
        coeffs[1][m] = (f(-2) - 8 * f(-1) + 8 * f(1) - f(2)) / (12 * h);
        coeffs[2][m] = (-f(-2) + 16 * f(-1) - 30 * f(0) + 16 * f(1) - f(2)) / (12 * h * h);
        coeffs[3][m] =
            (f(-3) - 8 * f(-2) + 13 * f(-1) - 13 * f(1) + 8 * f(2) - f(3)) / (8 * h * h * h);
    }

    // the data window is anchored at t_c
    const TaylorResult res = invert_taylor(coeffs, traj.states[c], fd.spec, K);

    std::vector<double> flat;
    for (const RealField& vc : res.v_coeffs) flat.insert(flat.end(), vc.begin(), vc.end());
    io::write_dpmf((outdir / "v_coeffs.dpmf").string(),
                   {res.v_coeffs.size(), fd.grid.M}, flat.data());
    io::CsvWriter ratio_csv((outdir / "ratio.csv").string(), {"k", "norm_over_factorial"});
    for (std::size_t k = 0; k < res.ratio_test.size(); ++k)
        ratio_csv.row({double(k), res.ratio_test[k]});
    return 0;
}

int run_verify_rho(const Config& cfg, const fs::path& outdir) {
    const ForwardData fd = forward_data(cfg);
    PotentialTrajectory v = fd.v_true;
    if (cfg.has("verify.v_file")) {
        const io::DpmfData d = io::read_dpmf(cfg.require_string("verify.v_file"));
        if (d.rank != 2 || d.is_complex || d.dims[0] != fd.tgrid.nodes() ||
            d.dims[1] != fd.grid.M)
            throw io::ConfigError("verify.v_file: expected a real (nodes x M) trajectory");
        for (std::size_t i = 0; i < fd.tgrid.nodes(); ++i)
            for (std::size_t m = 0; m < fd.grid.M; ++m)
                v.v[i][m] = d.real[i * fd.grid.M + m];
    }
    const RhoReport rho = verify_rho_problem(v, fd.n, fd.psi0, fd.spec);
    io::CsvWriter csv((outdir / "rho_verdict.csv").string(),
                      {"max_l1", "rho0_l1", "dt_rho0_l1", "max_integral"});
    csv.row({rho.max_l1, rho.rho0_l1, rho.dt_rho0_l1, rho.max_integral});
    return 0;
}

int run_respond(const Config& cfg, const fs::path& outdir) {
    const Grid g = grid_from(cfg);
    const PotentialModel model = potential_model(cfg);
    const HamiltonianSpec spec = spec_from(cfg, g, model);
    const std::string task = cfg.get_string("response.task", "lehmann");
    if (task == "lehmann") {
        const std::size_t K = std::size_t(cfg.get_int("response.K", 6));
        const double gamma = cfg.get_double("response.gamma", 0.01);
        const std::size_t points = std::size_t(cfg.get_int("response.omega_points", 400));
        const ResponseKernel kernel =
            chi_lehmann(spec, K, gamma, default_omega_grid(spec, K, points));
        io::CsvWriter exc((outdir / "excitations.csv").string(), {"k", "omega_k"});
        for (std::size_t k = 0; k < kernel.excitations.size(); ++k)
            exc.row({double(k + 1), kernel.excitations[k]});
        const std::vector<double> abs_spec = kernel.integrated_abs();
        io::CsvWriter spec_csv((outdir / "chi_spectrum.csv").string(),
                               {"omega", "integrated_abs"});
        for (std::size_t i = 0; i < kernel.omega.size(); ++i)
            spec_csv.row({kernel.omega[i], abs_spec[i]});
        return 0;
    }
    if (task == "kick") {
        const TimeGrid tg = tgrid_from(cfg);
        const std::size_t site = std::size_t(cfg.get_int("response.site", long(g.M / 3)));
        const double kappa = cfg.get_double("response.kappa", 1e-2);
        const std::size_t probe = std::size_t(cfg.get_int("response.probe", long(2 * g.M / 3)));
        const KickResponse r = chi_time_domain(spec, site, tg, kappa);
        io::CsvWriter csv((outdir / "kick_response.csv").string(), {"t", "dn_probe"});
        std::vector<double> series(tg.nodes());
        for (std::size_t i = 0; i < tg.nodes(); ++i) {
            series[i] = r.dn[i][probe];
            csv.row({tg.time(i), series[i]});
        }
        io::CsvWriter sum((outdir / "kick_summary.csv").string(),
                          {"dominant_frequency", "site", "kappa"});
        sum.row({dominant_frequency(series, tg.dt), double(site), kappa});
        std::vector<double> flat;
        for (const RealField& f : r.dn) flat.insert(flat.end(), f.begin(), f.end());
        io::write_dpmf((outdir / "dn.dpmf").string(), {tg.nodes(), g.M}, flat.data());
        return 0;
    }
    if (task == "kubo") {
        const TimeGrid tg = tgrid_from(cfg);
        const WaveFunction psi0 = state_from(cfg, g, spec);
        const PotentialTrajectory v = sample_trajectory(model, g, tg);
        // perturbation: sine drive at unit amplitude by default
        const double wk = cfg.get_double("response.w_k", 1.0);
        std::vector<RealField> wf(tg.nodes(), RealField(g.M));
        for (std::size_t i = 0; i < tg.nodes(); ++i)
            for (std::size_t m = 0; m < g.M; ++m)
                wf[i][m] = std::sin(tg.time(i)) * std::sin(wk * g.x[m]);
        const PotentialTrajectory w = make_potential_trajectory(std::move(wf), g, tg);
        RealField dip(g.M);
        for (std::size_t m = 0; m < g.M; ++m) dip[m] = std::sin(g.x[m]);
        const std::vector<double> resp =
            kubo_response(multiplicative_operator(dip), psi0, v, w, spec);
        io::CsvWriter csv((outdir / "kubo.csv").string(), {"t", "response"});
        for (std::size_t i = 0; i < tg.nodes(); ++i) csv.row({tg.time(i), resp[i]});
        return 0;
    }
    throw io::ConfigError("response.task must be lehmann, kick or kubo");
}

int run_functionals(const Config& cfg, const fs::path& outdir) {
    const std::string form = cfg.get_string("density.form", "uniform_ball");
    const double R = cfg.get_double("density.R", 1.0);
    const double N = cfg.get_double("density.N", 1.0);
    const std::size_t points = std::size_t(cfg.get_int("density.points", 4000));
    RealField values(points);
    if (form == "uniform_ball") {
        const double n0 = N / (4.0 / 3.0 * std::numbers::pi * R * R * R);
        values.assign(points, n0);
    } else if (form == "exponential") {
        const double alpha = cfg.get_double("density.alpha", 1.0);
        const double norm3d = N * alpha * alpha * alpha / (8.0 * std::numbers::pi);
        for (std::size_t i = 0; i < points; ++i) {
            const double r = R * double(i + 1) / double(points);
            values[i] = norm3d * std::exp(-alpha * r);
        }
    } else {
        throw io::ConfigError("density.form must be uniform_ball or exponential");
    }
    const RadialDensity d = make_radial_density(R, points, values);
    RealField vext;
    if (cfg.get_string("vext.form", "none") == "coulomb") {
        const double Z = cfg.get_double("vext.Z", 1.0);
        vext.resize(points);
        for (std::size_t i = 0; i < points; ++i) vext[i] = -Z / d.r[i];
    }
    const LdaComponents c = lda_components(d, vext);
    io::CsvWriter comp((outdir / "components.csv").string(),
                       {"T_TF", "V_H", "V_x", "V_ext", "E_total"});
    comp.row({c.t_tf, c.v_h, c.v_x, c.v_ext, c.e_total});

    const double scale = cfg.get_double("functionals.scale", 2.0);
    const ScalingCheck s = lda_scaling_check(d, scale);
    io::CsvWriter sc((outdir / "scaling.csv").string(),
                     {"c", "t_ratio", "x_ratio", "h_ratio", "worst_relative_error"});
    sc.row({scale, s.t_ratio, s.x_ratio, s.h_ratio, s.worst_relative_error});
    return 0;
}

int run_diagnose(const Config& cfg, const fs::path& outdir) {
    const Grid g = grid_from(cfg);
    const PotentialModel model = potential_model(cfg);
    const HamiltonianSpec spec = spec_from(cfg, g, model);
    const std::string task = cfg.get_string("diagnose.task", "weights");
    if (task == "weights") {
        const WaveFunction psi = state_from(cfg, g, spec);
        const RealField n = density(psi);
        const double s = cfg.get_double("diagnose.s", 1.0);
        const WeightReport wr = weight_diagnostics(n, s, g, nullptr, &psi);
        const SLProblem p = make_sl_problem(n, RealField(g.M, 0.0), g);
        AdmissibilityReport ar;
        ar.passes = false;
        try {
            ar = admissibility(p, s);
        } catch (const std::exception&) {
        }
        io::CsvWriter csv((outdir / "weight_report.csv").string(),
                          {"integral_n_minus_s", "weizsaecker", "grad_psi_bound", "lambda1",
                           "solution_bound", "passes"});
        csv.row({wr.integral_n_minus_s, wr.weizsaecker, wr.grad_psi_bound.value_or(0.0),
                 ar.lambda1, ar.solution_bound, ar.passes ? 1.0 : 0.0});
        return 0;
    }
    if (task == "continuity") {
        const TimeGrid tg = tgrid_from(cfg);
        const WaveFunction psi0 = state_from(cfg, g, spec);
        const PotentialTrajectory v = sample_trajectory(model, g, tg);
        const Trajectory traj = propagate_stepwise_static(psi0, v, spec);
        io::CsvWriter csv((outdir / "continuity.csv").string(), {"t", "residual"});
        for (std::size_t i = 1; i < tg.nodes(); ++i) {
            WaveFunction mid = traj.states[i];
            for (std::size_t e = 0; e < mid.size(); ++e)
                mid.amplitudes[e] =
                    0.5 * (traj.states[i].amplitudes[e] + traj.states[i - 1].amplitudes[e]);
            const RealField div = divergence_staggered(current_staggered(mid), g);
            const RealField n1 = density(traj.states[i]);
            const RealField n0 = density(traj.states[i - 1]);
            double worst = 0.0;
            for (std::size_t m = 0; m < g.M; ++m)
                worst = std::max(worst, std::abs((n1[m] - n0[m]) / tg.dt + div[m]));
            csv.row({tg.time(i), worst});
        }
        return 0;
    }
    if (task == "force-balance") {
        const TimeGrid tg = tgrid_from(cfg);
        const WaveFunction psi0 = state_from(cfg, g, spec);
        const PotentialTrajectory v = sample_trajectory(model, g, tg);
        const Trajectory traj = propagate_stepwise_static(psi0, v, spec);
        const ForceBalance fb = global_force_balance(traj, v);
        io::CsvWriter csv((outdir / "force_balance.csv").string(),
                          {"t", "f_pot", "f_newton"});
        for (std::size_t i = 0; i < tg.nodes(); ++i)
            csv.row({tg.time(i), fb.f_pot[i], fb.f_newton[i]});
        return 0;
    }
    throw io::ConfigError("diagnose.task must be weights, continuity or force-balance");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kVersion) + " - density/potential mapping laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;

    struct Sub {
        const char* name;
        const char* help;
        std::set<std::string> keys;
        std::function<int(const Config&, const fs::path&)> run;
    };
    const std::vector<Sub> subs = {
        {"propagate", "evolve a state under a time-dependent potential", with_common({}),
         run_propagate},
        {"spectrum", "eigenvalues and eigenvectors of the static operator",
         with_common({"spectrum.K"}), run_spectrum},
        {"invert-fp", "fixed-point density-to-potential inversion",
         with_common({"inversion.alpha", "inversion.tol", "inversion.max_iter",
                      "inversion.restart_interval", "inversion.degeneracy", "inversion.v0",
                      "inversion.density_file"}),
         run_invert_fp},
        {"invert-hj", "exact single-particle inversion",
         with_common({"inversion.density_file"}),
         [](const Config& c, const fs::path& o) { return run_invert_hj(c, o, false); }},
        {"invert-ks", "Kohn-Sham potential for a pair density",
         with_common({"inversion.density_file"}),
         [](const Config& c, const fs::path& o) { return run_invert_hj(c, o, true); }},
        {"invert-taylor", "Taylor-coefficient recursion at t = 0",
         with_common({"taylor.K", "inversion.density_file"}), run_invert_taylor},
        {"verify-rho", "propagate a potential and compare against target data",
         with_common({"verify.v_file", "inversion.density_file"}), run_verify_rho},
        {"respond", "linear response (lehmann | kick | kubo)",
         with_common({"response.task", "response.K", "response.gamma", "response.omega_points",
                      "response.site", "response.kappa", "response.probe", "response.w_k"}),
         run_respond},
        {"functionals", "local-density energy components on radial densities",
         {"io.outdir", "density.form", "density.R", "density.N", "density.points",
          "density.alpha", "vext.form", "vext.Z", "functionals.scale"},
         run_functionals},
        {"diagnose", "weight, continuity and force diagnostics",
         with_common({"diagnose.task", "diagnose.s"}), run_diagnose},
    };

    std::map<std::string, const Sub*> chosen;
    for (const Sub& s : subs) {
        CLI::App* sc = app.add_subcommand(s.name, s.help);
        sc->add_option("--config", config_path, "key = value configuration file");
        sc->add_option("--set", overrides, "override: key=value (repeatable)");
        chosen[s.name] = &s;
    }

    CLI11_PARSE(app, argc, argv);
    const Sub* sub = chosen[app.get_subcommands().front()->get_name()];

    const auto t0 = std::chrono::steady_clock::now();
    Config cfg;
    fs::path outdir;
    try {
        if (!config_path.empty()) cfg = io::parse_config_file(config_path);
        for (const std::string& o : overrides) io::apply_override(cfg, o);
        cfg.validate(sub->keys);
        outdir = cfg.get_string("io.outdir", "out");
        fs::create_directories(outdir);
    } catch (const std::exception& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    }

    int code = 0;
    try {
        code = sub->run(cfg, outdir);
    } catch (const io::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        code = 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        code = 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        code = 3;
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    try {
        write_manifest(outdir, cfg, seconds);
    } catch (...) {
    }
    return code;
}
