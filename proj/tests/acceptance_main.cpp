// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: every criterion prints one PASS/FAIL line with the
// measured numbers pinned against its stated tolerance. The process exits
// nonzero if any criterion fails.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "densmap/functionals.hpp"
#include "densmap/inversion.hpp"
#include "densmap/response.hpp"
#include "densmap/sturm_liouville.hpp"

using namespace densmap;
using std::numbers::pi;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] %2d %-28s %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    if (!pass) ++g_failures;
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), pattern, a, b, c);
    return buf;
}

PotentialTrajectory sampled_potential(const Grid& g, const TimeGrid& tg,
                                      const std::function<double(double, double)>& f) {
    std::vector<RealField> fields(tg.nodes(), RealField(g.M));
    for (std::size_t i = 0; i < tg.nodes(); ++i)
        for (std::size_t m = 0; m < g.M; ++m) fields[i][m] = f(tg.time(i), g.x[m]);
    return make_potential_trajectory(std::move(fields), g, tg);
}

double l2_gap(const WaveFunction& a, const WaveFunction& b) {
    ComplexField d(a.size());
    for (std::size_t m = 0; m < a.size(); ++m) d[m] = a.amplitudes[m] - b.amplitudes[m];
    WaveFunction tmp = a;
    tmp.amplitudes = std::move(d);
    return norm(tmp);
}

// shared driven run for criteria 1 and 2: T = 5, N_t = 1000, M = 128
struct UnitarityRun {
    Grid grid = build_grid(2 * pi, 128, Boundary::Periodic);
    TimeGrid tgrid = make_time_grid(5.0, 1000);
    Trajectory traj;
    UnitarityRun() {
        RealField vs(grid.M);
        for (std::size_t m = 0; m < grid.M; ++m) vs[m] = std::cos(grid.x[m]);
        const WaveFunction psi0 = ground_state(make_spec(grid, vs)).psi;
        const PotentialTrajectory v = sampled_potential(grid, tgrid, [](double t, double x) {
            return std::cos(x) + 0.3 * std::sin(t) * std::cos(x);
        });
        traj = propagate_stepwise_static(psi0, v, make_spec(grid));
    }
};

void criterion_1() {
    const UnitarityRun run;
    double norm_drift = 0.0;
    for (const WaveFunction& s : run.traj.states)
        norm_drift = std::max(norm_drift, std::abs(norm(s) - 1.0));
    report(1, "unitarity", norm_drift <= 1e-10,
           fmt("max | ||psi|| - 1 | = %.3e (tol 1e-10)", norm_drift));
}

void criterion_2() {
    const UnitarityRun run;
    double resid = 0.0;
    const Grid& g = run.grid;
    for (std::size_t i = 1; i < run.tgrid.nodes(); ++i) {
        WaveFunction mid = run.traj.states[i];
        for (std::size_t m = 0; m < g.M; ++m)
            mid.amplitudes[m] = 0.5 * (run.traj.states[i].amplitudes[m] +
                                       run.traj.states[i - 1].amplitudes[m]);
        const RealField div = divergence_staggered(current_staggered(mid), g);
        const RealField n1 = density(run.traj.states[i]);
        const RealField n0 = density(run.traj.states[i - 1]);
        for (std::size_t m = 0; m < g.M; ++m)
            resid = std::max(resid, std::abs((n1[m] - n0[m]) / run.tgrid.dt + div[m]));
    }
    report(2, "discrete continuity", resid <= 1e-10,
           fmt("max per-step residual = %.3e (tol 1e-10)", resid));
}

void criterion_3() {
    const Grid g = build_grid(40.0, 256, Boundary::Periodic, -20.0);
    ComplexField amp(g.M);
    for (std::size_t m = 0; m < g.M; ++m) amp[m] = std::exp(-0.5 * g.x[m] * g.x[m]);
    const WaveFunction psi0 = normalize(make_wavefunction(amp, g));
    const TimeGrid tg = make_time_grid(1.0, 1000);
    const Trajectory traj = propagate_stepwise_static(
        psi0, sampled_potential(g, tg, [](double, double) { return 0.0; }), make_spec(g));
    const RealField n = density(traj.states.back());
    double x1 = 0.0, x2 = 0.0;
    for (std::size_t m = 0; m < g.M; ++m) {
        x1 += g.x[m] * n[m];
        x2 += g.x[m] * g.x[m] * n[m];
    }
    x1 *= g.dx;
    x2 *= g.dx;
    const double width_sq = 2.0 * (x2 - x1 * x1);
    const double rel = std::abs(width_sq - 2.0) / 2.0;
    report(3, "free-gaussian width", rel <= 1e-3,
           fmt("width^2(T=1) = %.6f, relative error %.3e (tol 1e-3)", width_sq, rel));
}

void criterion_4() {
    // comparison floor: first-order left-endpoint freezing of the stepwise
    // scheme, hence the fine time grid
    const Grid g = build_grid(2 * pi, 64, Boundary::Periodic);
    const TimeGrid tg = make_time_grid(0.5, 2000);
    const WaveFunction psi0 = normalize(make_wavefunction(ComplexField(g.M, 1.0), g));
    const PotentialTrajectory v = sampled_potential(
        g, tg, [](double t, double x) { return 0.1 * std::sin(t) * std::cos(x); });
    const Trajectory cn = propagate_stepwise_static(psi0, v, make_spec(g));
    auto sup_gap = [&](int K) {
        const Trajectory series = propagate_neumann_series(psi0, v, K);
        double worst = 0.0;
        for (std::size_t i = 0; i < tg.nodes(); ++i)
            worst = std::max(worst, l2_gap(series.states[i], cn.states[i]));
        return worst;
    };
    const double gap1 = sup_gap(1);
    const double gap3 = sup_gap(3);
    const double gap4 = sup_gap(4);
    const bool pass = gap4 <= 1e-5 && gap1 / gap3 >= 5.0;
    report(4, "cross-propagator agreement", pass,
           fmt("K=4 gap %.3e (tol 1e-5), K1/K3 shrink %.1fx (>= 5x)", gap4, gap1 / gap3));
}

void criterion_5() {
    double prev = 0.0, ratio = 0.0, q_integral = 0.0;
    for (std::size_t M : {128u, 256u}) {
        const Grid g = build_grid(20.0, M, Boundary::Periodic, -10.0);
        RealField vs(g.M);
        for (std::size_t m = 0; m < g.M; ++m) vs[m] = 0.5 * g.x[m] * g.x[m];
        const HamiltonianSpec spec = make_spec(g, vs);
        const GroundState gs = ground_state(spec);
        const RealField q = internal_force_q(gs.psi, spec);
        const RealField n = density(gs.psi);
        const RealField Av = sl_apply(make_sl_problem(n, RealField(g.M, 0.0), g), vs);
        RealField resid(g.M);
        for (std::size_t m = 0; m < g.M; ++m) resid[m] = q[m] - Av[m];
        const double err = norm_l2(resid, g);
        if (prev > 0.0) ratio = prev / err;
        prev = err;
        q_integral = std::abs(integrate(q, g));
    }
    const bool pass = ratio > 3.0 && ratio < 5.5 && q_integral <= 1e-8;
    report(5, "stationary q-identity", pass,
           fmt("refinement ratio %.2f (~4), |int q| = %.2e (tol 1e-8)", ratio, q_integral));
}

void criterion_6() {
    // analytic solves
    const Grid gp = build_grid(2 * pi, 128, Boundary::Periodic);
    RealField zeta(gp.M);
    for (std::size_t m = 0; m < gp.M; ++m) zeta[m] = std::cos(gp.x[m]);
    const RealField vp = solve_direct_1d(make_sl_problem(RealField(gp.M, 1.0), zeta, gp));
    double err_p = 0.0;
    for (std::size_t m = 0; m < gp.M; ++m)
        err_p = std::max(err_p, std::abs(vp[m] - std::cos(gp.x[m])));

    const Grid gd = build_grid(1.0, 127, Boundary::Dirichlet);
    const RealField vd =
        solve_direct_1d(make_sl_problem(RealField(gd.M, 1.0), RealField(gd.M, 1.0), gd));
    double err_d = 0.0;
    for (std::size_t m = 0; m < gd.M; ++m)
        err_d = std::max(err_d, std::abs(vd[m] - 0.5 * gd.x[m] * (1.0 - gd.x[m])));

    // direct vs eigenbasis on a weighted problem
    RealField nw(gp.M), zw(gp.M);
    for (std::size_t m = 0; m < gp.M; ++m) {
        nw[m] = 1.0 + 0.4 * std::cos(gp.x[m]);
        zw[m] = std::sin(2.0 * gp.x[m]);
    }
    const SLProblem pw = make_sl_problem(nw, zw, gp);
    const RealField v_dir = solve_direct_1d(pw);
    const SLEigenSolution v_eig = solve_eigenbasis(pw, gp.M - 1);
    double gap = 0.0;
    for (std::size_t m = 0; m < gp.M; ++m)
        gap = std::max(gap, std::abs(v_dir[m] - v_eig.solution[m]));

    // eigenvalues of the unit-weight Dirichlet operator against m^2 pi^2
    const SLEigenSolution eig =
        solve_eigenbasis(make_sl_problem(RealField(gd.M, 1.0), RealField(gd.M, 1.0), gd),
                         gd.M / 8);
    double worst_rel = 0.0;
    for (std::size_t m = 0; m < gd.M / 8; ++m) {
        const double analytic = double((m + 1) * (m + 1)) * pi * pi;
        worst_rel = std::max(worst_rel,
                             std::abs(eig.basis.eigenvalues[m] - analytic) / analytic);
    }

    const double h2p = 2.0 * gp.dx * gp.dx, h2d = 2.0 * gd.dx * gd.dx;
    const bool pass = err_p < h2p && err_d < h2d && gap <= 1e-8 && worst_rel <= 5e-3;
    report(6, "sturm-liouville solver", pass,
           fmt("direct-eig gap %.1e (tol 1e-8), worst eig rel at m=M/8 %.3e (tol 5e-3)", gap,
               worst_rel));
}

void criterion_7() {
    const Grid g = build_grid(2 * pi, 64, Boundary::Periodic);
    RealField vs(g.M);
    for (std::size_t m = 0; m < g.M; ++m) vs[m] = std::cos(g.x[m]);
    const HamiltonianSpec spec = make_spec(g);
    const WaveFunction psi0 = ground_state(make_spec(g, vs)).psi;
    const TimeGrid tg = make_time_grid(1.0, 200);
    const PotentialTrajectory v_true = sampled_potential(g, tg, [](double t, double x) {
        return std::cos(x) + 0.2 * std::sin(t) * std::cos(x);
    });
    const Trajectory fwd = propagate_stepwise_static(psi0, v_true, spec);
    const DensityTrajectory n = density_trajectory(fwd, 1);

    InversionConfig cfg;
    cfg.restart_interval = 0.025;  // contraction holds on short sub-intervals
    cfg.v0 = make_potential_trajectory(std::vector<RealField>(tg.nodes(), vs), g, tg);
    auto [v, rep] = invert_fixed_point(n, psi0, spec, cfg);

    double sup_rel = 0.0;
    for (std::size_t i = 0; i < tg.nodes(); ++i) {
        RealField truth = v_true.v[i];
        remove_mean(truth, g);
        RealField diff(g.M);
        for (std::size_t m = 0; m < g.M; ++m) diff[m] = v.v[i][m] - truth[m];
        sup_rel = std::max(sup_rel, norm_l2(diff, g) / norm_l2(truth, g));
    }
    bool ratios_ok = true;
    for (std::size_t i = 1; i < rep.ratios.size(); ++i) ratios_ok &= rep.ratios[i] < 1.0;
    const bool pass = rep.converged && rep.iterations <= 50 && sup_rel <= 1e-3 &&
                      ratios_ok && rep.rho_max_l1 <= 1e-4;
    report(7, "fixed-point round trip", pass,
           fmt("sup rel err %.3e (tol 1e-3), iters %.0f, rho %.3e (tol 1e-4)", sup_rel,
               double(rep.iterations), rep.rho_max_l1));
}

void criterion_8() {
    // oracle data generated with midpoint sampling so the target potential is
    // not lagged by the per-step freezing
    const Grid g = build_grid(2 * pi, 192, Boundary::Periodic);
    RealField vs(g.M);
    for (std::size_t m = 0; m < g.M; ++m) vs[m] = std::cos(g.x[m]);
    const HamiltonianSpec spec = make_spec(g);
    const WaveFunction psi0 = ground_state(make_spec(g, vs)).psi;
    const TimeGrid tg = make_time_grid(1.0, 600);
    const PotentialTrajectory v_true = sampled_potential(g, tg, [](double t, double x) {
        return std::cos(x) + 0.3 * std::sin(2.0 * t) * std::sin(x);
    });
    const Trajectory fwd = propagate_stepwise_static(psi0, v_true, spec, {true});
    const DensityTrajectory n = density_trajectory(fwd, 1);

    const PotentialTrajectory v_hj = invert_single_particle_hj(n, RealField(g.M, 0.0));
    double hj_err = 0.0;
    for (std::size_t i = 0; i < tg.nodes(); ++i) {
        RealField truth = v_true.v[i];
        remove_mean(truth, g);
        RealField diff(g.M);
        for (std::size_t m = 0; m < g.M; ++m) diff[m] = v_hj.v[i][m] - truth[m];
        hj_err = std::max(hj_err, norm_l2(diff, g));
    }

    InversionConfig cfg;
    cfg.restart_interval = 0.00667;  // contraction windows shrink with dx^-2
    cfg.v0 = make_potential_trajectory(std::vector<RealField>(tg.nodes(), vs), g, tg);
    auto [v_fp, rep] = invert_fixed_point(n, psi0, spec, cfg);
    double method_gap = 0.0;
    for (std::size_t i = 0; i < tg.nodes(); ++i) {
        RealField diff(g.M);
        for (std::size_t m = 0; m < g.M; ++m) diff[m] = v_hj.v[i][m] - v_fp.v[i][m];
        method_gap = std::max(method_gap, norm_l2(diff, g));
    }
    const double combined_tol = 10.0 * (1e-3 + 1e-3);
    const bool pass = hj_err <= 1e-3 && rep.converged && method_gap <= combined_tol;
    report(8, "polar-inversion exactness", pass,
           fmt("sup err %.3e (tol 1e-3), gap to fixed point %.3e (tol %.0e)", hj_err,
               method_gap, combined_tol));
}

void criterion_9() {
    const Grid g = build_grid(2 * pi, 64, Boundary::Periodic);
    RealField vs(g.M);
    for (std::size_t m = 0; m < g.M; ++m) vs[m] = std::cos(g.x[m]);
    const HamiltonianSpec spec = make_spec(g);
    const WaveFunction psi0 = ground_state(make_spec(g, vs)).psi;

    // stationary input
    const int K = 4;
    std::vector<RealField> n_coeffs(K + 3, RealField(g.M, 0.0));
    n_coeffs[0] = density(psi0);
    const TaylorResult stat = invert_taylor(n_coeffs, psi0, spec, K);
    RealField v0 = vs;
    remove_mean(v0, g);
    const double vs_norm = norm_l2(v0, g);
    RealField gap0(g.M);
    for (std::size_t m = 0; m < g.M; ++m) gap0[m] = stat.v_coeffs[0][m] - v0[m];
    const double e0 = norm_l2(gap0, g) / vs_norm;
    double e_high = 0.0;
    for (int k = 1; k <= K; ++k)
        e_high = std::max(e_high, norm_l2(stat.v_coeffs[k], g) / vs_norm);

    // linear drive: midpoint-sampled forward data differentiated on a
    // coarser subgrid (per-step kinks would pollute the third derivative)
    const TimeGrid tg = make_time_grid(0.08, 160);
    const PotentialTrajectory v_true = sampled_potential(
        g, tg, [](double t, double x) { return std::cos(x) + t * std::cos(x); });
    const Trajectory fwd = propagate_stepwise_static(psi0, v_true, spec, {true});
    const DensityTrajectory n = density_trajectory(fwd, 1);
    const std::size_t c = 80;
    const std::size_t stride = 8;
    const double h = tg.dt * double(stride);
    std::vector<RealField> coeffs(4, RealField(g.M, 0.0));
    coeffs[0] = n.n[c];
    for (std::size_t m = 0; m < g.M; ++m) {
        auto f = [&](int off) { return n.n[c + off * stride][m]; };
        coeffs[1][m] = (f(-2) - 8 * f(-1) + 8 * f(1) - f(2)) / (12 * h);
        coeffs[2][m] = (-f(-2) + 16 * f(-1) - 30 * f(0) + 16 * f(1) - f(2)) / (12 * h * h);
        coeffs[3][m] =
            (f(-3) - 8 * f(-2) + 13 * f(-1) - 13 * f(1) + 8 * f(2) - f(3)) / (8 * h * h * h);
    }
    const TaylorResult lin = invert_taylor(coeffs, fwd.states[c], spec, 1);
    RealField expect(g.M);
    for (std::size_t m = 0; m < g.M; ++m) expect[m] = std::cos(g.x[m]);
    remove_mean(expect, g);
    RealField gap1(g.M);
    for (std::size_t m = 0; m < g.M; ++m) gap1[m] = lin.v_coeffs[1][m] - expect[m];
    const double e1 = norm_l2(gap1, g);

    const bool pass = e0 <= 1e-6 && e_high <= 1e-6 && e1 <= 1e-2;
    report(9, "taylor recursion", pass,
           fmt("stationary v0 err %.1e, max high-order %.1e (tol 1e-6), drive err %.3e",
               e0, e_high, e1));
}

void criterion_10() {
    // Kubo against the finite-difference oracle
    const Grid g = build_grid(2 * pi, 48, Boundary::Periodic);
    const TimeGrid tg = make_time_grid(1.0, 200);
    RealField vs(g.M);
    for (std::size_t m = 0; m < g.M; ++m) vs[m] = 0.8 * std::cos(g.x[m]);
    const HamiltonianSpec spec = make_spec(g);
    const WaveFunction psi0 = ground_state(make_spec(g, vs)).psi;
    const PotentialTrajectory v = sampled_potential(
        g, tg, [](double, double x) { return 0.8 * std::cos(x); });
    const PotentialTrajectory w = sampled_potential(
        g, tg, [](double t, double x) { return std::sin(t) * std::sin(x); });
    RealField dip(g.M);
    for (std::size_t m = 0; m < g.M; ++m) dip[m] = std::sin(g.x[m]);
    const GridOperator A = multiplicative_operator(dip);
    const std::vector<double> kubo = kubo_response(A, psi0, v, w, spec);
    const double eps = 1e-3;
    PotentialTrajectory vp = v;
    for (std::size_t i = 0; i < tg.nodes(); ++i)
        for (std::size_t m = 0; m < g.M; ++m) vp.v[i][m] += eps * w.v[i][m];
    const std::vector<double> ap =
        expectation_series(A, propagate_stepwise_static(psi0, vp, spec));
    const std::vector<double> ab =
        expectation_series(A, propagate_stepwise_static(psi0, v, spec));
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < kubo.size(); ++i) {
        worst = std::max(worst, std::abs((ap[i] - ab[i]) / eps - kubo[i]));
        scale = std::max(scale, std::abs((ap[i] - ab[i]) / eps));
    }
    const double kubo_rel = worst / scale;

    // Lehmann peak and kick spectrum for the box
    const Grid gb = build_grid(1.0, 199, Boundary::Dirichlet);
    const HamiltonianSpec box = make_spec(gb);
    std::vector<double> omega;
    for (double x = 2.0; x <= 40.0; x += 0.02) omega.push_back(x);
    const ResponseKernel kernel = chi_lehmann(box, 5, 0.01, omega);
    const std::vector<double> abs_spec = kernel.integrated_abs();
    std::size_t peak = 0;
    for (std::size_t i = 1; i < omega.size(); ++i)
        if (abs_spec[i] > abs_spec[peak]) peak = i;
    const double analytic = 1.5 * pi * pi;
    const double lehmann_rel = std::abs(omega[peak] - analytic) / analytic;

    // kick response projected onto the first transition density, so the
    // lowest mode carries the spectral peak
    const TimeGrid tk = make_time_grid(8.0, 1600);
    const KickResponse kick = chi_time_domain(box, 59, tk, 1e-2);
    std::vector<double> probe(tk.nodes(), 0.0);
    for (std::size_t i = 0; i < tk.nodes(); ++i)
        for (std::size_t m = 0; m < gb.M; ++m)
            probe[i] += kick.dn[i][m] * kernel.transitions[0][m] * gb.dx;
    const double kick_peak = dominant_frequency(probe, tk.dt);
    const double kick_rel = std::abs(kick_peak - analytic) / analytic;

    const bool pass = kubo_rel <= 0.01 && lehmann_rel <= 0.02 && kick_rel <= 0.02;
    report(10, "kubo and response spectra", pass,
           fmt("kubo rel %.3e (tol 1e-2), lehmann peak rel %.3e, kick rel %.3e (tol 2e-2)",
               kubo_rel, lehmann_rel, kick_rel));
}

void criterion_11() {
    auto mismatch = [&](std::size_t M, std::size_t steps) {
        const Grid g = build_grid(16.0, M, Boundary::Dirichlet, -8.0);
        RealField trap(g.M);
        for (std::size_t m = 0; m < g.M; ++m) trap[m] = 0.5 * g.x[m] * g.x[m];
        const GroundState gs = ground_state(make_spec(g, trap));
        const TimeGrid tg = make_time_grid(2.0, steps);
        const PotentialTrajectory v = sampled_potential(g, tg, [](double t, double x) {
            return 0.5 * x * x + 0.05 * x * std::sin(1.5 * t);
        });
        // midpoint sampling: the left-endpoint default carries an O(dt)
        // sampling lag that would mask the joint second-order refinement
        const Trajectory traj = propagate_stepwise_static(gs.psi, v, make_spec(g), {true});
        const ForceBalance fb = global_force_balance(traj, v);
        double worst = 0.0;
        for (std::size_t i = 0; i < tg.nodes(); ++i)
            worst = std::max(worst, std::abs(fb.f_pot[i] - fb.f_newton[i]));
        return worst;
    };
    const double coarse = mismatch(96, 200);
    const double fine = mismatch(192, 400);
    const double ratio = coarse / fine;
    const bool pass = ratio > 3.0 && ratio < 5.5;  // second order under joint refinement
    report(11, "force balance", pass,
           fmt("mismatch %.3e -> %.3e, refinement ratio %.2f (~4)", coarse, fine, ratio));
}

void criterion_12() {
    const double n0 = 1.0 / (4.0 / 3.0 * pi);
    const RadialDensity ball = make_radial_density(1.0, 4000, RealField(4000, n0));
    const LdaComponents c = lda_components(ball);
    const double vh_rel = std::abs(c.v_h - 0.6) / 0.6;
    const ScalingCheck s = lda_scaling_check(ball, 2.0);
    const bool pass = vh_rel <= 1e-4 && s.worst_relative_error <= 1e-10;
    report(12, "lda functionals", pass,
           fmt("V_H rel err %.2e (tol 1e-4), scaling err %.2e (tol 1e-10)", vh_rel,
               s.worst_relative_error));
}

void criterion_13() {
    const Grid g = build_grid(2 * pi, 64, Boundary::Periodic);
    const TimeGrid tg = make_time_grid(2.0, 400);
    RealField vs(g.M);
    for (std::size_t m = 0; m < g.M; ++m) vs[m] = std::cos(g.x[m]);
    const GroundState gs = ground_state(make_spec(g, vs));
    const PotentialTrajectory v = sampled_potential(g, tg, [](double t, double x) {
        return std::cos(x) + 0.5 * std::sin(t) * std::cos(x);
    });
    const Trajectory traj = propagate_stepwise_static(gs.psi, v, make_spec(g));
    double L = 0.0;
    for (std::size_t i = 0; i + 1 < tg.nodes(); ++i) {
        double step = 0.0;
        for (std::size_t m = 0; m < g.M; ++m)
            step = std::max(step, std::abs(v.v[i + 1][m] - v.v[i][m]));
        L = std::max(L, step / tg.dt);
    }
    double v0_inf = 0.0;
    for (double x : v.v[0]) v0_inf = std::max(v0_inf, std::abs(x));
    const double h2_0 = sobolev_norm(gs.psi, 2);
    double worst_margin = 1e300;
    bool ok = true;
    for (std::size_t i = 0; i < tg.nodes(); ++i) {
        const double bound =
            1.1 * (1.0 + v0_inf) * std::exp(std::sqrt(2.0) * L * tg.time(i)) * h2_0;
        const double h2 = sobolev_norm(traj.states[i], 2);
        ok &= h2 <= bound;
        worst_margin = std::min(worst_margin, bound / h2);
    }
    report(13, "sobolev growth bound", ok,
           fmt("measured L = %.3f, smallest bound/actual margin %.2f", L, worst_margin));
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::function<void()>> criteria = {
        criterion_1, criterion_2,  criterion_3,  criterion_4,  criterion_5,
        criterion_6, criterion_7,  criterion_8,  criterion_9,  criterion_10,
        criterion_11, criterion_12, criterion_13,
    };
    if (argc > 1) {
        const int id = std::atoi(argv[1]);
        if (id < 1 || id > int(criteria.size())) {
            std::fprintf(stderr, "usage: %s [criterion 1..%zu]\n", argv[0], criteria.size());
            return 2;
        }
        criteria[id - 1]();
    } else {
        for (const auto& c : criteria) c();
        if (g_failures) std::printf("%d criterion(s) failed\n", g_failures);
    }
    return g_failures == 0 ? 0 : 1;
}
