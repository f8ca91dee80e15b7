// SPDX-License-Identifier: Apache-2.0

#include "densmap/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "densmap/kernels.hpp"
#include "densmap/linalg.hpp"
#include "densmap/parallel.hpp"
#include "densmap/sturm_liouville.hpp"

namespace densmap {

namespace {

RealField mean_removed(RealField f, const Grid& g) {
    remove_mean(f, g);
    return f;
}

double l1_diff(const RealField& a, const RealField& b, const Grid& g) {
    RealField d(a.size());
    for (std::size_t m = 0; m < a.size(); ++m) d[m] = a[m] - b[m];
    return norm_l1(d, g);
}

void check_initial_state(const DensityTrajectory& n, const WaveFunction& psi0) {
    const Grid& g = n.grid;
    const RealField n0 = density(psi0);
    if (l1_diff(n.n[0], n0, g) > 1e-6)
        throw IncompatibleInitialState("inversion: target density does not match the initial state");
    // first time derivative of the data against the state's current divergence
    const double dt = n.tgrid.dt;
    RealField dtn(g.M);
    for (std::size_t m = 0; m < g.M; ++m)
        dtn[m] = (-3.0 * n.n[0][m] + 4.0 * n.n[1][m] - n.n[2][m]) / (2.0 * dt);
    const RealField div_j = divergence_staggered(current_staggered(psi0), g);
    RealField resid(g.M);
    for (std::size_t m = 0; m < g.M; ++m) resid[m] = dtn[m] + div_j[m];
    if (norm_l1(resid, g) > 1e-4)
        throw IncompatibleInitialState("inversion: dt n(0) does not match the initial current");
}

struct WindowResult {
    bool converged = false;
    bool degenerate_reused = false;
    std::vector<double> residuals;
};

// Fixed-point sweep on the node window [first, last]; v holds the full
// trajectory and is updated in place on the window.
WindowResult run_fixed_point_window(const DensityTrajectory& n,
                                    const std::vector<RealField>& ddn, const WaveFunction& anchor,
                                    const HamiltonianSpec& spec, const InversionConfig& cfg,
                                    std::size_t first, std::size_t last,
                                    std::vector<RealField>& v) {
    const Grid& g = n.grid;
    const std::size_t count = last - first + 1;
    const TimeGrid wgrid = (count > 1)
                               ? make_time_grid(double(count - 1) * n.tgrid.dt, count - 1)
                               : TimeGrid{0.0, 0, n.tgrid.dt};
    WindowResult result;
    for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
        // propagate the window under the current iterate
        std::vector<RealField> vwin(v.begin() + first, v.begin() + last + 1);
        Trajectory traj;
        if (count > 1) {
            const PotentialTrajectory pv = make_potential_trajectory(vwin, g, wgrid);
            traj = propagate_stepwise_static(anchor, pv, spec, {cfg.midpoint_sampling});
        } else {
            traj.states.push_back(anchor);
        }

        // node-wise divergence-form solves (independent across nodes); the
        // weight is the half-link correlation of the current iterate's state,
        // which pairs exactly with the moment-form q in the discrete force
        // identity (the node density agrees with it to O(dx^2))
        std::vector<RealField> vnew(count);
        std::vector<char> reused(count, 0);
        std::vector<std::exception_ptr> errors(count);
        parallel_for(count, [&](std::size_t k) {
            try {
                RealField zeta = internal_force_q_moment(traj.states[k], spec);
                const RealField& dd = ddn[first + k];
                for (std::size_t m = 0; m < g.M; ++m) zeta[m] -= dd[m];
                remove_mean(zeta, g);  // quadrature noise only
                vnew[k] = solve_links_floating(correlation_weights(traj.states[k]), zeta, g);
            } catch (const DegenerateWeight&) {
                if (cfg.degeneracy == DegeneracyPolicy::Fail) {
                    errors[k] = std::current_exception();
                } else {
                    vnew[k] = v[first + k];
                    reused[k] = 1;
                }
            } catch (...) {
                errors[k] = std::current_exception();
            }
        });
        for (const std::exception_ptr& e : errors)
            if (e) std::rethrow_exception(e);
        for (char r : reused) result.degenerate_reused |= bool(r);

        // damped update and residual
        double residual = 0.0;
        for (std::size_t k = 0; k < count; ++k) {
            RealField& cur = v[first + k];
            RealField next(g.M);
            for (std::size_t m = 0; m < g.M; ++m)
                next[m] = (1.0 - cfg.mixing) * cur[m] + cfg.mixing * vnew[k][m];
            RealField diff(g.M);
            for (std::size_t m = 0; m < g.M; ++m) diff[m] = next[m] - cur[m];
            remove_mean(diff, g);
            residual = std::max(residual, norm_l2(diff, g));
            cur = std::move(next);
        }
        result.residuals.push_back(residual);
        if (residual <= cfg.tol_v) {
            result.converged = true;
            break;
        }
    }
    return result;
}

}  // namespace

std::pair<PotentialTrajectory, FixedPointReport> invert_fixed_point(const DensityTrajectory& n,
                                                                    const WaveFunction& psi0,
                                                                    const HamiltonianSpec& spec,
                                                                    const InversionConfig& cfg) {
    const Grid& g = n.grid;
    const std::size_t nodes = n.n.size();
    if (nodes < 5) throw std::invalid_argument("invert_fixed_point: need at least 5 time nodes");
    if (!(cfg.mixing > 0.0 && cfg.mixing <= 1.0))
        throw std::invalid_argument("invert_fixed_point: mixing must be in (0, 1]");
    if (!(cfg.tol_v > 0.0)) throw std::invalid_argument("invert_fixed_point: tol_v must be positive");
    check_initial_state(n, psi0);

    const std::vector<RealField> ddn = dtt_density(n);

    std::vector<RealField> v(nodes, RealField(g.M, 0.0));
    if (cfg.v0) {
        if (cfg.v0->v.size() != nodes || cfg.v0->grid.M != g.M)
            throw std::invalid_argument("invert_fixed_point: v0 does not match the target grids");
        v = cfg.v0->v;
    }
    for (RealField& f : v) remove_mean(f, g);

    FixedPointReport report;
    report.admissibility = admissibility(make_sl_problem(n.n[0], RealField(g.M, 0.0), g), 1.0);
    bool all_converged = true;
    std::vector<WindowResult> windows;

    if (!cfg.restart_interval) {
        windows.push_back(run_fixed_point_window(n, ddn, psi0, spec, cfg, 0, nodes - 1, v));
        all_converged = windows.back().converged;
    } else {
        const std::size_t chunk =
            std::max<std::size_t>(1, std::size_t(std::round(*cfg.restart_interval / n.tgrid.dt)));
        WaveFunction anchor = psi0;
        std::size_t first = 0;
        while (first + 1 < nodes) {
            const std::size_t last = std::min(nodes - 1, first + chunk);
            windows.push_back(run_fixed_point_window(n, ddn, anchor, spec, cfg, first, last, v));
            all_converged = all_converged && windows.back().converged;
            // re-anchor: evolve the state across the finished window
            std::vector<RealField> vwin(v.begin() + first, v.begin() + last + 1);
            const TimeGrid wgrid = make_time_grid(double(last - first) * n.tgrid.dt, last - first);
            const Trajectory t = propagate_stepwise_static(
                anchor, make_potential_trajectory(vwin, g, wgrid), spec,
                {cfg.midpoint_sampling});
            anchor = t.states.back();
            first = last;
        }
    }
    report.converged = all_converged;

    // per-iteration residual, aggregated as the max across the (independently
    // treated) windows, and the measured contraction ratios
    std::size_t depth = 0;
    for (const WindowResult& w : windows) {
        depth = std::max(depth, w.residuals.size());
        report.degenerate_nodes_reused |= w.degenerate_reused;
    }
    report.iterations = depth;
    report.residuals.assign(depth, 0.0);
    for (const WindowResult& w : windows)
        for (std::size_t i = 0; i < w.residuals.size(); ++i)
            report.residuals[i] = std::max(report.residuals[i], w.residuals[i]);
    for (std::size_t i = 1; i < depth; ++i)
        report.ratios.push_back(report.residuals[i] / report.residuals[i - 1]);

    // first-step distance bound from the measured ratios
    if (!report.residuals.empty()) {
        double xi_hat = 0.0;
        for (double r : report.ratios) xi_hat = std::max(xi_hat, r);
        report.first_step_bound = (xi_hat < 1.0 && !report.ratios.empty())
                                      ? report.residuals.front() / (1.0 - xi_hat)
                                      : std::numeric_limits<double>::infinity();
    }

    PotentialTrajectory out = make_potential_trajectory(std::move(v), g, n.tgrid);
    gauge_mean_zero(out);

    // rho-problem verdict for the final iterate, same sampling convention
    const Trajectory final_traj =
        propagate_stepwise_static(psi0, out, spec, {cfg.midpoint_sampling});
    double rho = 0.0;
    for (std::size_t i = 0; i < nodes; ++i)
        rho = std::max(rho, l1_diff(density(final_traj.states[i]), n.n[i], g));
    report.rho_max_l1 = rho;
    return {std::move(out), report};
}

RhoReport verify_rho_problem(const PotentialTrajectory& v, const DensityTrajectory& n_target,
                             const WaveFunction& psi0, const HamiltonianSpec& spec) {
    const Grid& g = n_target.grid;
    const Trajectory traj = propagate_stepwise_static(psi0, v, spec);
    const std::size_t nodes = n_target.n.size();
    RhoReport rep;
    std::vector<RealField> rho(nodes, RealField(g.M));
    for (std::size_t i = 0; i < nodes; ++i) {
        const RealField ni = density(traj.states[i]);
        for (std::size_t m = 0; m < g.M; ++m) rho[i][m] = ni[m] - n_target.n[i][m];
        rep.max_l1 = std::max(rep.max_l1, norm_l1(rho[i], g));
        rep.max_integral = std::max(rep.max_integral, std::abs(integrate(rho[i], g)));
    }
    rep.rho0_l1 = norm_l1(rho[0], g);
    if (nodes >= 3) {
        RealField dtr(g.M);
        for (std::size_t m = 0; m < g.M; ++m)
            dtr[m] = (-3.0 * rho[0][m] + 4.0 * rho[1][m] - rho[2][m]) / (2.0 * v.tgrid.dt);
        rep.dt_rho0_l1 = norm_l1(dtr, g);
    }
    return rep;
}

PotentialTrajectory invert_single_particle_hj(const DensityTrajectory& n, const RealField& S0,
                                              HJReport* report) {
    const Grid& g = n.grid;
    const std::size_t nodes = n.n.size();
    if (nodes < 3) throw std::invalid_argument("invert_single_particle_hj: need at least 3 time nodes");
    for (const RealField& field : n.n)
        for (double val : field)
            if (val <= kWeightFloor)
                throw DegenerateWeight("invert_single_particle_hj: density at the degeneracy floor");

    const std::vector<RealField> dtn = dt_density(n);

    // continuity solves -div(n grad S) = dt n, one per node
    std::vector<RealField> S(nodes);
    parallel_for(nodes, [&](std::size_t i) {
        RealField rhs = dtn[i];
        if (g.periodic()) remove_mean(rhs, g);  // particle-number noise only
        S[i] = solve_direct_1d(make_sl_problem(n.n[i], rhs, g));
    });

    if (report && S0.size() == g.M) {
        RealField gap = mean_removed(S0, g);
        const RealField s0 = g.periodic() ? S[0] : mean_removed(S[0], g);
        for (std::size_t m = 0; m < g.M; ++m) gap[m] -= s0[m];
        report->s0_consistency = norm_l2(gap, g);
    }

    std::vector<RealField> v(nodes, RealField(g.M));
    const double dt = n.tgrid.dt;
    for (std::size_t i = 0; i < nodes; ++i) {
        RealField root(g.M);
        for (std::size_t m = 0; m < g.M; ++m) root[m] = std::sqrt(n.n[i][m]);
        const RealField lap_root = apply_laplacian(root, g);
        const RealField grad_s = gradient(S[i], g);
        for (std::size_t m = 0; m < g.M; ++m) {
            // central dt S inside, third-order one-sided at the ends (second
            // order when only three nodes are available)
            double dts;
            if (i == 0)
                dts = nodes >= 4 ? (-11.0 * S[0][m] + 18.0 * S[1][m] - 9.0 * S[2][m] +
                                    2.0 * S[3][m]) /
                                       (6.0 * dt)
                                 : (-3.0 * S[0][m] + 4.0 * S[1][m] - S[2][m]) / (2.0 * dt);
            else if (i + 1 == nodes)
                dts = nodes >= 4 ? (11.0 * S[i][m] - 18.0 * S[i - 1][m] + 9.0 * S[i - 2][m] -
                                    2.0 * S[i - 3][m]) /
                                       (6.0 * dt)
                                 : (3.0 * S[i][m] - 4.0 * S[i - 1][m] + S[i - 2][m]) /
                                       (2.0 * dt);
            else
                dts = (S[i + 1][m] - S[i - 1][m]) / (2.0 * dt);
            v[i][m] = 0.5 * lap_root[m] / root[m] - 0.5 * grad_s[m] * grad_s[m] - dts;
        }
        remove_mean(v[i], g);
    }
    PotentialTrajectory out = make_potential_trajectory(std::move(v), g, n.tgrid);
    out.gauge = PotentialGauge::MeanZero;
    return out;
}

PotentialTrajectory construct_ks_potential(const DensityTrajectory& n, const RealField& S0,
                                           HJReport* report) {
    if (n.particles != 2)
        throw std::invalid_argument("construct_ks_potential: a two-particle target density is required");
    DensityTrajectory orbital = n;
    orbital.particles = 1;
    for (RealField& f : orbital.n)
        for (double& val : f) val *= 0.5;
    return invert_single_particle_hj(orbital, S0, report);
}

namespace {

// Half-link correlation weight N int Re(psi_m^* psi_m') dxbar of two fields;
// links as in half_weights. Wall links vanish with the zero boundary, which
// leaves a constant kernel handled like the periodic one.
RealField correlation_links(const ComplexField& a, const ComplexField& b, const Grid& g,
                            int rank) {
    const std::size_t M = g.M;
    auto pair_re = [&](std::size_t lo, std::size_t hi) -> double {
        if (rank == 1) return 0.5 * std::real(std::conj(a[lo]) * b[hi] + std::conj(a[hi]) * b[lo]);
        double acc = 0.0;
        for (std::size_t j = 0; j < M; ++j)
            acc += 0.5 * std::real(std::conj(a[lo * M + j]) * b[hi * M + j] +
                                   std::conj(a[hi * M + j]) * b[lo * M + j]);
        return 2.0 * g.dx * acc;
    };
    if (g.periodic()) {
        RealField c(M);
        for (std::size_t m = 0; m < M; ++m) c[m] = pair_re(m, (m + 1) % M);
        return c;
    }
    RealField c(M + 1, 0.0);
    for (std::size_t m = 0; m + 1 < M; ++m) c[m + 1] = pair_re(m, m + 1);
    return c;
}

}  // namespace

TaylorResult invert_taylor(const std::vector<RealField>& n_coeffs, const WaveFunction& psi0,
                              const HamiltonianSpec& spec, int K) {
    if (K < 0) throw std::invalid_argument("invert_taylor: K must be >= 0");
    if (K > 8) throw std::invalid_argument("invert_taylor: K capped at 8 (factorial round-off growth)");
    if (n_coeffs.size() < std::size_t(K) + 3)
        throw std::invalid_argument("invert_taylor: need density coefficients through order K+2");
    const Grid& g = psi0.grid;
    if (l1_diff(n_coeffs[0], density(psi0), g) > 1e-6)
        throw IncompatibleInitialState("invert_taylor: n^(0) does not match the initial state");

    // v-independent part of the generator (kinetic + interaction)
    HamiltonianSpec free_spec = spec;
    free_spec.v_static.assign(g.M, 0.0);

    const std::size_t M = g.M;
    const int rank = psi0.rank;
    auto mul_v = [&](const RealField& vf, const ComplexField& f) {
        ComplexField out(f.size());
        if (rank == 1) {
            kernels::mul_real(out.data(), vf.data(), f.data(), f.size());
        } else {
            for (std::size_t i = 0; i < M; ++i)
                for (std::size_t j = 0; j < M; ++j)
                    out[i * M + j] = (vf[i] + vf[j]) * f[i * M + j];
        }
        return out;
    };

    // binomials up to K
    std::vector<std::vector<double>> binom(K + 1);
    for (int k = 0; k <= K; ++k) {
        binom[k].assign(k + 1, 1.0);
        for (int l = 1; l < k; ++l) binom[k][l] = binom[k - 1][l - 1] + binom[k - 1][l];
    }

    std::vector<ComplexField> psi_c{psi0.amplitudes};
    std::vector<ComplexField> a_psi{apply_hamiltonian(free_spec, psi0.amplitudes)};
    std::vector<ComplexField> aa_psi{apply_hamiltonian(free_spec, a_psi[0])};
    std::vector<RealField> v_coeffs;

    // marginal over the second coordinate (identity in rank 1)
    auto marginal = [&](auto&& f) -> RealField {
        RealField out(M);
        if (rank == 1) {
            for (std::size_t m = 0; m < M; ++m) out[m] = f(m);
        } else {
            for (std::size_t i = 0; i < M; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < M; ++j) acc += f(i * M + j);
                out[i] = 2.0 * g.dx * acc;
            }
        }
        return out;
    };

    const RealField c0 = correlation_links(psi_c[0], psi_c[0], g, rank);

    for (int k = 0; k <= K; ++k) {
        // Leibniz coefficients of the internal-force field
        // q = N int ( |A psi|^2 - Re(psi^* A^2 psi) ) dxbar * 2
        RealField q_k = marginal([&](std::size_t idx) {
            cplx acc = 0.0;
            for (int m = 0; m <= k; ++m) {
                const double cb = binom[k][m];
                acc += cb * (std::conj(a_psi[m][idx]) * a_psi[k - m][idx] -
                             std::conj(psi_c[m][idx]) * aa_psi[k - m][idx]);
            }
            return 2.0 * acc.real();
        });

        // right-hand side with the lower-order cross couplings moved over
        RealField rhs = q_k;
        for (std::size_t m = 0; m < M; ++m) rhs[m] -= n_coeffs[k + 2][m];
        for (int l = 0; l < k; ++l) {
            RealField c_kl(g.periodic() ? M : M + 1, 0.0);
            for (int m = 0; m <= k - l; ++m) {
                const RealField part = correlation_links(psi_c[m], psi_c[k - l - m], g, rank);
                const double cb = binom[k - l][m];
                for (std::size_t e = 0; e < part.size(); ++e) c_kl[e] += cb * part[e];
            }
            const RealField cross = sl_apply_links(c_kl, v_coeffs[l], g);
            for (std::size_t m = 0; m < M; ++m) rhs[m] -= binom[k][l] * cross[m];
        }

        v_coeffs.push_back(solve_links_floating(c0, rhs, g));

        if (k == K) break;
        // next state coefficient psi^(k+1) = -i (A psi^(k) + sum_l C(k,l) v^(l) psi^(k-l))
        ComplexField next = a_psi[k];
        for (int l = 0; l <= k; ++l) {
            const ComplexField vp = mul_v(v_coeffs[l], psi_c[k - l]);
            const double cb = binom[k][l];
            for (std::size_t e = 0; e < next.size(); ++e) next[e] += cb * vp[e];
        }
        for (cplx& z : next) z *= cplx(0.0, -1.0);
        psi_c.push_back(std::move(next));
        a_psi.push_back(apply_hamiltonian(free_spec, psi_c.back()));
        aa_psi.push_back(apply_hamiltonian(free_spec, a_psi.back()));
    }

    TaylorResult out;
    out.v_coeffs = std::move(v_coeffs);
    double factorial = 1.0;
    for (int k = 0; k <= K; ++k) {
        if (k > 0) factorial *= double(k);
        out.ratio_test.push_back(norm_l2(out.v_coeffs[k], g) / factorial);
    }
    return out;
}

}  // namespace densmap
