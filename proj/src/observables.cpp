// SPDX-License-Identifier: Apache-2.0

#include "densmap/observables.hpp"

#include <cmath>
#include <stdexcept>

#include "densmap/kernels.hpp"

namespace densmap {

RealField density(const WaveFunction& psi) {
    const std::size_t M = psi.grid.M;
    if (psi.rank == 1) {
        RealField n(M);
        kernels::abs2(n.data(), psi.amplitudes.data(), M);
        return n;
    }
    RealField n(M, 0.0);
    for (std::size_t i = 0; i < M; ++i) {
        double acc = 0.0;
        const cplx* row = psi.amplitudes.data() + i * M;
        for (std::size_t j = 0; j < M; ++j) acc += std::norm(row[j]);
        n[i] = 2.0 * psi.grid.dx * acc;
    }
    return n;
}

DensityTrajectory density_trajectory(const Trajectory& traj, int particles) {
    DensityTrajectory out;
    out.particles = particles;
    out.grid = traj.states.front().grid;
    out.tgrid = traj.tgrid;
    out.n.reserve(traj.states.size());
    for (const WaveFunction& s : traj.states) out.n.push_back(density(s));
    return out;
}

RealField current_staggered(const WaveFunction& psi) {
    const Grid& g = psi.grid;
    const std::size_t M = g.M;
    auto link = [&](std::size_t lo, std::size_t hi) -> double {
        if (psi.rank == 1)
            return std::imag(std::conj(psi.amplitudes[lo]) * psi.amplitudes[hi]) / g.dx;
        double acc = 0.0;
        const cplx* a = psi.amplitudes.data() + lo * M;
        const cplx* b = psi.amplitudes.data() + hi * M;
        for (std::size_t j = 0; j < M; ++j) acc += std::imag(std::conj(a[j]) * b[j]);
        return 2.0 * acc;  // N dx sum / dx
    };
    if (g.periodic()) {
        RealField j(M);
        for (std::size_t m = 0; m < M; ++m) j[m] = link(m, (m + 1) % M);
        return j;
    }
    RealField j(M + 1, 0.0);  // wall links vanish with the zero boundary
    for (std::size_t m = 0; m + 1 < M; ++m) j[m + 1] = link(m, m + 1);
    return j;
}

RealField divergence_staggered(const RealField& j_half, const Grid& g) {
    const std::size_t M = g.M;
    RealField out(M);
    if (g.periodic()) {
        if (j_half.size() != M) throw std::invalid_argument("divergence_staggered: size mismatch");
        for (std::size_t m = 0; m < M; ++m)
            out[m] = (j_half[m] - j_half[(m + M - 1) % M]) / g.dx;
    } else {
        if (j_half.size() != M + 1) throw std::invalid_argument("divergence_staggered: size mismatch");
        for (std::size_t m = 0; m < M; ++m) out[m] = (j_half[m + 1] - j_half[m]) / g.dx;
    }
    return out;
}

namespace {

// Central first difference of a real rank-2 field along one axis (zero-padded
// on Dirichlet grids; |psi|^2 vanishes at the walls).
RealField d_axis(const RealField& f, const Grid& g, int axis) {
    const std::size_t M = g.M;
    RealField out(M * M, 0.0);
    const double h2 = 2.0 * g.dx;
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < M; ++j) {
            double hi = 0.0, lo = 0.0;
            if (axis == 0) {
                hi = (i + 1 < M) ? f[(i + 1) * M + j] : (g.periodic() ? f[0 * M + j] : 0.0);
                lo = (i > 0) ? f[(i - 1) * M + j] : (g.periodic() ? f[(M - 1) * M + j] : 0.0);
            } else {
                hi = (j + 1 < M) ? f[i * M + j + 1] : (g.periodic() ? f[i * M] : 0.0);
                lo = (j > 0) ? f[i * M + j - 1] : (g.periodic() ? f[i * M + M - 1] : 0.0);
            }
            out[i * M + j] = (hi - lo) / h2;
        }
    return out;
}

}  // namespace

RealField internal_force_q(const WaveFunction& psi, const HamiltonianSpec& spec) {
    const Grid& g = psi.grid;
    const std::size_t M = g.M;
    RealField q(M, 0.0);
    if (psi.rank == 1) {
        const ComplexField lap = apply_laplacian(psi.amplitudes, g);
        const ComplexField lap2 = apply_laplacian(lap, g);
        for (std::size_t m = 0; m < M; ++m)
            q[m] = 0.5 * std::norm(lap[m]) -
                   0.5 * std::real(std::conj(psi.amplitudes[m]) * lap2[m]);
        return q;
    }

    // kinetic part, first-coordinate Laplacians with the second integrated out
    const ComplexField lap1 = apply_laplacian_axis(psi.amplitudes, g, 0);
    const ComplexField lap11 = apply_laplacian_axis(lap1, g, 0);
    for (std::size_t i = 0; i < M; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < M; ++j) {
            const std::size_t k = i * M + j;
            acc += 0.5 * std::norm(lap1[k]) -
                   0.5 * std::real(std::conj(psi.amplitudes[k]) * lap11[k]);
        }
        q[i] = 2.0 * g.dx * acc;
    }

    if (spec.interaction) {
        // w(x1 - x2) (D2 D2 + D1 D2) |psi|^2, matched central differences
        RealField dens2(M * M);
        kernels::abs2(dens2.data(), psi.amplitudes.data(), M * M);
        const RealField d2 = d_axis(dens2, g, 1);
        const RealField d22 = d_axis(d2, g, 1);
        const RealField d12 = d_axis(d2, g, 0);
        const RealField w = interaction_field(spec);
        for (std::size_t i = 0; i < M; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < M; ++j) {
                const std::size_t k = i * M + j;
                acc += w[k] * (d22[k] + d12[k]);
            }
            q[i] += 2.0 * g.dx * acc;
        }
    }
    return q;
}

RealField internal_force_q_moment(const WaveFunction& psi, const HamiltonianSpec& spec) {
    if (psi.rank == 1) return internal_force_q(psi, spec);
    const Grid& g = psi.grid;
    const std::size_t M = g.M;
    HamiltonianSpec free_spec = spec;
    free_spec.v_static.assign(M, 0.0);
    const ComplexField a1 = apply_hamiltonian(free_spec, psi.amplitudes);
    const ComplexField a2 = apply_hamiltonian(free_spec, a1);
    RealField q(M);
    for (std::size_t i = 0; i < M; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < M; ++j) {
            const std::size_t k = i * M + j;
            acc += std::norm(a1[k]) - std::real(std::conj(psi.amplitudes[k]) * a2[k]);
        }
        q[i] = 4.0 * g.dx * acc;
    }
    return q;
}

RealField correlation_weights(const WaveFunction& psi) {
    const Grid& g = psi.grid;
    const std::size_t M = g.M;
    const ComplexField& a = psi.amplitudes;
    auto link = [&](std::size_t lo, std::size_t hi) -> double {
        if (psi.rank == 1) return std::real(std::conj(a[lo]) * a[hi]);
        double acc = 0.0;
        for (std::size_t j = 0; j < M; ++j)
            acc += std::real(std::conj(a[lo * M + j]) * a[hi * M + j]);
        return 2.0 * g.dx * acc;
    };
    if (g.periodic()) {
        RealField c(M);
        for (std::size_t m = 0; m < M; ++m) c[m] = link(m, (m + 1) % M);
        return c;
    }
    RealField c(M + 1, 0.0);
    for (std::size_t m = 0; m + 1 < M; ++m) c[m + 1] = link(m, m + 1);
    return c;
}

std::vector<double> dtt_series(const std::vector<double>& f, double dt) {
    const std::size_t n = f.size();
    if (n < 5) throw std::invalid_argument("dtt_series: need at least 5 time nodes");
    std::vector<double> out(n);
    const double idt2 = 1.0 / (dt * dt);
    auto forward = [&](std::size_t i) {
        return (2.0 * f[i] - 5.0 * f[i + 1] + 4.0 * f[i + 2] - f[i + 3]) * idt2;
    };
    auto backward = [&](std::size_t i) {
        return (2.0 * f[i] - 5.0 * f[i - 1] + 4.0 * f[i - 2] - f[i - 3]) * idt2;
    };
    out[0] = forward(0);
    out[1] = forward(1);
    for (std::size_t i = 2; i + 2 < n; ++i)
        out[i] = (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) *
                 idt2 / 12.0;
    out[n - 2] = backward(n - 2);
    out[n - 1] = backward(n - 1);
    return out;
}

std::vector<RealField> dtt_density(const DensityTrajectory& n) {
    const std::size_t nodes = n.n.size();
    if (nodes < 5) throw std::invalid_argument("dtt_density: need at least 5 time nodes");
    const std::size_t M = n.grid.M;
    std::vector<RealField> out(nodes, RealField(M));
    std::vector<double> series(nodes);
    for (std::size_t m = 0; m < M; ++m) {
        for (std::size_t i = 0; i < nodes; ++i) series[i] = n.n[i][m];
        const std::vector<double> dd = dtt_series(series, n.tgrid.dt);
        for (std::size_t i = 0; i < nodes; ++i) out[i][m] = dd[i];
    }
    return out;
}

std::vector<RealField> dt_density(const DensityTrajectory& n) {
    const std::size_t nodes = n.n.size();
    if (nodes < 3) throw std::invalid_argument("dt_density: need at least 3 time nodes");
    const std::size_t M = n.grid.M;
    const double dt = n.tgrid.dt;
    std::vector<RealField> out(nodes, RealField(M));
    for (std::size_t m = 0; m < M; ++m) {
        // third-order one-sided ends where possible: a lower-order end value
        // carries a different bias than the central interior and spoils later
        // differentiation of the result
        if (nodes >= 4) {
            out[0][m] = (-11.0 * n.n[0][m] + 18.0 * n.n[1][m] - 9.0 * n.n[2][m] +
                         2.0 * n.n[3][m]) /
                        (6.0 * dt);
            out[nodes - 1][m] = (11.0 * n.n[nodes - 1][m] - 18.0 * n.n[nodes - 2][m] +
                                 9.0 * n.n[nodes - 3][m] - 2.0 * n.n[nodes - 4][m]) /
                                (6.0 * dt);
        } else {
            out[0][m] = (-3.0 * n.n[0][m] + 4.0 * n.n[1][m] - n.n[2][m]) / (2.0 * dt);
            out[nodes - 1][m] = (3.0 * n.n[nodes - 1][m] - 4.0 * n.n[nodes - 2][m] +
                                 n.n[nodes - 3][m]) /
                                (2.0 * dt);
        }
        for (std::size_t i = 1; i + 1 < nodes; ++i)
            out[i][m] = (n.n[i + 1][m] - n.n[i - 1][m]) / (2.0 * dt);
    }
    return out;
}

std::vector<RealField> dtt_density_from_current(const Trajectory& traj) {
    const std::size_t nodes = traj.states.size();
    if (nodes < 3) throw std::invalid_argument("dtt_density_from_current: need at least 3 nodes");
    const Grid& g = traj.states.front().grid;
    const double dt = traj.tgrid.dt;
    std::vector<RealField> j(nodes);
    for (std::size_t i = 0; i < nodes; ++i) j[i] = current_staggered(traj.states[i]);
    std::vector<RealField> out(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        RealField dtj(j[0].size());
        if (i == 0)
            for (std::size_t m = 0; m < dtj.size(); ++m)
                dtj[m] = (-3.0 * j[0][m] + 4.0 * j[1][m] - j[2][m]) / (2.0 * dt);
        else if (i + 1 == nodes)
            for (std::size_t m = 0; m < dtj.size(); ++m)
                dtj[m] = (3.0 * j[i][m] - 4.0 * j[i - 1][m] + j[i - 2][m]) / (2.0 * dt);
        else
            for (std::size_t m = 0; m < dtj.size(); ++m)
                dtj[m] = (j[i + 1][m] - j[i - 1][m]) / (2.0 * dt);
        out[i] = divergence_staggered(dtj, g);
        for (double& v : out[i]) v = -v;
    }
    return out;
}

ForceBalance global_force_balance(const Trajectory& traj, const PotentialTrajectory& v) {
    const std::size_t nodes = traj.states.size();
    if (nodes != v.tgrid.nodes())
        throw std::invalid_argument("global_force_balance: trajectory/potential node mismatch");
    const Grid& g = traj.states.front().grid;
    ForceBalance out;
    out.boundary_flagged = !g.periodic();
    out.f_pot.resize(nodes);
    std::vector<double> dipole(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        const RealField n = density(traj.states[i]);
        const RealField gv = gradient(v.v[i], g);
        double acc = 0.0, mu = 0.0;
        for (std::size_t m = 0; m < g.M; ++m) {
            acc += n[m] * gv[m];
            mu += g.x[m] * n[m];
        }
        out.f_pot[i] = -acc * g.dx;
        dipole[i] = mu * g.dx;
    }
    out.f_newton = dtt_series(dipole, traj.tgrid.dt);
    return out;
}

WeightReport weight_diagnostics(const RealField& n, double s, const Grid& g,
                                const RealField* dt_j, const WaveFunction* psi) {
    if (!(s > 0.5)) throw std::invalid_argument("weight_diagnostics: s must exceed 1/2 in d = 1");
    if (n.size() != g.M) throw std::invalid_argument("weight_diagnostics: field size mismatch");
    constexpr double floor = 1e-14;
    WeightReport rep;

    double acc = 0.0;
    for (double v : n) acc += std::pow(std::max(v, floor), -s);
    rep.integral_n_minus_s = acc * g.dx;

    RealField root(g.M);
    for (std::size_t m = 0; m < g.M; ++m) root[m] = std::sqrt(std::max(n[m], 0.0));
    const RealField groot = gradient(root, g);
    double wz = 0.0;
    for (double v : groot) wz += v * v;
    rep.weizsaecker = wz * g.dx;

    if (dt_j) {
        if (dt_j->size() != g.M)
            throw std::invalid_argument("weight_diagnostics: dt_j size mismatch");
        double ff = 0.0;
        for (std::size_t m = 0; m < g.M; ++m)
            ff += (*dt_j)[m] * (*dt_j)[m] / std::max(n[m], floor);
        rep.finite_force = ff * g.dx;
    }

    if (psi) {
        const ComplexField gpsi = psi->rank == 1 ? gradient_zero_padded(psi->amplitudes, psi->grid)
                                                 : gradient_axis(psi->amplitudes, psi->grid, 0);
        const double bound =
            double(psi->rank == 1 ? 1 : 2) * psi->quad_weight() *
            kernels::nrm2sq(gpsi.data(), gpsi.size());
        rep.grad_psi_bound = bound;
        // equality holds for real non-sign-changing states; the two sides use
        // different wall stencils, so allow discretization slack
        rep.weizsaecker_bound_ok = rep.weizsaecker <= bound * (1.0 + 1e-4) + 1e-14;
    }
    return rep;
}

}  // namespace densmap
