// SPDX-License-Identifier: Apache-2.0
//
// Densities, staggered currents and force diagnostics. The discrete current
// lives on half-grid links, J_{m+1/2} = N Im(psi_m^* psi_{m+1}) / dx
// (second coordinate integrated out for pairs); this is the unique form that
// makes the discrete continuity equation exact for the 3-point Laplacian.

#pragma once

#include <optional>
#include <vector>

#include "densmap/hamiltonian.hpp"
#include "densmap/propagator.hpp"

namespace densmap {

struct DensityTrajectory {
    std::vector<RealField> n;  // one field per time node (bohr^-1)
    int particles = 1;
    Grid grid;
    TimeGrid tgrid;
};

// N |psi|^2 (rank 1) or N * marginal over the second coordinate (rank 2).
RealField density(const WaveFunction& psi);

DensityTrajectory density_trajectory(const Trajectory& traj, int particles);

// Staggered link current. Periodic: M entries, entry m couples nodes m and
// m+1 (mod M). Dirichlet: M+1 entries including the wall links.
RealField current_staggered(const WaveFunction& psi);

// Node divergence (J_{m+1/2} - J_{m-1/2}) / dx of a staggered field.
RealField divergence_staggered(const RealField& j_half, const Grid& g);

// Internal-force field q(x): kinetic part from |lap psi|^2 - Re(psi* lap^2 psi)
// plus the pair-interaction part built from matched central differences of
// |psi|^2 (the combination integrates to exactly zero on periodic grids).
RealField internal_force_q(const WaveFunction& psi, const HamiltonianSpec& spec);

// Same field in its second-moment form, N int 2(|A psi|^2 - Re(psi* A^2 psi))
// with A the v-independent generator part. Identical to internal_force_q for
// one particle; for pairs this is the variant that pairs exactly with the
// half-link correlation weight in the discrete force identity.
RealField internal_force_q_moment(const WaveFunction& psi, const HamiltonianSpec& spec);

// Half-link correlation weight N int Re(psi_m^* psi_m') dxbar; link layout as
// in half_weights (wall links vanish with the zero boundary). This is the
// weight that makes the discrete divergence-of-force identity exact.
RealField correlation_weights(const WaveFunction& psi);

// Second time derivative of sampled data: 4th-order central stencils at
// interior nodes, one-sided 2nd-order at the first and last two. Needs at
// least 5 nodes.
std::vector<RealField> dtt_density(const DensityTrajectory& n);
std::vector<double> dtt_series(const std::vector<double>& f, double dt);

// First time derivative (central interior, one-sided 2nd-order ends).
std::vector<RealField> dt_density(const DensityTrajectory& n);

// Alternative live-trajectory route: -div dt j with dt j from central time
// differences of the staggered current (which already carries N).
std::vector<RealField> dtt_density_from_current(const Trajectory& traj);

struct ForceBalance {
    std::vector<double> f_pot;     // -int n grad(v) dx
    std::vector<double> f_newton;  // d^2/dt^2 int x n dx
    bool boundary_flagged = false; // Dirichlet domains lack the periodic telescoping
};

ForceBalance global_force_balance(const Trajectory& traj, const PotentialTrajectory& v);

struct WeightReport {
    double integral_n_minus_s = 0.0;   // floor-clamped at 1e-14
    double weizsaecker = 0.0;          // int |grad sqrt(n)|^2
    std::optional<double> finite_force;  // int |dt j|^2 / n when dt j given
    std::optional<double> grad_psi_bound;  // N ||grad psi||_2^2 when psi given
    bool weizsaecker_bound_ok = true;
};

// Requires s > 1/2 (d = 1). The floor applies to diagnostics only.
WeightReport weight_diagnostics(const RealField& n, double s, const Grid& g,
                                const RealField* dt_j = nullptr,
                                const WaveFunction* psi = nullptr);

}  // namespace densmap
