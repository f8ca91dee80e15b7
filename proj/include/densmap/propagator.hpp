// SPDX-License-Identifier: Apache-2.0
//
// Time evolution under time-dependent potentials. The workhorse is the
// stepwise-static scheme: the potential is frozen at the left endpoint of
// each substep and the static step applied by Crank-Nicolson,
//   (1 + i dt H/2) psi_new = (1 - i dt H/2) psi_old,
// which is exactly norm-preserving in exact arithmetic. Rank-1 steps solve a
// (cyclic) tridiagonal system directly; rank-2 steps run CG on the normal
// equations I + (dt/2)^2 H^2, whose condition number stays O(1).
//
// The potential trajectory passed to these routines is the complete scalar
// potential v(t, x); HamiltonianSpec contributes the grid, particle count and
// pair interaction only.

#pragma once

#include <string>
#include <vector>

#include "densmap/hamiltonian.hpp"

namespace densmap {

struct TimeGrid {
    double T = 0.0;       // horizon (atomic time units)
    std::size_t steps = 0;  // N_t
    double dt = 0.0;      // T / N_t

    std::size_t nodes() const { return steps + 1; }
    double time(std::size_t i) const { return double(i) * dt; }
};

TimeGrid make_time_grid(double T, std::size_t steps);

enum class PotentialGauge { MeanZero, Raw };

struct PotentialTrajectory {
    std::vector<RealField> v;  // one field per time node (hartree)
    Grid grid;
    TimeGrid tgrid;
    PotentialGauge gauge = PotentialGauge::Raw;
};

PotentialTrajectory make_potential_trajectory(std::vector<RealField> fields, const Grid& g,
                                              const TimeGrid& tg,
                                              PotentialGauge gauge = PotentialGauge::Raw);

// Remove the spatial mean at every node and retag as MeanZero.
void gauge_mean_zero(PotentialTrajectory& v);

struct Trajectory {
    std::vector<WaveFunction> states;  // one per time node
    TimeGrid tgrid;
    std::string method;
    double tolerance = 0.0;
    bool unitary = true;  // false for truncated series output
};

struct StepOptions {
    bool midpoint_sampling = false;  // mid-interval potential instead of left endpoint
};

// One Crank-Nicolson step of length dt under the frozen potential v_node.
WaveFunction cn_step(const HamiltonianSpec& spec, const RealField& v_node,
                     const WaveFunction& psi, double dt);

Trajectory propagate_stepwise_static(const WaveFunction& psi0, const PotentialTrajectory& v,
                                     const HamiltonianSpec& spec, StepOptions opts = {});

// Exact evolution of the discrete static operator via its full spectrum,
// psi(t) = sum_k <e_k, psi0> exp(-i eps_k t) e_k. The static potential (and
// interaction) comes from the spec here.
Trajectory propagate_spectral_static(const WaveFunction& psi0, const HamiltonianSpec& spec,
                                     const TimeGrid& tg);

// Truncated Dyson-Phillips series sum_{k<=K} Q_v^k U0 psi0 with the free part
// exact in the discrete eigenbasis and the time integral by trapezoid. The
// output is NOT renormalized; the truncation error is the observable.
Trajectory propagate_neumann_series(const WaveFunction& psi0, const PotentialTrajectory& v,
                                    int order);

// Trajectory derivative d psi([v; w], t) = -i int_0^t U(t,s) w(s) psi(s) ds,
// realized by stepwise-static propagation and trapezoidal quadrature (exact
// node recursion). Result is non-normalized by construction.
Trajectory functional_derivative_dpsi(const WaveFunction& psi0, const PotentialTrajectory& v,
                                      const PotentialTrajectory& w, const HamiltonianSpec& spec);

}  // namespace densmap
