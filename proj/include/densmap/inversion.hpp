// SPDX-License-Identifier: Apache-2.0
//
// Potential reconstruction from a prescribed density trajectory: the global
// fixed-point iteration v_{i+1} = (1-alpha) v_i + alpha SL^-1(q[v_i] - dtt n),
// exact single-particle inversion through the polar (phase/amplitude)
// representation, the Taylor-coefficient recursion at t = 0, and the
// Kohn-Sham construction for pair densities. Every returned potential is
// mean-zero gauged per time node.

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "densmap/observables.hpp"
#include "densmap/sturm_liouville.hpp"

namespace densmap {

enum class DegeneracyPolicy { Fail, ReuseLast };

struct InversionConfig {
    std::optional<PotentialTrajectory> v0;  // initial guess, zero when absent
    double mixing = 1.0;                    // alpha in (0, 1]
    double tol_v = 1e-8;                    // on mean-removed sup-over-time L2 change
    std::size_t max_iterations = 200;
    std::optional<double> restart_interval;  // re-anchor the state every so often
    DegeneracyPolicy degeneracy = DegeneracyPolicy::Fail;
    // The internal propagations sample the potential at substep midpoints;
    // this removes the first-order sampling lag between the reconstruction
    // and the prescribed density (forward runs keep the left-endpoint
    // default of the propagator).
    bool midpoint_sampling = true;
};

struct FixedPointReport {
    std::size_t iterations = 0;
    std::vector<double> residuals;  // r_i = sup_t ||v_{i+1}(t) - v_i(t)||_2
    std::vector<double> ratios;     // xi_i = r_i / r_{i-1}
    double first_step_bound = 0.0;  // r_0 / (1 - max xi), +inf when max xi >= 1
    double rho_max_l1 = 0.0;        // max_t ||n[v] - n||_1 after the last iterate
    bool converged = false;
    bool degenerate_nodes_reused = false;
    AdmissibilityReport admissibility;  // of the initial-time weight, s = 1
};

std::pair<PotentialTrajectory, FixedPointReport> invert_fixed_point(
    const DensityTrajectory& n, const WaveFunction& psi0, const HamiltonianSpec& spec,
    const InversionConfig& cfg = {});

struct RhoReport {
    double max_l1 = 0.0;        // max_t ||rho||_1
    double rho0_l1 = 0.0;       // ||rho(0)||_1
    double dt_rho0_l1 = 0.0;    // ||dt rho(0)||_1
    double max_integral = 0.0;  // max_t |int rho|
};

RhoReport verify_rho_problem(const PotentialTrajectory& v, const DensityTrajectory& n_target,
                             const WaveFunction& psi0, const HamiltonianSpec& spec);

struct HJReport {
    double s0_consistency = 0.0;  // mean-removed L2 gap between solved S(0) and the given phase
};

// Exact single-particle route: solve -div(n grad S) = dt n per node, then
// v = (lap sqrt(n)) / (2 sqrt(n)) - (grad S)^2 / 2 - dt S. Needs n above the
// degeneracy floor everywhere and at least 3 time nodes. S0 is the t = 0
// phase of the generating state, used as a consistency check.
PotentialTrajectory invert_single_particle_hj(const DensityTrajectory& n, const RealField& S0,
                                              HJReport* report = nullptr);

// Kohn-Sham potential for an interacting pair density: the single-particle
// route applied to n/2; the returned potential drives one doubly-occupied
// orbital whose density 2 |phi|^2 reproduces n.
PotentialTrajectory construct_ks_potential(const DensityTrajectory& n, const RealField& S0,
                                           HJReport* report = nullptr);

struct TaylorResult {
    std::vector<RealField> v_coeffs;  // time-derivative coefficients v^(0..K)
    std::vector<double> ratio_test;   // ||v^(k)||_2 / k!, growth diagnostic
};

// Recursion for the Taylor coefficients of v at t = 0 from density
// coefficients n^(0..K+2) (time-derivative convention, not divided by k!).
// The divergence-form solves use the half-link correlation weight of the
// evolving state, which keeps the recursion exact for the discrete dynamics;
// K is capped at 8 (factorial round-off growth).
TaylorResult invert_taylor(const std::vector<RealField>& n_coeffs, const WaveFunction& psi0,
                              const HamiltonianSpec& spec, int K);

}  // namespace densmap
