// SPDX-License-Identifier: Apache-2.0
//
// Linear response: first-order variation of observables along a potential
// perturbation, the frequency-domain response kernel from the spectral
// decomposition, and real-time density response to an impulsive kick. The
// density "operator" is represented by grid-cell averages (indicator / dx),
// so transition densities reduce to pointwise products of eigenstates
// (marginalized over the spectator coordinate for pairs).

#pragma once

#include <functional>

#include <Eigen/Dense>

#include "densmap/observables.hpp"

namespace densmap {

using GridOperator = std::function<ComplexField(const ComplexField&)>;

GridOperator multiplicative_operator(RealField diagonal);

// d<A>(t) = 2 Re <dpsi([v; w], t), A psi([v], t)>, one value per time node.
std::vector<double> kubo_response(const GridOperator& A, const WaveFunction& psi0,
                                  const PotentialTrajectory& v, const PotentialTrajectory& w,
                                  const HamiltonianSpec& spec);

// Expectation series <A>(t) along a trajectory (finite-difference oracle).
std::vector<double> expectation_series(const GridOperator& A, const Trajectory& traj);

struct ResponseKernel {
    std::vector<double> excitations;     // Omega_k = eps_k - eps_0, ascending
    std::vector<RealField> transitions;  // n_0k(x), grid-cell matrix elements
    double gamma = 0.0;                  // broadening (hartree)
    std::vector<double> omega;           // frequency grid
    Grid grid;

    // chi(omega; x, y) as a dense complex matrix.
    Eigen::MatrixXcd slice(double w) const;
    // sum_{x,y} |chi(omega; x, y)| dx dy per frequency node.
    std::vector<double> integrated_abs() const;
    // retarded time-domain kernel at gamma -> 0: zero for tau < 0, else
    // -2 sum_k sin(Omega_k tau) n_0k(x) n_0k(y).
    double time_kernel(double tau, std::size_t x, std::size_t y) const;
};

// Lehmann sum over the K lowest excitations of the static Hamiltonian.
// Throws std::domain_error on a degenerate ground state.
ResponseKernel chi_lehmann(const HamiltonianSpec& spec, std::size_t K, double gamma,
                           std::vector<double> omega_grid);

// Default frequency grid [0, 1.5 Omega_K].
std::vector<double> default_omega_grid(const HamiltonianSpec& spec, std::size_t K,
                                       std::size_t points);

struct KickResponse {
    std::vector<RealField> dn;  // delta n(t, x) / kappa ~ dt * chi(t; x, site)
    TimeGrid tgrid;
    std::size_t site = 0;
    double kappa = 0.0;
};

// Impulsive cell perturbation: one CN step under v + kappa eta_site (impulse
// kappa dt eta_site), then static evolution exact in the discrete eigenbasis.
// kappa must lie in [1e-6, 1e-1].
KickResponse chi_time_domain(const HamiltonianSpec& spec, std::size_t site, const TimeGrid& tg,
                             double kappa);

// |DFT|^2-peak frequency of a real series with a Hann window and parabolic
// interpolation around the maximum bin.
double dominant_frequency(const std::vector<double>& series, double dt);

}  // namespace densmap
