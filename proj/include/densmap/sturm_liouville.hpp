// SPDX-License-Identifier: Apache-2.0
//
// Weighted divergence-form problems -d/dx ( n(x) dv/dx ) = zeta on the grid.
// The discrete operator is A = D^T diag(n_half) D with the weight averaged to
// half-grid midpoints, so the weak form Q(u,v) = <Du, n Dv> is exactly
// symmetric. Periodic problems carry the constant kernel; solutions are
// gauge-fixed to zero spatial mean.

#pragma once

#include <cstddef>
#include <vector>

#include "densmap/errors.hpp"
#include "densmap/grid.hpp"

namespace densmap {

enum class SLGauge { MeanZeroSolution, Dirichlet };

struct SLProblem {
    RealField weight;  // n >= 0 on nodes
    RealField rhs;     // zeta
    Grid grid;
    SLGauge gauge = SLGauge::MeanZeroSolution;
};

SLProblem make_sl_problem(RealField weight, RealField rhs, const Grid& g);

// Degeneracy floor for the half-grid weight; below it the matrix is declared
// singular instead of regularized.
inline constexpr double kWeightFloor = 1e-12;

// Weight averaged to half-grid midpoints. Periodic: size M, entry m couples
// nodes m and m+1 (mod M). Dirichlet: size M+1 including the two wall links,
// which use the nearest interior node value.
RealField half_weights(const RealField& n, const Grid& g);

// A v with A = D^T diag(n_half) D.
RealField sl_apply(const SLProblem& p, const RealField& v);

// Q(u, v) = dx * sum n_half (Du)(Dv).
double sl_weak_form(const SLProblem& p, const RealField& u, const RealField& v);

// Direct tridiagonal / reduced-cyclic solve with iterative refinement until
// ||A v - zeta|| <= 1e-10 max(||zeta||, 1). Throws DegenerateWeight or
// IncompatibleRHS.
RealField solve_direct_1d(const SLProblem& p);

struct SLEigenbasis {
    std::vector<double> eigenvalues;      // ascending, kernel excluded
    std::vector<RealField> eigenvectors;  // orthonormal in discrete L2
};

struct SLEigenSolution {
    RealField solution;
    SLEigenbasis basis;
};

// Eigenbasis of A (kernel excluded on periodic grids) and the K-mode solution
// v = sum lambda_m^-1 <e_m, zeta> e_m.
SLEigenSolution solve_eigenbasis(const SLProblem& p, std::size_t K);

// Variants taking the half-link weight directly (periodic: M entries, entry m
// couples m and m+1 mod M; Dirichlet: M+1 entries including wall links).
RealField sl_apply_halfweights(const RealField& h, const RealField& v, const Grid& g);
RealField solve_direct_halfweights(const RealField& h, const RealField& rhs, const Grid& g);

// Same layout but wall links may be zero (weights from fields that vanish at
// the boundary). A_c then carries a constant kernel on either boundary type.
RealField sl_apply_links(const RealField& c, const RealField& v, const Grid& g);

// Grounded solve of A_c v = rhs for such constant-kernel operators: the mean
// of rhs is projected out (compatibility) and the solution gauged to zero
// mean. Throws DegenerateWeight when an interior link is at the floor.
RealField solve_links_floating(const RealField& c, const RealField& rhs, const Grid& g);

struct AdmissibilityReport {
    bool passes = false;
    double integral_n_minus_s = 0.0;  // clamped below at 1e-14
    double lambda1 = 0.0;             // smallest nonkernel eigenvalue estimate
    double solution_bound = 0.0;      // ||zeta|| / lambda1
};

// Diagnostic only; never blocks a solve. Requires s > 1/2 in d = 1.
AdmissibilityReport admissibility(const SLProblem& p, double s);

}  // namespace densmap
