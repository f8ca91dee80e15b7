// SPDX-License-Identifier: Apache-2.0
//
// One- and two-particle wavefunctions on a grid. Rank-2 amplitudes are
// row-major M x M with x1 the row index. Spin is not represented; a singlet
// pair is modeled by a Symmetric spatial function.

#pragma once

#include "densmap/grid.hpp"

namespace densmap {

enum class Symmetry { None, Symmetric, Antisymmetric };

struct WaveFunction {
    int rank = 1;                 // 1 or 2
    ComplexField amplitudes;      // M (rank 1) or M*M (rank 2)
    Grid grid;
    Symmetry symmetry = Symmetry::None;

    std::size_t size() const { return amplitudes.size(); }
    double quad_weight() const { return rank == 1 ? grid.dx : grid.dx * grid.dx; }
};

WaveFunction make_wavefunction(ComplexField amplitudes, const Grid& g,
                               Symmetry symmetry = Symmetry::None);

// Discrete L2 norm, sqrt(sum |psi|^2 dx^rank).
double norm(const WaveFunction& psi);

// Returns psi scaled to unit norm; throws std::domain_error on zero input.
WaveFunction normalize(const WaveFunction& psi);

// Discrete Sobolev norm (sum_{|a|<=k} ||D^a psi||^2)^(1/2) with central first
// differences and the 3-point second difference; order in {0,1,2}.
double sobolev_norm(const WaveFunction& psi, int order);

// (Anti)symmetrized normalized product of two orbitals on the same grid.
// Antisymmetric with (numerically) identical orbitals is a zero state and
// throws std::domain_error.
WaveFunction build_two_particle(const WaveFunction& phi_a, const WaveFunction& phi_b,
                                Symmetry symmetry);

// Max entrywise |psi(x1,x2) -/+ psi(x2,x1)| residual for the tagged symmetry.
double symmetry_residual(const WaveFunction& psi);

}  // namespace densmap
