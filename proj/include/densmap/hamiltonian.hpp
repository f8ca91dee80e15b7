// SPDX-License-Identifier: Apache-2.0
//
// Discrete Hamiltonians H = -1/2 Laplacian + v (+ soft-core pair interaction
// for two particles), their spectra and ground states. The bare Coulomb kernel
// is replaced by lambda / sqrt(u^2 + a^2); on periodic grids u is the
// minimum-image separation, which keeps w(u) = w(-u) on the ring.

#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "densmap/wavefunction.hpp"

namespace densmap {

struct SoftCore {
    double lambda = 1.0;  // strength (hartree * bohr)
    double a = 1.0;       // softening (bohr)

    double operator()(double u) const;
};

struct HamiltonianSpec {
    Grid grid;
    RealField v_static;                  // hartree, size M (empty means zero)
    std::optional<SoftCore> interaction; // pair potential, N = 2 only
    int particles = 1;                   // N in {1, 2}
};

HamiltonianSpec make_spec(const Grid& g, RealField v_static = {}, int particles = 1,
                          std::optional<SoftCore> interaction = std::nullopt);

// w(x1 - x2) sampled on the tensor grid (M*M, row-major).
RealField interaction_field(const HamiltonianSpec& spec);

// Matrix-free application of H to a rank-1 or rank-2 field. Throws on grid or
// rank mismatch (N=2 spec with a rank-1 target and vice versa).
ComplexField apply_hamiltonian(const HamiltonianSpec& spec, const ComplexField& f);

// Dense symmetric materialization, dimension M (N=1) or M^2 (N=2).
Eigen::MatrixXd dense_hamiltonian(const HamiltonianSpec& spec);

struct SpectralDecomposition {
    std::vector<double> eigenvalues;      // ascending, hartree
    std::vector<RealField> eigenvectors;  // orthonormal in the discrete L2 product
    std::size_t dimension = 0;
    bool degenerate_ground = false;       // lowest gap below 1e-12
};

// K lowest eigenpairs of the assembled matrix (dense solve; dimension capped
// at 4096). Sign convention: first component above noise is positive.
SpectralDecomposition spectrum(const HamiltonianSpec& spec, std::size_t K);

struct GroundState {
    WaveFunction psi;
    double energy = 0.0;
    bool degenerate = false;
};

// Lowest eigenvector, normalized, real-positive global phase. Above dense
// dimension 4096 (rank 1 only) an inverse-iteration path is used.
GroundState ground_state(const HamiltonianSpec& spec);

// Rayleigh quotient <psi, H psi> for a normalized state.
double energy_expectation(const HamiltonianSpec& spec, const WaveFunction& psi);

}  // namespace densmap
