// SPDX-License-Identifier: Apache-2.0
//
// Uniform 1D spatial grids with second-order central finite differences and
// rectangle-rule quadrature. Periodic grids exclude the duplicate endpoint;
// Dirichlet grids store interior nodes only, boundary values are identically
// zero. All operators in divergence form stay exactly symmetric on the grid.

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace densmap {

using cplx = std::complex<double>;
using RealField = std::vector<double>;
using ComplexField = std::vector<cplx>;

enum class Boundary { Periodic, Dirichlet };

struct Grid {
    double L = 0.0;        // domain length (bohr)
    std::size_t M = 0;     // node count
    Boundary boundary = Boundary::Periodic;
    double dx = 0.0;       // L/M (periodic) or L/(M+1) (Dirichlet)
    std::vector<double> x; // node coordinates, strictly increasing

    bool periodic() const { return boundary == Boundary::Periodic; }
};

// Throws std::invalid_argument for L <= 0 or M < 8.
Grid build_grid(double L, std::size_t M, Boundary boundary, double x0 = 0.0);

// Rectangle-rule quadrature, sum f_m dx (rank 1) or sum f_ij dx^2 (rank 2).
double integrate(const RealField& f, const Grid& g);
cplx integrate(const ComplexField& f, const Grid& g);

// Discrete L2 inner product <f, h> = dx^r sum conj(f) h.
cplx inner(const ComplexField& f, const ComplexField& h, const Grid& g);
double inner(const RealField& f, const RealField& h, const Grid& g);
double norm_l2(const ComplexField& f, const Grid& g);
double norm_l2(const RealField& f, const Grid& g);
double norm_l1(const RealField& f, const Grid& g);

// Bare second-order Laplacian stencil (f_{m+1} - 2 f_m + f_{m-1}) / dx^2,
// wrapped for periodic grids, zero-padded for Dirichlet. Rank 1 only.
ComplexField apply_laplacian(const ComplexField& f, const Grid& g);
RealField apply_laplacian(const RealField& f, const Grid& g);

// Rank-2 fields are row-major M x M with x1 the row index. These apply the
// same stencil along one coordinate.
ComplexField apply_laplacian_axis(const ComplexField& f, const Grid& g, int axis);

// Central first difference; one-sided second-order stencils at Dirichlet
// domain ends (the zero-padded form is wrong for generic non-field data).
RealField gradient(const RealField& f, const Grid& g);
ComplexField gradient(const ComplexField& f, const Grid& g);
ComplexField gradient_axis(const ComplexField& f, const Grid& g, int axis);

// Central first difference with zero padding (matches H_0^1 convention for
// wavefunction-like data on Dirichlet grids).
ComplexField gradient_zero_padded(const ComplexField& f, const Grid& g);

// Subtract the spatial mean so that integrate(f) == 0.
void remove_mean(RealField& f, const Grid& g);

// Minimum-image separation x_i - x_j on periodic grids, plain difference on
// Dirichlet ones.
double separation(const Grid& g, double xi, double xj);

void check_size(const Grid& g, std::size_t n, const char* what);

}  // namespace densmap
