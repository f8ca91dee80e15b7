// SPDX-License-Identifier: Apache-2.0

#include "densmap/wavefunction.hpp"

#include <cmath>
#include <stdexcept>

#include "densmap/kernels.hpp"

namespace densmap {

WaveFunction make_wavefunction(ComplexField amplitudes, const Grid& g, Symmetry symmetry) {
    check_size(g, amplitudes.size(), "make_wavefunction");
    WaveFunction psi;
    psi.rank = amplitudes.size() == g.M ? 1 : 2;
    psi.amplitudes = std::move(amplitudes);
    psi.grid = g;
    psi.symmetry = psi.rank == 2 ? symmetry : Symmetry::None;
    return psi;
}

double norm(const WaveFunction& psi) {
    return std::sqrt(psi.quad_weight() * kernels::nrm2sq(psi.amplitudes.data(), psi.size()));
}

WaveFunction normalize(const WaveFunction& psi) {
    const double n = norm(psi);
    if (!(n > 0.0)) throw std::domain_error("normalize: zero input field");
    WaveFunction out = psi;
    kernels::scale(out.amplitudes.data(), cplx(1.0 / n, 0.0), out.size());
    return out;
}

namespace {

double nrm2sq_field(const ComplexField& f) { return kernels::nrm2sq(f.data(), f.size()); }

}  // namespace

double sobolev_norm(const WaveFunction& psi, int order) {
    if (order < 0 || order > 2) throw std::invalid_argument("sobolev_norm: order must be 0, 1 or 2");
    const double w = psi.quad_weight();
    double acc = kernels::nrm2sq(psi.amplitudes.data(), psi.size());
    if (order >= 1) {
        if (psi.rank == 1) {
            acc += nrm2sq_field(gradient_zero_padded(psi.amplitudes, psi.grid));
        } else {
            acc += nrm2sq_field(gradient_axis(psi.amplitudes, psi.grid, 0));
            acc += nrm2sq_field(gradient_axis(psi.amplitudes, psi.grid, 1));
        }
    }
    if (order == 2) {
        if (psi.rank == 1) {
            acc += nrm2sq_field(apply_laplacian(psi.amplitudes, psi.grid));
        } else {
            acc += nrm2sq_field(apply_laplacian_axis(psi.amplitudes, psi.grid, 0));
            acc += nrm2sq_field(apply_laplacian_axis(psi.amplitudes, psi.grid, 1));
            const ComplexField d1 = gradient_axis(psi.amplitudes, psi.grid, 0);
            acc += nrm2sq_field(gradient_axis(d1, psi.grid, 1));
        }
    }
    return std::sqrt(w * acc);
}

WaveFunction build_two_particle(const WaveFunction& phi_a, const WaveFunction& phi_b,
                                Symmetry symmetry) {
    if (phi_a.rank != 1 || phi_b.rank != 1)
        throw std::invalid_argument("build_two_particle: rank-1 orbitals expected");
    if (phi_a.grid.M != phi_b.grid.M || phi_a.grid.boundary != phi_b.grid.boundary)
        throw std::invalid_argument("build_two_particle: orbitals on different grids");
    const std::size_t M = phi_a.grid.M;
    ComplexField amp(M * M);
    const ComplexField& a = phi_a.amplitudes;
    const ComplexField& b = phi_b.amplitudes;
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < M; ++j) {
            cplx v = a[i] * b[j];
            if (symmetry == Symmetry::Symmetric) v += a[j] * b[i];
            if (symmetry == Symmetry::Antisymmetric) v -= a[j] * b[i];
            amp[i * M + j] = v;
        }
    WaveFunction psi = make_wavefunction(std::move(amp), phi_a.grid, symmetry);
    const double n = norm(psi);
    if (symmetry == Symmetry::Antisymmetric && n < 1e-12)
        throw std::domain_error("build_two_particle: antisymmetrized pair of identical orbitals is the zero state");
    return normalize(psi);
}

double symmetry_residual(const WaveFunction& psi) {
    if (psi.rank != 2 || psi.symmetry == Symmetry::None) return 0.0;
    const std::size_t M = psi.grid.M;
    const double sign = psi.symmetry == Symmetry::Symmetric ? 1.0 : -1.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < M; ++j) {
            const cplx r = psi.amplitudes[i * M + j] - sign * psi.amplitudes[j * M + i];
            worst = std::max(worst, std::abs(r));
        }
    return worst;
}

}  // namespace densmap
