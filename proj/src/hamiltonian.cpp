// SPDX-License-Identifier: Apache-2.0

#include "densmap/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>

#include "densmap/kernels.hpp"
#include "densmap/linalg.hpp"

namespace densmap {

double SoftCore::operator()(double u) const { return lambda / std::sqrt(u * u + a * a); }

HamiltonianSpec make_spec(const Grid& g, RealField v_static, int particles,
                          std::optional<SoftCore> interaction) {
    if (particles != 1 && particles != 2)
        throw std::invalid_argument("make_spec: particle count must be 1 or 2");
    if (!v_static.empty() && v_static.size() != g.M)
        throw std::invalid_argument("make_spec: static potential size does not match grid");
    if (v_static.empty()) v_static.assign(g.M, 0.0);
    HamiltonianSpec spec;
    spec.grid = g;
    spec.v_static = std::move(v_static);
    spec.interaction = interaction;
    spec.particles = particles;
    return spec;
}

RealField interaction_field(const HamiltonianSpec& spec) {
    const std::size_t M = spec.grid.M;
    RealField w(M * M, 0.0);
    if (!spec.interaction) return w;
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < M; ++j)
            w[i * M + j] = (*spec.interaction)(separation(spec.grid, spec.grid.x[i], spec.grid.x[j]));
    return w;
}

ComplexField apply_hamiltonian(const HamiltonianSpec& spec, const ComplexField& f) {
    const std::size_t M = spec.grid.M;
    if (spec.particles == 1) {
        if (f.size() != M) throw std::invalid_argument("apply_hamiltonian: rank-1 field expected for N=1");
        ComplexField out = apply_laplacian(f, spec.grid);
        kernels::scale(out.data(), cplx(-0.5, 0.0), out.size());
        kernels::fma_real(out.data(), spec.v_static.data(), f.data(), M);
        return out;
    }
    if (f.size() != M * M) throw std::invalid_argument("apply_hamiltonian: rank-2 field expected for N=2");
    ComplexField out = apply_laplacian_axis(f, spec.grid, 0);
    const ComplexField l2 = apply_laplacian_axis(f, spec.grid, 1);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = -0.5 * (out[k] + l2[k]);
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < M; ++j)
            out[i * M + j] += (spec.v_static[i] + spec.v_static[j]) * f[i * M + j];
    if (spec.interaction) {
        const RealField w = interaction_field(spec);
        kernels::fma_real(out.data(), w.data(), f.data(), out.size());
    }
    return out;
}

Eigen::MatrixXd dense_hamiltonian(const HamiltonianSpec& spec) {
    const std::size_t M = spec.grid.M;
    const double s = 1.0 / (spec.grid.dx * spec.grid.dx);
    if (spec.particles == 1) {
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(M, M);
        for (std::size_t m = 0; m < M; ++m) {
            H(m, m) = s + spec.v_static[m];
            if (m + 1 < M) {
                H(m, m + 1) = -0.5 * s;
                H(m + 1, m) = -0.5 * s;
            }
        }
        if (spec.grid.periodic()) {
            H(0, M - 1) += -0.5 * s;
            H(M - 1, 0) += -0.5 * s;
        }
        return H;
    }
    const std::size_t dim = M * M;
    if (dim > 4096) throw std::invalid_argument("dense_hamiltonian: dimension above 4096");
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
    const RealField w = interaction_field(spec);
    auto idx = [M](std::size_t i, std::size_t j) { return i * M + j; };
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < M; ++j) {
            const std::size_t row = idx(i, j);
            H(row, row) = 2.0 * s + spec.v_static[i] + spec.v_static[j] + w[row];
            auto couple = [&](std::size_t col) { H(row, col) += -0.5 * s; };
            if (i + 1 < M) couple(idx(i + 1, j));
            else if (spec.grid.periodic()) couple(idx(0, j));
            if (i > 0) couple(idx(i - 1, j));
            else if (spec.grid.periodic()) couple(idx(M - 1, j));
            if (j + 1 < M) couple(idx(i, j + 1));
            else if (spec.grid.periodic()) couple(idx(i, 0));
            if (j > 0) couple(idx(i, j - 1));
            else if (spec.grid.periodic()) couple(idx(i, M - 1));
        }
    return H;
}

namespace {

void fix_sign(RealField& v) {
    double peak = 0.0;
    for (double c : v) peak = std::max(peak, std::abs(c));
    const double tol = 1e-12 * peak;
    for (double c : v) {
        if (std::abs(c) > tol) {
            if (c < 0.0)
                for (double& e : v) e = -e;
            return;
        }
    }
}

GroundState ground_state_inverse_iteration(const HamiltonianSpec& spec) {
    // Rank-1 shifted inverse iteration for grids too large for a dense solve.
    const std::size_t M = spec.grid.M;
    const double s = 1.0 / (spec.grid.dx * spec.grid.dx);
    double vmin = spec.v_static[0];
    for (double v : spec.v_static) vmin = std::min(vmin, v);
    const double sigma = vmin - 1.0;  // below the spectrum
    std::vector<double> a(M, -0.5 * s), b(M), c(M, -0.5 * s);
    for (std::size_t m = 0; m < M; ++m) b[m] = s + spec.v_static[m] - sigma;
    RealField x(M, 1.0);
    double lambda = 0.0;
    for (int it = 0; it < 200; ++it) {
        RealField y = spec.grid.periodic() ? cyclic_tridiag_solve(a, b, c, x)
                                           : tridiag_solve(a, b, c, x);
        double nrm = 0.0;
        for (double v : y) nrm += v * v;
        nrm = std::sqrt(nrm * spec.grid.dx);
        for (double& v : y) v /= nrm;
        double num = 0.0;
        ComplexField yc(M);
        for (std::size_t m = 0; m < M; ++m) yc[m] = y[m];
        const ComplexField Hy = apply_hamiltonian(spec, yc);
        for (std::size_t m = 0; m < M; ++m) num += y[m] * Hy[m].real();
        num *= spec.grid.dx;
        double delta = std::abs(num - lambda);
        lambda = num;
        x = y;
        if (it > 3 && delta < 1e-13 * std::max(1.0, std::abs(lambda))) break;
    }
    fix_sign(x);
    ComplexField amp(M);
    for (std::size_t m = 0; m < M; ++m) amp[m] = x[m];
    GroundState gs;
    gs.psi = normalize(make_wavefunction(std::move(amp), spec.grid));
    gs.energy = lambda;
    return gs;
}

}  // namespace

SpectralDecomposition spectrum(const HamiltonianSpec& spec, std::size_t K) {
    const std::size_t dim = spec.particles == 1 ? spec.grid.M : spec.grid.M * spec.grid.M;
    if (K > dim) throw std::invalid_argument("spectrum: K above operator dimension");
    if (dim > 4096) throw std::invalid_argument("spectrum: dense solve capped at dimension 4096");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense_hamiltonian(spec));
    if (solver.info() != Eigen::Success) throw std::runtime_error("spectrum: eigensolver failed");
    SpectralDecomposition out;
    out.dimension = dim;
    const double wq = spec.particles == 1 ? spec.grid.dx : spec.grid.dx * spec.grid.dx;
    const double rescale = 1.0 / std::sqrt(wq);
    out.eigenvalues.resize(K);
    out.eigenvectors.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
        out.eigenvalues[k] = solver.eigenvalues()(k);
        RealField v(dim);
        for (std::size_t m = 0; m < dim; ++m) v[m] = solver.eigenvectors()(m, k) * rescale;
        fix_sign(v);
        out.eigenvectors[k] = std::move(v);
    }
    if (dim >= 2) out.degenerate_ground = (solver.eigenvalues()(1) - solver.eigenvalues()(0)) < 1e-12;
    return out;
}

GroundState ground_state(const HamiltonianSpec& spec) {
    const std::size_t dim = spec.particles == 1 ? spec.grid.M : spec.grid.M * spec.grid.M;
    if (dim > 4096) {
        if (spec.particles != 1)
            throw std::invalid_argument("ground_state: two-particle grids above dense cap are not supported");
        return ground_state_inverse_iteration(spec);
    }
    SpectralDecomposition sd = spectrum(spec, std::min<std::size_t>(2, dim));
    ComplexField amp(dim);
    for (std::size_t m = 0; m < dim; ++m) amp[m] = sd.eigenvectors[0][m];
    GroundState gs;
    gs.psi = normalize(make_wavefunction(std::move(amp), spec.grid,
                                         spec.particles == 2 ? Symmetry::Symmetric : Symmetry::None));
    gs.energy = sd.eigenvalues[0];
    gs.degenerate = sd.degenerate_ground;
    return gs;
}

double energy_expectation(const HamiltonianSpec& spec, const WaveFunction& psi) {
    const ComplexField Hpsi = apply_hamiltonian(spec, psi.amplitudes);
    return (psi.quad_weight() * kernels::dot(psi.amplitudes.data(), Hpsi.data(), psi.size())).real();
}

}  // namespace densmap
