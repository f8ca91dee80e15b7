// SPDX-License-Identifier: Apache-2.0

#include "densmap/propagator.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "densmap/kernels.hpp"
#include "densmap/linalg.hpp"

namespace densmap {

TimeGrid make_time_grid(double T, std::size_t steps) {
    if (!(T > 0.0) || steps == 0) throw std::invalid_argument("make_time_grid: need T > 0 and steps > 0");
    return TimeGrid{T, steps, T / double(steps)};
}

PotentialTrajectory make_potential_trajectory(std::vector<RealField> fields, const Grid& g,
                                              const TimeGrid& tg, PotentialGauge gauge) {
    if (fields.size() != tg.nodes())
        throw std::invalid_argument("make_potential_trajectory: one field per time node expected");
    for (const RealField& f : fields)
        if (f.size() != g.M)
            throw std::invalid_argument("make_potential_trajectory: field size does not match grid");
    if (gauge == PotentialGauge::MeanZero) {
        for (const RealField& f : fields) {
            RealField tmp = f;
            if (std::abs(integrate(tmp, g)) > 1e-12 * std::max(1.0, g.L))
                throw std::invalid_argument("make_potential_trajectory: MeanZero tag on non-mean-zero data");
        }
    }
    PotentialTrajectory out;
    out.v = std::move(fields);
    out.grid = g;
    out.tgrid = tg;
    out.gauge = gauge;
    return out;
}

void gauge_mean_zero(PotentialTrajectory& v) {
    for (RealField& f : v.v) remove_mean(f, v.grid);
    v.gauge = PotentialGauge::MeanZero;
}

namespace {

// Total one-particle potential as a diagonal field on the configuration grid.
RealField config_potential(const HamiltonianSpec& spec, const RealField& v_node) {
    const std::size_t M = spec.grid.M;
    if (spec.particles == 1) return v_node;
    RealField diag = interaction_field(spec);
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < M; ++j) diag[i * M + j] += v_node[i] + v_node[j];
    return diag;
}

// H f with the spec's kinetic/interaction parts plus the frozen node potential.
ComplexField apply_h_node(const HamiltonianSpec& spec, const RealField& v_node,
                          const ComplexField& f) {
    const std::size_t M = spec.grid.M;
    if (spec.particles == 1) {
        ComplexField out = apply_laplacian(f, spec.grid);
        kernels::scale(out.data(), cplx(-0.5, 0.0), out.size());
        kernels::fma_real(out.data(), v_node.data(), f.data(), M);
        return out;
    }
    ComplexField out = apply_laplacian_axis(f, spec.grid, 0);
    const ComplexField l2 = apply_laplacian_axis(f, spec.grid, 1);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = -0.5 * (out[k] + l2[k]);
    const RealField diag = config_potential(spec, v_node);
    kernels::fma_real(out.data(), diag.data(), f.data(), out.size());
    return out;
}

WaveFunction cn_step_rank1(const HamiltonianSpec& spec, const RealField& v_node,
                           const WaveFunction& psi, double dt) {
    const std::size_t M = spec.grid.M;
    const double s = 1.0 / (spec.grid.dx * spec.grid.dx);
    const cplx z(0.0, 0.5 * dt);
    const cplx off = z * cplx(-0.5 * s);
    std::vector<cplx> a(M, off), b(M), c(M, off);
    for (std::size_t m = 0; m < M; ++m) b[m] = 1.0 + z * cplx(s + v_node[m]);

    ComplexField rhs = apply_h_node(spec, v_node, psi.amplitudes);
    for (std::size_t m = 0; m < M; ++m) rhs[m] = psi.amplitudes[m] - z * rhs[m];

    ComplexField next = spec.grid.periodic() ? cyclic_tridiag_solve(a, b, c, rhs)
                                             : tridiag_solve(a, b, c, rhs);
    WaveFunction out = psi;
    out.amplitudes = std::move(next);
    return out;
}

WaveFunction cn_step_rank2(const HamiltonianSpec& spec, const RealField& v_node,
                           const WaveFunction& psi, double dt) {
    // Solve (1 + izH) x = b through the Hermitian normal equations
    // (1 + z^2 H^2) x = (1 - izH) b, condition number 1 + (dt eps_max / 2)^2.
    const cplx z(0.0, 0.5 * dt);
    const double z2 = 0.25 * dt * dt;
    const ComplexField& p = psi.amplitudes;
    ComplexField hp = apply_h_node(spec, v_node, p);
    ComplexField b(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) b[k] = p[k] - z * hp[k];
    ComplexField hb = apply_h_node(spec, v_node, b);
    ComplexField rhs(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) rhs[k] = b[k] - z * hb[k];

    auto op = [&](const ComplexField& x) {
        ComplexField hx = apply_h_node(spec, v_node, x);
        ComplexField hhx = apply_h_node(spec, v_node, hx);
        for (std::size_t k = 0; k < x.size(); ++k) hhx[k] = x[k] + z2 * hhx[k];
        return hhx;
    };

    ComplexField x = p;  // warm start from the previous state
    ComplexField r = op(x);
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = rhs[k] - r[k];
    ComplexField d = r;
    double rs = kernels::nrm2sq(r.data(), r.size());
    const double target = 1e-26 * std::max(kernels::nrm2sq(rhs.data(), rhs.size()), 1e-300);
    for (int it = 0; it < 400 && rs > target; ++it) {
        const ComplexField ad = op(d);
        const cplx den = kernels::dot(d.data(), ad.data(), d.size());
        const cplx alpha = rs / den;
        kernels::axpy(x.data(), alpha, d.data(), x.size());
        kernels::axpy(r.data(), -alpha, ad.data(), r.size());
        const double rs_new = kernels::nrm2sq(r.data(), r.size());
        const double beta = rs_new / rs;
        for (std::size_t k = 0; k < d.size(); ++k) d[k] = r[k] + beta * d[k];
        rs = rs_new;
    }
    WaveFunction out = psi;
    out.amplitudes = std::move(x);
    return out;
}

void check_finite(const WaveFunction& psi, std::size_t step, const char* method) {
    const double n2 = kernels::nrm2sq(psi.amplitudes.data(), psi.size());
    if (!std::isfinite(n2))
        throw std::runtime_error(std::string(method) + ": non-finite state at step " +
                                 std::to_string(step));
}

}  // namespace

WaveFunction cn_step(const HamiltonianSpec& spec, const RealField& v_node,
                     const WaveFunction& psi, double dt) {
    if (v_node.size() != spec.grid.M) throw std::invalid_argument("cn_step: potential size mismatch");
    if (spec.particles == 1 && psi.rank != 1)
        throw std::invalid_argument("cn_step: N=1 spec with rank-2 state");
    if (spec.particles == 2 && psi.rank != 2)
        throw std::invalid_argument("cn_step: N=2 spec with rank-1 state");
    return psi.rank == 1 ? cn_step_rank1(spec, v_node, psi, dt)
                         : cn_step_rank2(spec, v_node, psi, dt);
}

Trajectory propagate_stepwise_static(const WaveFunction& psi0, const PotentialTrajectory& v,
                                     const HamiltonianSpec& spec, StepOptions opts) {
    if (v.grid.M != spec.grid.M || v.grid.boundary != spec.grid.boundary)
        throw std::invalid_argument("propagate_stepwise_static: potential grid mismatch");
    Trajectory traj;
    traj.tgrid = v.tgrid;
    traj.method = opts.midpoint_sampling ? "stepwise-static-cn-midpoint" : "stepwise-static-cn";
    traj.states.reserve(v.tgrid.nodes());
    traj.states.push_back(psi0);
    RealField mid(spec.grid.M);
    for (std::size_t i = 1; i < v.tgrid.nodes(); ++i) {
        const RealField* vn = &v.v[i - 1];
        if (opts.midpoint_sampling) {
            for (std::size_t m = 0; m < spec.grid.M; ++m)
                mid[m] = 0.5 * (v.v[i - 1][m] + v.v[i][m]);
            vn = &mid;
        }
        traj.states.push_back(cn_step(spec, *vn, traj.states.back(), v.tgrid.dt));
        check_finite(traj.states.back(), i, "propagate_stepwise_static");
    }
    return traj;
}

Trajectory propagate_spectral_static(const WaveFunction& psi0, const HamiltonianSpec& spec,
                                     const TimeGrid& tg) {
    const std::size_t dim = psi0.size();
    const SpectralDecomposition sd = spectrum(spec, dim);
    const double wq = psi0.quad_weight();
    std::vector<cplx> coeff(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        cplx acc = 0.0;
        for (std::size_t m = 0; m < dim; ++m) acc += sd.eigenvectors[k][m] * psi0.amplitudes[m];
        coeff[k] = wq * acc;
    }
    Trajectory traj;
    traj.tgrid = tg;
    traj.method = "spectral-static";
    traj.states.reserve(tg.nodes());
    for (std::size_t i = 0; i < tg.nodes(); ++i) {
        const double t = tg.time(i);
        ComplexField amp(dim, 0.0);
        for (std::size_t k = 0; k < dim; ++k) {
            const cplx phase = std::polar(1.0, -sd.eigenvalues[k] * t) * coeff[k];
            for (std::size_t m = 0; m < dim; ++m) amp[m] += phase * sd.eigenvectors[k][m];
        }
        WaveFunction snap = psi0;
        snap.amplitudes = std::move(amp);
        traj.states.push_back(std::move(snap));
    }
    return traj;
}

namespace {

// Free one-particle eigenbasis used by the series propagator.
struct FreeBasis {
    Eigen::MatrixXd E;       // columns orthonormal in the discrete product
    Eigen::VectorXd eps;
    double wq;

    explicit FreeBasis(const Grid& g) {
        const SpectralDecomposition sd = spectrum(make_spec(g), g.M);
        E.resize(g.M, g.M);
        eps.resize(g.M);
        for (std::size_t k = 0; k < g.M; ++k) {
            eps(k) = sd.eigenvalues[k];
            for (std::size_t m = 0; m < g.M; ++m) E(m, k) = sd.eigenvectors[k][m];
        }
        wq = g.dx;
    }
};

}  // namespace

Trajectory propagate_neumann_series(const WaveFunction& psi0, const PotentialTrajectory& v,
                                    int order) {
    if (order < 0) throw std::invalid_argument("propagate_neumann_series: order must be >= 0");
    const Grid& g = v.grid;
    const TimeGrid& tg = v.tgrid;
    const std::size_t nodes = tg.nodes();
    const FreeBasis fb(g);
    const bool rank2 = psi0.rank == 2;
    const std::size_t M = g.M;

    using Mat = Eigen::MatrixXcd;
    using Vec = Eigen::VectorXcd;

    // coefficient representation of a field in the free eigenbasis
    auto to_coeff = [&](const ComplexField& f) -> Mat {
        if (!rank2) {
            Eigen::Map<const Vec> fm(f.data(), M);
            return (fb.wq * (fb.E.transpose() * fm)).eval();
        }
        Eigen::Map<const Mat> fm(f.data(), M, M);  // column-major view of row-major data: transpose
        return (fb.wq * fb.wq * (fb.E.transpose() * fm.transpose() * fb.E)).eval();
    };
    auto from_coeff = [&](const Mat& c) -> ComplexField {
        ComplexField f(rank2 ? M * M : M);
        if (!rank2) {
            Vec fm = fb.E * c;
            for (std::size_t m = 0; m < M; ++m) f[m] = fm(m);
        } else {
            Mat fm = fb.E * c * fb.E.transpose();
            for (std::size_t i = 0; i < M; ++i)
                for (std::size_t j = 0; j < M; ++j) f[i * M + j] = fm(i, j);
        }
        return f;
    };
    auto phase_apply = [&](Mat c, double t, double sign) -> Mat {
        if (!rank2) {
            for (std::size_t k = 0; k < M; ++k) c(k, 0) *= std::polar(1.0, sign * fb.eps(k) * t);
            return c;
        }
        for (std::size_t a = 0; a < M; ++a)
            for (std::size_t b = 0; b < M; ++b)
                c(a, b) *= std::polar(1.0, sign * (fb.eps(a) + fb.eps(b)) * t);
        return c;
    };
    auto mul_potential = [&](const ComplexField& f, std::size_t node) -> ComplexField {
        ComplexField out(f.size());
        if (!rank2) {
            kernels::mul_real(out.data(), v.v[node].data(), f.data(), f.size());
        } else {
            for (std::size_t i = 0; i < M; ++i)
                for (std::size_t j = 0; j < M; ++j)
                    out[i * M + j] = (v.v[node][i] + v.v[node][j]) * f[i * M + j];
        }
        return out;
    };

    // zeroth term: free evolution of psi0 at every node
    const Mat c0 = to_coeff(psi0.amplitudes);
    std::vector<ComplexField> term(nodes), total(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        term[i] = from_coeff(phase_apply(c0, tg.time(i), -1.0));
        total[i] = term[i];
    }

    // iterated Q_v with trapezoidal prefix sums in the interaction picture
    for (int k = 1; k <= order; ++k) {
        std::vector<Mat> h(nodes);
        for (std::size_t j = 0; j < nodes; ++j)
            h[j] = phase_apply(to_coeff(mul_potential(term[j], j)), tg.time(j), +1.0);
        Mat prefix = h[0];
        for (std::size_t i = 0; i < nodes; ++i) {
            if (i > 0) prefix += h[i];
            Mat integral = prefix - 0.5 * h[0] - 0.5 * h[i];
            integral *= tg.dt;
            const Mat ci = phase_apply(integral, tg.time(i), -1.0);
            term[i] = from_coeff((cplx(0.0, -1.0) * ci).eval());
            for (std::size_t m = 0; m < term[i].size(); ++m) total[i][m] += term[i][m];
        }
    }

    Trajectory traj;
    traj.tgrid = tg;
    traj.method = "neumann-series-k" + std::to_string(order);
    traj.unitary = false;
    traj.states.reserve(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        WaveFunction snap = psi0;
        snap.amplitudes = std::move(total[i]);
        traj.states.push_back(std::move(snap));
    }
    return traj;
}

Trajectory functional_derivative_dpsi(const WaveFunction& psi0, const PotentialTrajectory& v,
                                      const PotentialTrajectory& w, const HamiltonianSpec& spec) {
    if (v.grid.M != w.grid.M || v.tgrid.nodes() != w.tgrid.nodes())
        throw std::invalid_argument("functional_derivative_dpsi: v and w grids mismatch");
    const Trajectory base = propagate_stepwise_static(psi0, v, spec);
    const std::size_t nodes = v.tgrid.nodes();
    const double dt = v.tgrid.dt;
    const std::size_t M = spec.grid.M;

    auto perturb = [&](const WaveFunction& psi, std::size_t node) -> WaveFunction {
        WaveFunction g = psi;
        if (psi.rank == 1) {
            kernels::mul_real(g.amplitudes.data(), w.v[node].data(), psi.amplitudes.data(), M);
        } else {
            for (std::size_t i = 0; i < M; ++i)
                for (std::size_t j = 0; j < M; ++j)
                    g.amplitudes[i * M + j] = (w.v[node][i] + w.v[node][j]) *
                                              psi.amplitudes[i * M + j];
        }
        return g;
    };

    // Trapezoid-in-s Duhamel, advanced by the exact node recursion
    // S_{i+1} = U(t_{i+1}, t_i) S_i - (i dt/2) [U(t_{i+1}, t_i) g_i + g_{i+1}].
    Trajectory out;
    out.tgrid = v.tgrid;
    out.method = "functional-derivative-duhamel";
    out.unitary = false;
    WaveFunction S = psi0;
    for (cplx& a : S.amplitudes) a = 0.0;
    out.states.push_back(S);
    const cplx half_step(0.0, -0.5 * dt);
    for (std::size_t i = 0; i + 1 < nodes; ++i) {
        const WaveFunction US = cn_step(spec, v.v[i], S, dt);
        const WaveFunction Ug = cn_step(spec, v.v[i], perturb(base.states[i], i), dt);
        const WaveFunction g_next = perturb(base.states[i + 1], i + 1);
        S = US;
        for (std::size_t m = 0; m < S.size(); ++m)
            S.amplitudes[m] += half_step * (Ug.amplitudes[m] + g_next.amplitudes[m]);
        out.states.push_back(S);
    }
    return out;
}

}  // namespace densmap
