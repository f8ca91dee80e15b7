// SPDX-License-Identifier: Apache-2.0

#include "densmap/sturm_liouville.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "densmap/linalg.hpp"

namespace densmap {

SLProblem make_sl_problem(RealField weight, RealField rhs, const Grid& g) {
    if (weight.size() != g.M || rhs.size() != g.M)
        throw std::invalid_argument("make_sl_problem: field sizes do not match grid");
    SLProblem p;
    p.weight = std::move(weight);
    p.rhs = std::move(rhs);
    p.grid = g;
    p.gauge = g.periodic() ? SLGauge::MeanZeroSolution : SLGauge::Dirichlet;
    return p;
}

RealField half_weights(const RealField& n, const Grid& g) {
    const std::size_t M = g.M;
    if (g.periodic()) {
        RealField h(M);
        for (std::size_t m = 0; m < M; ++m) h[m] = 0.5 * (n[m] + n[(m + 1) % M]);
        return h;
    }
    RealField h(M + 1);
    h[0] = n[0];
    for (std::size_t m = 1; m < M; ++m) h[m] = 0.5 * (n[m - 1] + n[m]);
    h[M] = n[M - 1];
    return h;
}

namespace {

void check_weight(const RealField& h) {
    for (double v : h)
        if (v <= kWeightFloor) throw DegenerateWeight("sturm_liouville: weight at or below degeneracy floor");
}

}  // namespace

RealField sl_apply_halfweights(const RealField& h, const RealField& v, const Grid& g) {
    const std::size_t M = g.M;
    const double s = 1.0 / (g.dx * g.dx);
    RealField out(M);
    if (g.periodic()) {
        for (std::size_t m = 0; m < M; ++m) {
            const double up = h[m] * (v[(m + 1) % M] - v[m]);
            const double dn = h[(m + M - 1) % M] * (v[m] - v[(m + M - 1) % M]);
            out[m] = -(up - dn) * s;
        }
    } else {
        for (std::size_t m = 0; m < M; ++m) {
            const double vp = (m + 1 < M) ? v[m + 1] : 0.0;
            const double vm = (m > 0) ? v[m - 1] : 0.0;
            const double up = h[m + 1] * (vp - v[m]);
            const double dn = h[m] * (v[m] - vm);
            out[m] = -(up - dn) * s;
        }
    }
    return out;
}

RealField sl_apply(const SLProblem& p, const RealField& v) {
    return sl_apply_halfweights(half_weights(p.weight, p.grid), v, p.grid);
}

double sl_weak_form(const SLProblem& p, const RealField& u, const RealField& v) {
    const std::size_t M = p.grid.M;
    const RealField h = half_weights(p.weight, p.grid);
    const double inv_dx = 1.0 / p.grid.dx;
    double acc = 0.0;
    if (p.grid.periodic()) {
        for (std::size_t m = 0; m < M; ++m) {
            const double du = (u[(m + 1) % M] - u[m]) * inv_dx;
            const double dv = (v[(m + 1) % M] - v[m]) * inv_dx;
            acc += h[m] * du * dv;
        }
    } else {
        for (std::size_t m = 0; m <= M; ++m) {
            const double u_hi = (m < M) ? u[m] : 0.0;
            const double u_lo = (m > 0) ? u[m - 1] : 0.0;
            const double v_hi = (m < M) ? v[m] : 0.0;
            const double v_lo = (m > 0) ? v[m - 1] : 0.0;
            acc += h[m] * (u_hi - u_lo) * (v_hi - v_lo) * inv_dx * inv_dx;
        }
    }
    return acc * p.grid.dx;
}

namespace {

// One direct pass: Dirichlet Thomas solve, or the periodic system reduced by
// grounding the last node (consistent once the rhs mean is removed).
RealField direct_pass(const Grid& grid, const RealField& rhs, const RealField& h) {
    const std::size_t M = grid.M;
    const double s = 1.0 / (grid.dx * grid.dx);
    if (!grid.periodic()) {
        std::vector<double> a(M), b(M), c(M);
        for (std::size_t m = 0; m < M; ++m) {
            b[m] = (h[m] + h[m + 1]) * s;
            a[m] = (m > 0) ? -h[m] * s : 0.0;
            c[m] = (m + 1 < M) ? -h[m + 1] * s : 0.0;
        }
        return tridiag_solve(a, b, c, rhs);
    }
    const std::size_t R = M - 1;
    std::vector<double> a(R), b(R), c(R), r(R);
    for (std::size_t m = 0; m < R; ++m) {
        const double h_lo = h[(m + M - 1) % M];
        const double h_hi = h[m];
        b[m] = (h_lo + h_hi) * s;
        a[m] = (m > 0) ? -h_lo * s : 0.0;
        c[m] = (m + 1 < R) ? -h_hi * s : 0.0;
        r[m] = rhs[m];
    }
    std::vector<double> vr = tridiag_solve(a, b, c, r);
    RealField v(M, 0.0);
    std::copy(vr.begin(), vr.end(), v.begin());
    return v;
}

}  // namespace

RealField solve_direct_halfweights(const RealField& h, const RealField& rhs_in, const Grid& grid) {
    const std::size_t M = grid.M;
    check_weight(h);

    RealField rhs = rhs_in;
    const double rhs_norm = norm_l2(rhs, grid);
    if (grid.periodic()) {
        const double mean = integrate(rhs, grid);
        // the absolute floor keeps all-round-off data (e.g. differentiated
        // constants) from tripping the relative compatibility check
        if (std::abs(mean) > 1e-8 * std::max(rhs_norm, 1e-30) &&
            std::abs(mean) > 1e-14 * std::max(1.0, grid.L))
            throw IncompatibleRHS("solve_direct_1d: periodic rhs has nonzero mean");
        // project the numerically tiny mean out before solving
        const double shift = mean / grid.L;
        for (double& v : rhs) v -= shift;
    }

    RealField v = direct_pass(grid, rhs, h);
    const double tol = 1e-10 * std::max(rhs_norm, 1.0);
    for (int pass = 0; pass < 4; ++pass) {
        RealField res = sl_apply_halfweights(h, v, grid);
        for (std::size_t m = 0; m < M; ++m) res[m] = rhs[m] - res[m];
        if (norm_l2(res, grid) <= 0.25 * tol) break;
        const RealField corr = direct_pass(grid, res, h);
        for (std::size_t m = 0; m < M; ++m) v[m] += corr[m];
    }
    if (grid.periodic()) remove_mean(v, grid);
    return v;
}

RealField solve_direct_1d(const SLProblem& p) {
    return solve_direct_halfweights(half_weights(p.weight, p.grid), p.rhs, p.grid);
}

RealField sl_apply_links(const RealField& c, const RealField& v, const Grid& g) {
    const std::size_t M = g.M;
    const double s = 1.0 / (g.dx * g.dx);
    RealField out(M);
    if (g.periodic()) {
        for (std::size_t m = 0; m < M; ++m) {
            const double up = c[m] * (v[(m + 1) % M] - v[m]);
            const double dn = c[(m + M - 1) % M] * (v[m] - v[(m + M - 1) % M]);
            out[m] = -(up - dn) * s;
        }
    } else {
        for (std::size_t m = 0; m < M; ++m) {
            const double up = (m + 1 < M) ? c[m + 1] * (v[m + 1] - v[m]) : 0.0;
            const double dn = (m > 0) ? c[m] * (v[m] - v[m - 1]) : 0.0;
            out[m] = -(up - dn) * s;
        }
    }
    return out;
}

RealField solve_links_floating(const RealField& c, const RealField& rhs_in, const Grid& g) {
    const std::size_t M = g.M;
    const double s = 1.0 / (g.dx * g.dx);
    const bool periodic = g.periodic();
    auto link_lo = [&](std::size_t m) -> double {  // link between m-1 and m
        return periodic ? c[(m + M - 1) % M] : c[m];
    };
    auto link_hi = [&](std::size_t m) -> double {  // link between m and m+1
        return periodic ? c[m] : c[m + 1];
    };
    for (std::size_t m = 0; m + 1 < M; ++m)
        if (link_hi(m) <= kWeightFloor)
            throw DegenerateWeight("solve_links_floating: weight at the degeneracy floor");

    RealField rhs = rhs_in;
    const double mean = integrate(rhs, g);
    const double domain = periodic ? g.L : g.dx * double(M);
    for (double& x : rhs) x -= mean / domain;

    const std::size_t R = M - 1;  // ground the last node
    std::vector<double> a(R), b(R), cc(R), r(R);
    for (std::size_t m = 0; m < R; ++m) {
        const double lo = (m > 0 || periodic) ? link_lo(m) : 0.0;
        const double hi = link_hi(m);
        b[m] = (lo + hi) * s;
        a[m] = (m > 0) ? -lo * s : 0.0;
        cc[m] = (m + 1 < R) ? -hi * s : 0.0;
        r[m] = rhs[m];
    }
    std::vector<double> vr = tridiag_solve(a, b, cc, r);
    RealField v(M, 0.0);
    std::copy(vr.begin(), vr.end(), v.begin());
    // one refinement pass against the full operator
    RealField res = sl_apply_links(c, v, g);
    for (std::size_t m = 0; m < M; ++m) res[m] = rhs[m] - res[m];
    for (std::size_t m = 0; m < R; ++m) r[m] = res[m];
    vr = tridiag_solve(a, b, cc, r);
    for (std::size_t m = 0; m < R; ++m) v[m] += vr[m];
    remove_mean(v, g);
    return v;
}

SLEigenSolution solve_eigenbasis(const SLProblem& p, std::size_t K) {
    const std::size_t M = p.grid.M;
    const RealField h = half_weights(p.weight, p.grid);
    check_weight(h);
    const std::size_t kernel_dim = p.grid.periodic() ? 1 : 0;
    if (K > M - kernel_dim)
        throw std::invalid_argument("solve_eigenbasis: K above dimension minus kernel");

    const double s = 1.0 / (p.grid.dx * p.grid.dx);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(M, M);
    if (p.grid.periodic()) {
        for (std::size_t m = 0; m < M; ++m) {
            const double h_lo = h[(m + M - 1) % M];
            A(m, m) = (h_lo + h[m]) * s;
            A(m, (m + 1) % M) += -h[m] * s;
            A(m, (m + M - 1) % M) += -h_lo * s;
        }
    } else {
        for (std::size_t m = 0; m < M; ++m) {
            A(m, m) = (h[m] + h[m + 1]) * s;
            if (m + 1 < M) {
                A(m, m + 1) = -h[m + 1] * s;
                A(m + 1, m) = -h[m + 1] * s;
            }
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(A);
    if (solver.info() != Eigen::Success) throw std::runtime_error("solve_eigenbasis: eigensolver failed");

    RealField rhs = p.rhs;
    if (p.grid.periodic()) {
        const double shift = integrate(rhs, p.grid) / p.grid.L;
        for (double& v : rhs) v -= shift;
    }

    SLEigenSolution out;
    out.basis.eigenvalues.resize(K);
    out.basis.eigenvectors.resize(K);
    out.solution.assign(M, 0.0);
    const double rescale = 1.0 / std::sqrt(p.grid.dx);
    for (std::size_t k = 0; k < K; ++k) {
        const std::size_t idx = k + kernel_dim;
        const double lambda = solver.eigenvalues()(idx);
        RealField e(M);
        for (std::size_t m = 0; m < M; ++m) e[m] = solver.eigenvectors()(m, idx) * rescale;
        const double coeff = inner(e, rhs, p.grid) / lambda;
        for (std::size_t m = 0; m < M; ++m) out.solution[m] += coeff * e[m];
        out.basis.eigenvalues[k] = lambda;
        out.basis.eigenvectors[k] = std::move(e);
    }
    if (p.grid.periodic()) remove_mean(out.solution, p.grid);
    return out;
}

namespace {

// Lanczos estimate of the smallest nonkernel eigenvalue, with the constant
// mode deflated on periodic grids. Full reorthogonalization; desk-scale M.
double lambda1_lanczos(const SLProblem& p) {
    const std::size_t M = p.grid.M;
    const std::size_t steps = std::min<std::size_t>(M - 1, 48);
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    auto deflate = [&](RealField& v) {
        if (!p.grid.periodic()) return;
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= double(M);
        for (double& x : v) x -= mean;
    };
    auto dot_e = [&](const RealField& a, const RealField& b) {
        double acc = 0.0;
        for (std::size_t m = 0; m < M; ++m) acc += a[m] * b[m];
        return acc;
    };
    RealField q(M);
    for (double& x : q) x = dist(rng);
    deflate(q);
    double nq = std::sqrt(dot_e(q, q));
    for (double& x : q) x /= nq;

    std::vector<RealField> basis{q};
    std::vector<double> alpha, beta;
    RealField q_prev(M, 0.0);
    double beta_prev = 0.0;
    for (std::size_t j = 0; j < steps; ++j) {
        RealField w = sl_apply(p, basis[j]);
        const double a = dot_e(basis[j], w);
        alpha.push_back(a);
        for (std::size_t m = 0; m < M; ++m)
            w[m] -= a * basis[j][m] + (j > 0 ? beta_prev * q_prev[m] : 0.0);
        for (const RealField& e : basis) {
            const double c = dot_e(e, w);
            for (std::size_t m = 0; m < M; ++m) w[m] -= c * e[m];
        }
        deflate(w);
        const double b = std::sqrt(dot_e(w, w));
        if (b < 1e-13) break;
        beta.push_back(b);
        for (double& x : w) x /= b;
        q_prev = basis[j];
        beta_prev = b;
        basis.push_back(std::move(w));
        if (basis.size() > steps) break;
    }
    const std::size_t n = alpha.size();
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        T(i, i) = alpha[i];
        if (i + 1 < n) {
            T(i, i + 1) = beta[i];
            T(i + 1, i) = beta[i];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    return es.eigenvalues()(0);
}

}  // namespace

AdmissibilityReport admissibility(const SLProblem& p, double s) {
    if (!(s > 0.5)) throw std::invalid_argument("admissibility: s must exceed 1/2 in d = 1");
    AdmissibilityReport rep;
    const RealField h = half_weights(p.weight, p.grid);
    constexpr double floor = 1e-14;
    double integral = 0.0;
    double hmin = h[0];
    for (double v : h) {
        hmin = std::min(hmin, v);
        integral += std::pow(std::max(v, floor), -s);
    }
    rep.integral_n_minus_s = integral * p.grid.dx;
    rep.passes = hmin > kWeightFloor;
    if (rep.passes) {
        rep.lambda1 = lambda1_lanczos(p);
        if (rep.lambda1 > 0.0) rep.solution_bound = norm_l2(p.rhs, p.grid) / rep.lambda1;
    }
    return rep;
}

}  // namespace densmap
