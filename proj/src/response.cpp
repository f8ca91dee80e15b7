// SPDX-License-Identifier: Apache-2.0

#include "densmap/response.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "densmap/kernels.hpp"

namespace densmap {

GridOperator multiplicative_operator(RealField diagonal) {
    return [diag = std::move(diagonal)](const ComplexField& f) {
        if (f.size() != diag.size())
            throw std::invalid_argument("multiplicative_operator: size mismatch");
        ComplexField out(f.size());
        kernels::mul_real(out.data(), diag.data(), f.data(), f.size());
        return out;
    };
}

std::vector<double> expectation_series(const GridOperator& A, const Trajectory& traj) {
    std::vector<double> out;
    out.reserve(traj.states.size());
    for (const WaveFunction& s : traj.states) {
        const ComplexField As = A(s.amplitudes);
        out.push_back((s.quad_weight() *
                       kernels::dot(s.amplitudes.data(), As.data(), s.size())).real());
    }
    return out;
}

std::vector<double> kubo_response(const GridOperator& A, const WaveFunction& psi0,
                                  const PotentialTrajectory& v, const PotentialTrajectory& w,
                                  const HamiltonianSpec& spec) {
    const Trajectory base = propagate_stepwise_static(psi0, v, spec);
    const Trajectory dpsi = functional_derivative_dpsi(psi0, v, w, spec);
    std::vector<double> out(base.states.size());
    for (std::size_t i = 0; i < base.states.size(); ++i) {
        const ComplexField As = A(base.states[i].amplitudes);
        const cplx ip = base.states[i].quad_weight() *
                        kernels::dot(dpsi.states[i].amplitudes.data(), As.data(), As.size());
        out[i] = 2.0 * ip.real();
    }
    return out;
}

Eigen::MatrixXcd ResponseKernel::slice(double w) const {
    const std::size_t M = grid.M;
    Eigen::MatrixXcd chi = Eigen::MatrixXcd::Zero(M, M);
    for (std::size_t k = 0; k < excitations.size(); ++k) {
        const cplx pole_minus = 1.0 / (cplx(w - excitations[k], gamma));
        const cplx pole_plus = 1.0 / (cplx(w + excitations[k], gamma));
        const RealField& t = transitions[k];
        for (std::size_t x = 0; x < M; ++x)
            for (std::size_t y = 0; y < M; ++y)
                chi(x, y) += t[x] * t[y] * (pole_minus - pole_plus);
    }
    return chi;
}

std::vector<double> ResponseKernel::integrated_abs() const {
    std::vector<double> out;
    out.reserve(omega.size());
    const double cell = grid.dx * grid.dx;
    for (double w : omega) {
        const Eigen::MatrixXcd chi = slice(w);
        double acc = 0.0;
        for (Eigen::Index i = 0; i < chi.rows(); ++i)
            for (Eigen::Index j = 0; j < chi.cols(); ++j) acc += std::abs(chi(i, j));
        out.push_back(acc * cell);
    }
    return out;
}

double ResponseKernel::time_kernel(double tau, std::size_t x, std::size_t y) const {
    if (tau < 0.0) return 0.0;
    double acc = 0.0;
    for (std::size_t k = 0; k < excitations.size(); ++k)
        acc += std::sin(excitations[k] * tau) * transitions[k][x] * transitions[k][y];
    return -2.0 * acc;
}

namespace {

// Grid-cell transition densities <psi_0, eta_x psi_k> for real eigenvectors.
RealField transition_density(const RealField& e0, const RealField& ek, const Grid& g, int particles) {
    const std::size_t M = g.M;
    RealField t(M, 0.0);
    if (particles == 1) {
        for (std::size_t m = 0; m < M; ++m) t[m] = e0[m] * ek[m];
        return t;
    }
    for (std::size_t i = 0; i < M; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < M; ++j) acc += e0[i * M + j] * ek[i * M + j];
        t[i] = 2.0 * g.dx * acc;
    }
    return t;
}

}  // namespace

ResponseKernel chi_lehmann(const HamiltonianSpec& spec, std::size_t K, double gamma,
                           std::vector<double> omega_grid) {
    const SpectralDecomposition sd = spectrum(spec, K + 1);
    if (sd.degenerate_ground) throw std::domain_error("chi_lehmann: degenerate ground state");
    ResponseKernel kernel;
    kernel.grid = spec.grid;
    kernel.gamma = gamma;
    kernel.omega = std::move(omega_grid);
    kernel.excitations.reserve(K);
    kernel.transitions.reserve(K);
    for (std::size_t k = 1; k <= K; ++k) {
        kernel.excitations.push_back(sd.eigenvalues[k] - sd.eigenvalues[0]);
        kernel.transitions.push_back(
            transition_density(sd.eigenvectors[0], sd.eigenvectors[k], spec.grid, spec.particles));
    }
    return kernel;
}

std::vector<double> default_omega_grid(const HamiltonianSpec& spec, std::size_t K,
                                       std::size_t points) {
    const SpectralDecomposition sd = spectrum(spec, K + 1);
    const double top = 1.5 * (sd.eigenvalues[K] - sd.eigenvalues[0]);
    std::vector<double> w(points);
    for (std::size_t i = 0; i < points; ++i) w[i] = top * double(i) / double(points - 1);
    return w;
}

KickResponse chi_time_domain(const HamiltonianSpec& spec, std::size_t site, const TimeGrid& tg,
                             double kappa) {
    if (!(kappa >= 1e-6 && kappa <= 1e-1))
        throw std::invalid_argument("chi_time_domain: kick amplitude outside [1e-6, 1e-1]");
    if (site >= spec.grid.M) throw std::invalid_argument("chi_time_domain: site off the grid");
    const GroundState gs = ground_state(spec);
    const RealField n0 = density(gs.psi);

    // one step under v + kappa eta_site; the impulse integrates to
    // kappa dt eta_site, so dn/kappa approximates dt * chi(t; x, site)
    RealField v_kick = spec.v_static;
    v_kick[site] += kappa / spec.grid.dx;
    const WaveFunction kicked = cn_step(spec, v_kick, gs.psi, tg.dt);

    const Trajectory traj = propagate_spectral_static(kicked, spec, tg);
    KickResponse resp;
    resp.tgrid = tg;
    resp.site = site;
    resp.kappa = kappa;
    resp.dn.reserve(tg.nodes());
    for (const WaveFunction& s : traj.states) {
        RealField dn = density(s);
        for (std::size_t m = 0; m < dn.size(); ++m) dn[m] = (dn[m] - n0[m]) / kappa;
        resp.dn.push_back(std::move(dn));
    }
    return resp;
}

double dominant_frequency(const std::vector<double>& series, double dt) {
    using std::numbers::pi;
    const std::size_t n = series.size();
    if (n < 8) throw std::invalid_argument("dominant_frequency: series too short");
    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= double(n);

    auto power = [&](double w) {
        cplx acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double hann = 0.5 * (1.0 - std::cos(2.0 * pi * double(i) / double(n - 1)));
            acc += hann * (series[i] - mean) * std::polar(1.0, -w * double(i) * dt);
        }
        return std::norm(acc);
    };

    const double dw = 2.0 * pi / (double(n) * dt);
    double best_w = dw, best_p = 0.0;
    for (std::size_t k = 1; k < n / 2; ++k) {
        const double p = power(double(k) * dw);
        if (p > best_p) {
            best_p = p;
            best_w = double(k) * dw;
        }
    }
    // parabolic refinement around the peak bin
    const double pl = power(best_w - dw), pr = power(best_w + dw);
    const double denom = pl - 2.0 * best_p + pr;
    if (std::abs(denom) > 0.0) {
        const double shift = 0.5 * (pl - pr) / denom;
        best_w += shift * dw;
    }
    return best_w;
}

}  // namespace densmap
