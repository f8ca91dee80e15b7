// SPDX-License-Identifier: Apache-2.0

#include "densmap/functionals.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace densmap {

using std::numbers::pi;

namespace {
double tf_prefactor() { return 0.3 * std::pow(3.0 * pi * pi, 2.0 / 3.0); }
double dirac_prefactor() { return 0.75 * std::pow(3.0 / pi, 1.0 / 3.0); }
}  // namespace

RadialDensity make_radial_density(double R, std::size_t M, RealField values) {
    if (!(R > 0.0) || M < 8) throw std::invalid_argument("make_radial_density: bad grid");
    if (values.size() != M) throw std::invalid_argument("make_radial_density: value count mismatch");
    RadialDensity d;
    d.R = R;
    d.r.resize(M);
    for (std::size_t i = 0; i < M; ++i) d.r[i] = R * double(i + 1) / double(M);
    d.n = std::move(values);
    return d;
}

double radial_integral(const RadialDensity& d, const RealField& f) {
    const std::size_t M = d.r.size();
    if (f.size() != M) throw std::invalid_argument("radial_integral: size mismatch");
    const double dr = d.R / double(M);
    // trapezoid over [0, R] with the r = 0 endpoint contributing zero
    double acc = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
        const double cur = 4.0 * pi * d.r[i] * d.r[i] * f[i];
        acc += 0.5 * (prev + cur) * dr;
        prev = cur;
    }
    return acc;
}

double particle_number(const RadialDensity& d) { return radial_integral(d, d.n); }

LdaComponents lda_components(const RadialDensity& d, const RealField& v_ext) {
    const std::size_t M = d.r.size();
    for (double v : d.n)
        if (v < 0.0) throw std::domain_error("lda_components: negative density entry");

    LdaComponents out;
    RealField n53(M), n43(M);
    for (std::size_t i = 0; i < M; ++i) {
        n53[i] = std::pow(d.n[i], 5.0 / 3.0);
        n43[i] = std::pow(d.n[i], 4.0 / 3.0);
    }
    out.t_tf = tf_prefactor() * radial_integral(d, n53);
    out.v_x = dirac_prefactor() * radial_integral(d, n43);

    // Hartree by the shell theorem: phi(r) = Q(<r)/r + int_r^R 4 pi s n ds
    const double dr = d.R / double(M);
    RealField q_inner(M), tail(M);
    double q = 0.0, prev = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
        const double cur = 4.0 * pi * d.r[i] * d.r[i] * d.n[i];
        q += 0.5 * (prev + cur) * dr;
        q_inner[i] = q;
        prev = cur;
    }
    double t = 0.0;
    prev = 4.0 * pi * d.r[M - 1] * d.n[M - 1];
    tail[M - 1] = 0.0;
    for (std::size_t i = M - 1; i-- > 0;) {
        const double cur = 4.0 * pi * d.r[i] * d.n[i];
        t += 0.5 * (prev + cur) * dr;
        tail[i] = t;
        prev = cur;
    }
    RealField phi(M);
    for (std::size_t i = 0; i < M; ++i) phi[i] = q_inner[i] / d.r[i] + tail[i];
    RealField n_phi(M);
    for (std::size_t i = 0; i < M; ++i) n_phi[i] = d.n[i] * phi[i];
    out.v_h = 0.5 * radial_integral(d, n_phi);

    if (!v_ext.empty()) {
        if (v_ext.size() != M) throw std::invalid_argument("lda_components: v_ext size mismatch");
        RealField nv(M);
        for (std::size_t i = 0; i < M; ++i) nv[i] = d.n[i] * v_ext[i];
        out.v_ext = radial_integral(d, nv);
    }
    out.e_total = out.t_tf + out.v_h - out.v_x + out.v_ext;
    return out;
}

ScalingCheck lda_scaling_check(const RadialDensity& d, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("lda_scaling_check: scale must be positive");
    const LdaComponents base = lda_components(d);
    RadialDensity scaled = d;
    for (double& v : scaled.n) v *= c;
    const LdaComponents s = lda_components(scaled);
    ScalingCheck out;
    out.t_ratio = s.t_tf / base.t_tf;
    out.x_ratio = s.v_x / base.v_x;
    out.h_ratio = s.v_h / base.v_h;
    const double et = std::abs(out.t_ratio / std::pow(c, 5.0 / 3.0) - 1.0);
    const double ex = std::abs(out.x_ratio / std::pow(c, 4.0 / 3.0) - 1.0);
    const double eh = std::abs(out.h_ratio / (c * c) - 1.0);
    out.worst_relative_error = std::max(et, std::max(ex, eh));
    return out;
}

LdaComponents lda_local_1d(const RealField& n, const Grid& g) {
    for (double v : n)
        if (v < 0.0) throw std::domain_error("lda_local_1d: negative density entry");
    LdaComponents out;
    RealField n53(n.size()), n43(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) {
        n53[i] = std::pow(n[i], 5.0 / 3.0);
        n43[i] = std::pow(n[i], 4.0 / 3.0);
    }
    out.t_tf = tf_prefactor() * integrate(n53, g);
    out.v_x = dirac_prefactor() * integrate(n43, g);
    out.e_total = out.t_tf - out.v_x;
    return out;
}

}  // namespace densmap
