// SPDX-License-Identifier: Apache-2.0
//
// Scalar reference kernels. These define the semantics every vector backend
// must reproduce (up to floating-point reassociation in the reductions).

#include "densmap/kernels.hpp"

namespace densmap::kernels {
namespace {

void s_axpy(cplx* y, cplx a, const cplx* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

cplx s_dot(const cplx* x, const cplx* y, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const cplx t = std::conj(x[i]) * y[i];
        re += t.real();
        im += t.imag();
    }
    return {re, im};
}

double s_nrm2sq(const cplx* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::norm(x[i]);
    return acc;
}

void s_abs2(double* out, const cplx* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::norm(x[i]);
}

void s_scale(cplx* x, cplx a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

double s_sum(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

void s_mul_real(cplx* y, const double* v, const cplx* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = v[i] * x[i];
}

void s_fma_real(cplx* y, const double* v, const cplx* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += v[i] * x[i];
}

template <typename T>
void s_lap_periodic(T* out, const T* in, std::size_t n, double inv_dx2) {
    if (n < 2) {
        for (std::size_t i = 0; i < n; ++i) out[i] = T{};
        return;
    }
    out[0] = (in[1] - 2.0 * in[0] + in[n - 1]) * inv_dx2;
    for (std::size_t m = 1; m + 1 < n; ++m)
        out[m] = (in[m + 1] - 2.0 * in[m] + in[m - 1]) * inv_dx2;
    out[n - 1] = (in[0] - 2.0 * in[n - 1] + in[n - 2]) * inv_dx2;
}

template <typename T>
void s_lap_dirichlet(T* out, const T* in, std::size_t n, double inv_dx2) {
    if (n < 2) {
        if (n == 1) out[0] = -2.0 * in[0] * inv_dx2;
        return;
    }
    out[0] = (in[1] - 2.0 * in[0]) * inv_dx2;
    for (std::size_t m = 1; m + 1 < n; ++m)
        out[m] = (in[m + 1] - 2.0 * in[m] + in[m - 1]) * inv_dx2;
    out[n - 1] = (-2.0 * in[n - 1] + in[n - 2]) * inv_dx2;
}

void s_lap_p(cplx* out, const cplx* in, std::size_t n, double d) { s_lap_periodic(out, in, n, d); }
void s_lap_d(cplx* out, const cplx* in, std::size_t n, double d) { s_lap_dirichlet(out, in, n, d); }
void s_lap_pr(double* out, const double* in, std::size_t n, double d) { s_lap_periodic(out, in, n, d); }
void s_lap_dr(double* out, const double* in, std::size_t n, double d) { s_lap_dirichlet(out, in, n, d); }

}  // namespace

const Backend& scalar_backend() {
    static const Backend b{
        "scalar", s_axpy,     s_dot,      s_nrm2sq, s_abs2,  s_scale,  s_sum,
        s_mul_real, s_fma_real, s_lap_p,  s_lap_d,  s_lap_pr, s_lap_dr,
    };
    return b;
}

}  // namespace densmap::kernels
