// SPDX-License-Identifier: Apache-2.0
//
// Low-level arithmetic kernels shared by all field operations. Every kernel
// exists as a scalar reference implementation and, on x86-64, as an AVX2
// variant; the active backend is chosen once at startup from CPU features
// (override with the DENSMAP_SIMD environment variable or force_backend()).
// Complex arrays are interleaved (re, im) in the std::complex<double> layout.

#pragma once

#include <complex>
#include <cstddef>

namespace densmap::kernels {

using cplx = std::complex<double>;

struct Backend {
    const char* name;

    // y += a*x
    void (*axpy)(cplx* y, cplx a, const cplx* x, std::size_t n);
    // sum_i conj(x_i)*y_i
    cplx (*dot)(const cplx* x, const cplx* y, std::size_t n);
    // sum_i |x_i|^2
    double (*nrm2sq)(const cplx* x, std::size_t n);
    // out_i = |x_i|^2
    void (*abs2)(double* out, const cplx* x, std::size_t n);
    // x *= a
    void (*scale)(cplx* x, cplx a, std::size_t n);
    // sum_i x_i
    double (*sum)(const double* x, std::size_t n);
    // y_i = v_i * x_i (real weight on complex field)
    void (*mul_real)(cplx* y, const double* v, const cplx* x, std::size_t n);
    // y_i += v_i * x_i
    void (*fma_real)(cplx* y, const double* v, const cplx* x, std::size_t n);
    // out_m = (in_{m+1} - 2 in_m + in_{m-1}) * inv_dx2, periodic wrap
    void (*lap1d_periodic)(cplx* out, const cplx* in, std::size_t n, double inv_dx2);
    // same with zero padding outside [0, n)
    void (*lap1d_dirichlet)(cplx* out, const cplx* in, std::size_t n, double inv_dx2);
    void (*lap1d_periodic_r)(double* out, const double* in, std::size_t n, double inv_dx2);
    void (*lap1d_dirichlet_r)(double* out, const double* in, std::size_t n, double inv_dx2);
};

const Backend& scalar_backend();
#if defined(__x86_64__) || defined(_M_X64)
const Backend* avx2_backend();  // nullptr when the CPU lacks AVX2
#endif

// Active backend (runtime-selected; "scalar" or "avx2").
const Backend& active();
const char* active_name();

// Test hook: force a backend by name, returns false if unavailable.
bool force_backend(const char* name);

// Convenience forwarders through the active backend.
inline void axpy(cplx* y, cplx a, const cplx* x, std::size_t n) { active().axpy(y, a, x, n); }
inline cplx dot(const cplx* x, const cplx* y, std::size_t n) { return active().dot(x, y, n); }
inline double nrm2sq(const cplx* x, std::size_t n) { return active().nrm2sq(x, n); }
inline void abs2(double* out, const cplx* x, std::size_t n) { active().abs2(out, x, n); }
inline void scale(cplx* x, cplx a, std::size_t n) { active().scale(x, a, n); }
inline double sum(const double* x, std::size_t n) { return active().sum(x, n); }
inline void mul_real(cplx* y, const double* v, const cplx* x, std::size_t n) { active().mul_real(y, v, x, n); }
inline void fma_real(cplx* y, const double* v, const cplx* x, std::size_t n) { active().fma_real(y, v, x, n); }
inline void lap1d_periodic(cplx* out, const cplx* in, std::size_t n, double inv_dx2) { active().lap1d_periodic(out, in, n, inv_dx2); }
inline void lap1d_dirichlet(cplx* out, const cplx* in, std::size_t n, double inv_dx2) { active().lap1d_dirichlet(out, in, n, inv_dx2); }
inline void lap1d_periodic_r(double* out, const double* in, std::size_t n, double inv_dx2) { active().lap1d_periodic_r(out, in, n, inv_dx2); }
inline void lap1d_dirichlet_r(double* out, const double* in, std::size_t n, double inv_dx2) { active().lap1d_dirichlet_r(out, in, n, inv_dx2); }

}  // namespace densmap::kernels
