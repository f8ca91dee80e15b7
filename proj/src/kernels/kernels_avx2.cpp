// SPDX-License-Identifier: Apache-2.0
//
// AVX2 kernel variants. One __m256d carries two interleaved complex doubles.
// Reductions accumulate lane-wise and combine once at the end, so results can
// differ from the scalar backend by reassociation round-off only.

#include "densmap/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace densmap::kernels {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

void a_axpy(cplx* y, cplx a, const cplx* x, std::size_t n) {
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    std::size_t i = 0;
    auto* yd = reinterpret_cast<double*>(y);
    const auto* xd = reinterpret_cast<const double*>(x);
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        __m256d xs = _mm256_permute_pd(xv, 0x5);
        __m256d prod = _mm256_addsub_pd(_mm256_mul_pd(ar, xv), _mm256_mul_pd(ai, xs));
        __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(yv, prod));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

cplx a_dot(const cplx* x, const cplx* y, std::size_t n) {
    const auto* xd = reinterpret_cast<const double*>(x);
    const auto* yd = reinterpret_cast<const double*>(y);
    __m256d re_acc = _mm256_setzero_pd();
    __m256d im_acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        re_acc = _mm256_fmadd_pd(xv, yv, re_acc);              // xr*yr, xi*yi
        __m256d xs = _mm256_permute_pd(xv, 0x5);               // xi, xr
        im_acc = _mm256_fmadd_pd(xs, yv, im_acc);              // xi*yr, xr*yi
    }
    double re = hsum(re_acc);
    // odd lanes minus even lanes: sum(xr*yi - xi*yr)
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, im_acc);
    double im = (lanes[1] - lanes[0]) + (lanes[3] - lanes[2]);
    for (; i < n; ++i) {
        const cplx t = std::conj(x[i]) * y[i];
        re += t.real();
        im += t.imag();
    }
    return {re, im};
}

double a_nrm2sq(const cplx* x, std::size_t n) {
    const auto* xd = reinterpret_cast<const double*>(x);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d v = _mm256_loadu_pd(xd + 2 * i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double r = hsum(acc);
    for (; i < n; ++i) r += std::norm(x[i]);
    return r;
}

void a_abs2(double* out, const cplx* x, std::size_t n) {
    const auto* xd = reinterpret_cast<const double*>(x);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d a = _mm256_loadu_pd(xd + 2 * i);
        __m256d b = _mm256_loadu_pd(xd + 2 * i + 4);
        __m256d sq = _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
        // hadd interleaves 128-bit lanes: (|z0|,|z2|,|z1|,|z3|)
        _mm256_storeu_pd(out + i, _mm256_permute4x64_pd(sq, 0xD8));
    }
    for (; i < n; ++i) out[i] = std::norm(x[i]);
}

void a_scale(cplx* x, cplx a, std::size_t n) {
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    auto* xd = reinterpret_cast<double*>(x);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        __m256d xs = _mm256_permute_pd(xv, 0x5);
        _mm256_storeu_pd(xd + 2 * i,
                         _mm256_addsub_pd(_mm256_mul_pd(ar, xv), _mm256_mul_pd(ai, xs)));
    }
    for (; i < n; ++i) x[i] *= a;
}

double a_sum(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double r = hsum(acc);
    for (; i < n; ++i) r += x[i];
    return r;
}

inline __m256d dup_pairs(const double* v) {
    // (v0, v1) -> (v0, v0, v1, v1)
    __m128d lo = _mm_loadu_pd(v);
    __m256d t = _mm256_insertf128_pd(_mm256_castpd128_pd256(lo), lo, 1);
    return _mm256_permute4x64_pd(t, 0x50);
}

void a_mul_real(cplx* y, const double* v, const cplx* x, std::size_t n) {
    auto* yd = reinterpret_cast<double*>(y);
    const auto* xd = reinterpret_cast<const double*>(x);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        _mm256_storeu_pd(yd + 2 * i, _mm256_mul_pd(dup_pairs(v + i), xv));
    }
    for (; i < n; ++i) y[i] = v[i] * x[i];
}

void a_fma_real(cplx* y, const double* v, const cplx* x, std::size_t n) {
    auto* yd = reinterpret_cast<double*>(y);
    const auto* xd = reinterpret_cast<const double*>(x);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        _mm256_storeu_pd(yd + 2 * i, _mm256_fmadd_pd(dup_pairs(v + i), xv, yv));
    }
    for (; i < n; ++i) y[i] += v[i] * x[i];
}

// Stencil over the flattened double view; `shift` doubles between neighbours.
inline void lap_core(double* out, const double* in, std::size_t len, std::size_t shift,
                     double inv_dx2) {
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d s = _mm256_set1_pd(inv_dx2);
    std::size_t k = shift;
    for (; k + 4 <= len - shift; k += 4) {
        __m256d c = _mm256_loadu_pd(in + k);
        __m256d l = _mm256_loadu_pd(in + k - shift);
        __m256d r = _mm256_loadu_pd(in + k + shift);
        __m256d st = _mm256_sub_pd(_mm256_add_pd(l, r), _mm256_mul_pd(two, c));
        _mm256_storeu_pd(out + k, _mm256_mul_pd(st, s));
    }
    for (; k < len - shift; ++k)
        out[k] = (in[k - shift] + in[k + shift] - 2.0 * in[k]) * inv_dx2;
}

void a_lap_p(cplx* out, const cplx* in, std::size_t n, double inv_dx2) {
    if (n < 4) {
        scalar_backend().lap1d_periodic(out, in, n, inv_dx2);
        return;
    }
    auto* od = reinterpret_cast<double*>(out);
    const auto* id = reinterpret_cast<const double*>(in);
    lap_core(od, id, 2 * n, 2, inv_dx2);
    out[0] = (in[1] - 2.0 * in[0] + in[n - 1]) * inv_dx2;
    out[n - 1] = (in[0] - 2.0 * in[n - 1] + in[n - 2]) * inv_dx2;
}

void a_lap_d(cplx* out, const cplx* in, std::size_t n, double inv_dx2) {
    if (n < 4) {
        scalar_backend().lap1d_dirichlet(out, in, n, inv_dx2);
        return;
    }
    auto* od = reinterpret_cast<double*>(out);
    const auto* id = reinterpret_cast<const double*>(in);
    lap_core(od, id, 2 * n, 2, inv_dx2);
    out[0] = (in[1] - 2.0 * in[0]) * inv_dx2;
    out[n - 1] = (-2.0 * in[n - 1] + in[n - 2]) * inv_dx2;
}

void a_lap_pr(double* out, const double* in, std::size_t n, double inv_dx2) {
    if (n < 8) {
        scalar_backend().lap1d_periodic_r(out, in, n, inv_dx2);
        return;
    }
    lap_core(out, in, n, 1, inv_dx2);
    out[0] = (in[1] - 2.0 * in[0] + in[n - 1]) * inv_dx2;
    out[n - 1] = (in[0] - 2.0 * in[n - 1] + in[n - 2]) * inv_dx2;
}

void a_lap_dr(double* out, const double* in, std::size_t n, double inv_dx2) {
    if (n < 8) {
        scalar_backend().lap1d_dirichlet_r(out, in, n, inv_dx2);
        return;
    }
    lap_core(out, in, n, 1, inv_dx2);
    out[0] = (in[1] - 2.0 * in[0]) * inv_dx2;
    out[n - 1] = (-2.0 * in[n - 1] + in[n - 2]) * inv_dx2;
}

}  // namespace

const Backend* avx2_backend() {
    if (!__builtin_cpu_supports("avx2")) return nullptr;
    static const Backend b{
        "avx2",     a_axpy,     a_dot,   a_nrm2sq, a_abs2,   a_scale,  a_sum,
        a_mul_real, a_fma_real, a_lap_p, a_lap_d,  a_lap_pr, a_lap_dr,
    };
    return &b;
}

}  // namespace densmap::kernels

#endif  // x86-64
