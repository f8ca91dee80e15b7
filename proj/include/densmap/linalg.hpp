// SPDX-License-Identifier: Apache-2.0
//
// Thomas and Sherman-Morrison cyclic solvers for tridiagonal systems. Row m
// reads a[m] x[m-1] + b[m] x[m] + c[m] x[m+1] = r[m]; in the cyclic variant
// a[0] and c[M-1] are the periodic corner couplings.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace densmap {

template <typename T>
std::vector<T> tridiag_solve(const std::vector<T>& a, const std::vector<T>& b,
                             const std::vector<T>& c, const std::vector<T>& r) {
    const std::size_t n = b.size();
    if (n == 0) return {};
    std::vector<T> cp(n), x(n);
    T beta = b[0];
    if (beta == T{}) throw std::runtime_error("tridiag_solve: zero pivot");
    x[0] = r[0] / beta;
    for (std::size_t m = 1; m < n; ++m) {
        cp[m] = c[m - 1] / beta;
        beta = b[m] - a[m] * cp[m];
        if (beta == T{}) throw std::runtime_error("tridiag_solve: zero pivot");
        x[m] = (r[m] - a[m] * x[m - 1]) / beta;
    }
    for (std::size_t m = n - 1; m-- > 0;) x[m] -= cp[m + 1] * x[m + 1];
    return x;
}

template <typename T>
std::vector<T> cyclic_tridiag_solve(const std::vector<T>& a, const std::vector<T>& b,
                                    const std::vector<T>& c, const std::vector<T>& r) {
    const std::size_t n = b.size();
    if (n < 3) throw std::invalid_argument("cyclic_tridiag_solve: need at least 3 unknowns");
    const T alpha = a[0];      // A[0][n-1]
    const T beta = c[n - 1];   // A[n-1][0]
    const T gamma = -b[0];
    std::vector<T> bb = b;
    bb[0] = b[0] - gamma;
    bb[n - 1] = b[n - 1] - alpha * beta / gamma;
    std::vector<T> x = tridiag_solve(a, bb, c, r);
    std::vector<T> u(n, T{});
    u[0] = gamma;
    u[n - 1] = beta;
    std::vector<T> z = tridiag_solve(a, bb, c, u);
    const T vx = x[0] + alpha / gamma * x[n - 1];
    const T vz = z[0] + alpha / gamma * z[n - 1];
    const T factor = vx / (T(1) + vz);
    for (std::size_t m = 0; m < n; ++m) x[m] -= factor * z[m];
    return x;
}

}  // namespace densmap
