// SPDX-License-Identifier: Apache-2.0

#include "densmap/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "densmap/kernels.hpp"

namespace densmap {

Grid build_grid(double L, std::size_t M, Boundary boundary, double x0) {
    if (!(L > 0.0)) throw std::invalid_argument("build_grid: L must be positive");
    if (M < 8) throw std::invalid_argument("build_grid: M must be at least 8");
    Grid g;
    g.L = L;
    g.M = M;
    g.boundary = boundary;
    g.dx = (boundary == Boundary::Periodic) ? L / double(M) : L / double(M + 1);
    g.x.resize(M);
    const double offset = (boundary == Boundary::Periodic) ? 0.0 : g.dx;
    for (std::size_t m = 0; m < M; ++m) g.x[m] = x0 + offset + double(m) * g.dx;
    return g;
}

void check_size(const Grid& g, std::size_t n, const char* what) {
    if (n != g.M && n != g.M * g.M)
        throw std::invalid_argument(std::string(what) + ": field size does not match grid");
}

namespace {
double quad_weight(const Grid& g, std::size_t n) {
    return (n == g.M * g.M && g.M > 1) ? g.dx * g.dx : g.dx;
}
}  // namespace

double integrate(const RealField& f, const Grid& g) {
    check_size(g, f.size(), "integrate");
    return quad_weight(g, f.size()) * kernels::sum(f.data(), f.size());
}

cplx integrate(const ComplexField& f, const Grid& g) {
    check_size(g, f.size(), "integrate");
    cplx acc = 0.0;
    for (const cplx& v : f) acc += v;
    return quad_weight(g, f.size()) * acc;
}

cplx inner(const ComplexField& f, const ComplexField& h, const Grid& g) {
    if (f.size() != h.size()) throw std::invalid_argument("inner: size mismatch");
    check_size(g, f.size(), "inner");
    return quad_weight(g, f.size()) * kernels::dot(f.data(), h.data(), f.size());
}

double inner(const RealField& f, const RealField& h, const Grid& g) {
    if (f.size() != h.size()) throw std::invalid_argument("inner: size mismatch");
    check_size(g, f.size(), "inner");
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) acc += f[i] * h[i];
    return quad_weight(g, f.size()) * acc;
}

double norm_l2(const ComplexField& f, const Grid& g) {
    check_size(g, f.size(), "norm_l2");
    return std::sqrt(quad_weight(g, f.size()) * kernels::nrm2sq(f.data(), f.size()));
}

double norm_l2(const RealField& f, const Grid& g) {
    check_size(g, f.size(), "norm_l2");
    double acc = 0.0;
    for (double v : f) acc += v * v;
    return std::sqrt(quad_weight(g, f.size()) * acc);
}

double norm_l1(const RealField& f, const Grid& g) {
    check_size(g, f.size(), "norm_l1");
    double acc = 0.0;
    for (double v : f) acc += std::abs(v);
    return quad_weight(g, f.size()) * acc;
}

ComplexField apply_laplacian(const ComplexField& f, const Grid& g) {
    if (f.size() != g.M) throw std::invalid_argument("apply_laplacian: rank-1 field expected");
    ComplexField out(g.M);
    const double s = 1.0 / (g.dx * g.dx);
    if (g.periodic())
        kernels::lap1d_periodic(out.data(), f.data(), g.M, s);
    else
        kernels::lap1d_dirichlet(out.data(), f.data(), g.M, s);
    return out;
}

RealField apply_laplacian(const RealField& f, const Grid& g) {
    if (f.size() != g.M) throw std::invalid_argument("apply_laplacian: rank-1 field expected");
    RealField out(g.M);
    const double s = 1.0 / (g.dx * g.dx);
    if (g.periodic())
        kernels::lap1d_periodic_r(out.data(), f.data(), g.M, s);
    else
        kernels::lap1d_dirichlet_r(out.data(), f.data(), g.M, s);
    return out;
}

ComplexField apply_laplacian_axis(const ComplexField& f, const Grid& g, int axis) {
    const std::size_t M = g.M;
    if (f.size() != M * M) throw std::invalid_argument("apply_laplacian_axis: rank-2 field expected");
    ComplexField out(M * M);
    const double s = 1.0 / (g.dx * g.dx);
    if (axis == 1) {
        for (std::size_t i = 0; i < M; ++i) {
            if (g.periodic())
                kernels::lap1d_periodic(out.data() + i * M, f.data() + i * M, M, s);
            else
                kernels::lap1d_dirichlet(out.data() + i * M, f.data() + i * M, M, s);
        }
        return out;
    }
    if (axis != 0) throw std::invalid_argument("apply_laplacian_axis: axis must be 0 or 1");
    for (std::size_t i = 0; i < M; ++i) {
        const std::size_t up = g.periodic() ? (i + 1) % M : i + 1;
        const std::size_t dn = g.periodic() ? (i + M - 1) % M : i - 1;
        const cplx* row = f.data() + i * M;
        const cplx* rup = (up < M) ? f.data() + up * M : nullptr;
        const cplx* rdn = (i > 0 || g.periodic()) ? f.data() + dn * M : nullptr;
        cplx* o = out.data() + i * M;
        for (std::size_t j = 0; j < M; ++j) {
            cplx acc = -2.0 * row[j];
            if (rup) acc += rup[j];
            if (rdn) acc += rdn[j];
            o[j] = acc * s;
        }
    }
    return out;
}

namespace {

template <typename T>
std::vector<T> gradient_impl(const std::vector<T>& f, const Grid& g) {
    const std::size_t M = g.M;
    std::vector<T> out(M);
    const double h2 = 2.0 * g.dx;
    for (std::size_t m = 1; m + 1 < M; ++m) out[m] = (f[m + 1] - f[m - 1]) / h2;
    if (g.periodic()) {
        out[0] = (f[1] - f[M - 1]) / h2;
        out[M - 1] = (f[0] - f[M - 2]) / h2;
    } else {
        // second-order one-sided stencils at the domain ends
        out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / h2;
        out[M - 1] = (3.0 * f[M - 1] - 4.0 * f[M - 2] + f[M - 3]) / h2;
    }
    return out;
}

}  // namespace

RealField gradient(const RealField& f, const Grid& g) {
    if (f.size() != g.M) throw std::invalid_argument("gradient: rank-1 field expected");
    return gradient_impl(f, g);
}

ComplexField gradient(const ComplexField& f, const Grid& g) {
    if (f.size() != g.M) throw std::invalid_argument("gradient: rank-1 field expected");
    return gradient_impl(f, g);
}

ComplexField gradient_zero_padded(const ComplexField& f, const Grid& g) {
    if (f.size() != g.M) throw std::invalid_argument("gradient_zero_padded: rank-1 field expected");
    const std::size_t M = g.M;
    ComplexField out(M);
    const double h2 = 2.0 * g.dx;
    for (std::size_t m = 1; m + 1 < M; ++m) out[m] = (f[m + 1] - f[m - 1]) / h2;
    if (g.periodic()) {
        out[0] = (f[1] - f[M - 1]) / h2;
        out[M - 1] = (f[0] - f[M - 2]) / h2;
    } else {
        out[0] = f[1] / h2;
        out[M - 1] = -f[M - 2] / h2;
    }
    return out;
}

ComplexField gradient_axis(const ComplexField& f, const Grid& g, int axis) {
    const std::size_t M = g.M;
    if (f.size() != M * M) throw std::invalid_argument("gradient_axis: rank-2 field expected");
    ComplexField out(M * M);
    const double h2 = 2.0 * g.dx;
    auto at = [&](std::size_t i, std::size_t j) -> cplx {
        return f[i * M + j];
    };
    for (std::size_t i = 0; i < M; ++i) {
        for (std::size_t j = 0; j < M; ++j) {
            cplx hi, lo;
            if (axis == 0) {
                if (g.periodic()) {
                    hi = at((i + 1) % M, j);
                    lo = at((i + M - 1) % M, j);
                } else {
                    hi = (i + 1 < M) ? at(i + 1, j) : cplx(0.0);
                    lo = (i > 0) ? at(i - 1, j) : cplx(0.0);
                }
            } else {
                if (g.periodic()) {
                    hi = at(i, (j + 1) % M);
                    lo = at(i, (j + M - 1) % M);
                } else {
                    hi = (j + 1 < M) ? at(i, j + 1) : cplx(0.0);
                    lo = (j > 0) ? at(i, j - 1) : cplx(0.0);
                }
            }
            out[i * M + j] = (hi - lo) / h2;
        }
    }
    return out;
}

void remove_mean(RealField& f, const Grid& g) {
    if (f.size() != g.M) throw std::invalid_argument("remove_mean: rank-1 field expected");
    const double domain = g.periodic() ? g.L : g.dx * double(g.M);
    const double mean = integrate(f, g) / domain;
    for (double& v : f) v -= mean;
}

double separation(const Grid& g, double xi, double xj) {
    double u = xi - xj;
    if (g.periodic()) {
        u = std::remainder(u, g.L);
    }
    return u;
}

}  // namespace densmap
