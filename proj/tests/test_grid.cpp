// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "densmap/grid.hpp"

using namespace densmap;
using std::numbers::pi;

TEST_SUITE_BEGIN("grid");

TEST_CASE("uniform grid construction and node placement") {
    const Grid gp = build_grid(2 * pi, 8, Boundary::Periodic);
    CHECK(gp.dx == doctest::Approx(pi / 4));
    CHECK(gp.x[0] == 0.0);
    CHECK(gp.x.back() == doctest::Approx(2 * pi - pi / 4));

    const Grid gd = build_grid(1.0, 9, Boundary::Dirichlet);
    CHECK(gd.dx == doctest::Approx(0.1));
    CHECK(gd.x[0] == doctest::Approx(0.1));
    CHECK(gd.x.back() == doctest::Approx(0.9));

    CHECK_THROWS_AS(build_grid(-1.0, 64, Boundary::Periodic), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(1.0, 7, Boundary::Periodic), std::invalid_argument);
}

TEST_CASE("quadrature of constants") {
    const Grid gp = build_grid(2 * pi, 64, Boundary::Periodic);
    CHECK(integrate(RealField(64, 1.0), gp) == doctest::Approx(2 * pi).epsilon(1e-14));
    const Grid gd = build_grid(1.0, 9, Boundary::Dirichlet);
    CHECK(integrate(RealField(9, 1.0), gd) == doctest::Approx(9 * 0.1).epsilon(1e-14));
}

TEST_CASE("quadrature kills Fourier modes and integrates linears") {
    const Grid g = build_grid(2 * pi, 32, Boundary::Periodic);
    RealField f(g.M);
    for (std::size_t m = 0; m < g.M; ++m) f[m] = std::cos(g.x[m]);
    CHECK(std::abs(integrate(f, g)) < 1e-13);

    // Interior-node rectangle rule: fields that do not vanish at the walls
    // lose the two half cells, an O(dx) boundary effect (exact for H_0^1 data).
    const Grid gd = build_grid(1.0, 99, Boundary::Dirichlet);
    RealField lin(gd.M);
    for (std::size_t m = 0; m < gd.M; ++m) lin[m] = gd.x[m];
    CHECK(std::abs(integrate(lin, gd) - 0.5) <= gd.dx);
    RealField hump(gd.M);  // vanishes at both walls: second-order accurate
    for (std::size_t m = 0; m < gd.M; ++m) hump[m] = gd.x[m] * (1.0 - gd.x[m]);
    CHECK(integrate(hump, gd) == doctest::Approx(1.0 / 6.0).epsilon(1e-4));
}

TEST_CASE("laplacian of a constant vanishes") {
    const Grid g = build_grid(2 * pi, 16, Boundary::Periodic);
    const ComplexField lap = apply_laplacian(ComplexField(g.M, 1.0), g);
    for (const cplx& v : lap) CHECK(std::abs(v) < 1e-14);
}

TEST_CASE("laplacian plane-wave symbol") {
    const Grid g = build_grid(2 * pi, 32, Boundary::Periodic);
    for (int k : {1, 3, 5}) {
        ComplexField f(g.M);
        for (std::size_t m = 0; m < g.M; ++m) f[m] = std::polar(1.0, k * g.x[m]);
        const ComplexField lap = apply_laplacian(f, g);
        // direct evaluation of the stencil on a plane wave
        const double symbol = -(2.0 / (g.dx * g.dx)) * (1.0 - std::cos(k * g.dx));
        for (std::size_t m = 0; m < g.M; ++m)
            CHECK(std::abs(lap[m] - symbol * f[m]) < 1e-10 * std::abs(symbol));
    }
}

TEST_CASE("dirichlet laplacian of sin(pi x) converges at second order") {
    double err_prev = 0.0;
    for (std::size_t M : {49u, 99u, 199u}) {
        const Grid g = build_grid(1.0, M, Boundary::Dirichlet);
        ComplexField f(M);
        for (std::size_t m = 0; m < M; ++m) f[m] = std::sin(pi * g.x[m]);
        const ComplexField lap = apply_laplacian(f, g);
        double err = 0.0;
        for (std::size_t m = 0; m < M; ++m)
            err = std::max(err, std::abs(lap[m] + pi * pi * f[m]));
        if (err_prev > 0.0) CHECK(err_prev / err > 3.0);  // ~4x per doubling
        err_prev = err;
    }
}

TEST_CASE("summation by parts: periodic laplacian is self-adjoint") {
    const Grid g = build_grid(5.0, 24, Boundary::Periodic);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int rep = 0; rep < 5; ++rep) {
        ComplexField f(g.M), h(g.M);
        for (auto& z : f) z = {d(rng), d(rng)};
        for (auto& z : h) z = {d(rng), d(rng)};
        const cplx lhs = inner(f, apply_laplacian(h, g), g);
        const cplx rhs = inner(apply_laplacian(f, g), h, g);
        CHECK(std::abs(lhs - rhs) < 1e-12 * (1.0 + std::abs(lhs)));
    }
}

TEST_CASE("periodic laplacian spectrum is nonpositive with constant kernel") {
    const Grid g = build_grid(3.0, 16, Boundary::Periodic);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int rep = 0; rep < 8; ++rep) {
        ComplexField f(g.M);
        for (auto& z : f) z = {d(rng), d(rng)};
        const cplx q = inner(f, apply_laplacian(f, g), g);
        CHECK(q.real() <= 1e-12);
        CHECK(std::abs(q.imag()) < 1e-12);
    }
}

TEST_CASE("mean removal gauges a field to zero integral") {
    const Grid g = build_grid(2 * pi, 32, Boundary::Periodic);
    RealField f(g.M);
    for (std::size_t m = 0; m < g.M; ++m) f[m] = 1.7 + std::sin(g.x[m]);
    remove_mean(f, g);
    CHECK(std::abs(integrate(f, g)) < 1e-13);
}

TEST_CASE("minimum-image separation on the ring") {
    const Grid g = build_grid(10.0, 10, Boundary::Periodic);
    CHECK(separation(g, 9.0, 0.0) == doctest::Approx(-1.0));
    CHECK(separation(g, 2.0, 1.0) == doctest::Approx(1.0));
    const Grid gd = build_grid(10.0, 10, Boundary::Dirichlet);
    CHECK(separation(gd, 9.0, 0.0) == doctest::Approx(9.0));
}

TEST_SUITE_END();
