// SPDX-License-Identifier: Apache-2.0
//
// Local-density energy components on spherically symmetric densities:
// Thomas-Fermi kinetic term, Hartree energy through the shell theorem, Dirac
// exchange, and the external-potential energy. The 3/10 (3 pi^2)^(2/3) and
// 3/4 (3/pi)^(1/3) prefactors assume three dimensions; the 1D helpers reuse
// them with that caveat.

#pragma once

#include <vector>

#include "densmap/grid.hpp"

namespace densmap {

struct RadialDensity {
    std::vector<double> r;  // radial nodes in (0, R], uniform
    RealField n;            // values (bohr^-3), nonnegative
    double R = 0.0;
};

// Uniform radial grid r_i = i R / M, i = 1..M (r = 0 excluded).
RadialDensity make_radial_density(double R, std::size_t M, RealField values);

// int f 4 pi r^2 dr by trapezoid, with the implicit r = 0 endpoint where the
// r^2 factor kills the integrand.
double radial_integral(const RadialDensity& d, const RealField& f);

double particle_number(const RadialDensity& d);

struct LdaComponents {
    double t_tf = 0.0;   // kinetic (Thomas-Fermi)
    double v_h = 0.0;    // Hartree
    double v_x = 0.0;    // exchange magnitude (enters the total with -)
    double v_ext = 0.0;  // external
    double e_total = 0.0;  // t_tf + v_h - v_x + v_ext
};

// Throws std::domain_error on negative density entries. v_ext may be empty.
LdaComponents lda_components(const RadialDensity& n, const RealField& v_ext = {});

struct ScalingCheck {
    double t_ratio = 0.0;  // T[c n] / T[n], expected c^(5/3)
    double x_ratio = 0.0;  // V_x[c n] / V_x[n], expected c^(4/3)
    double h_ratio = 0.0;  // V_H[c n] / V_H[n], expected c^2
    double worst_relative_error = 0.0;
};

ScalingCheck lda_scaling_check(const RadialDensity& n, double c);

// Local pieces evaluated on a 1D sampled density with the 3D-derived
// prefactors (kinetic and exchange only; no Hartree).
LdaComponents lda_local_1d(const RealField& n, const Grid& g);

}  // namespace densmap
