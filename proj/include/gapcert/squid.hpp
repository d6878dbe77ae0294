#pragma once

#include <functional>
#include <string>

#include "gapcert/core.hpp"

namespace gapcert {

/// U(phi) sampled on an evenly spaced grid with Dirichlet ends.
struct Potential1D {
    std::function<double(double)> u;
    double phi_min = -1.0;
    double phi_max = 1.0;
    int points = 1001;
    /// Caller asserts U(-phi) = U(phi); the grid must then be symmetric with an odd point count.
    bool symmetric = false;
    std::string name;

    double spacing() const { return (phi_max - phi_min) / (points - 1); }
};

/// beta (phi^2 - 1)^2 on [-half_width, half_width].
Potential1D quartic_double_well(double beta, double half_width = 4.0, int points = 2001);
/// phi^2 / 2.
Potential1D harmonic_well(double half_width = 10.0, int points = 4001);
/// 0 for |phi| < 1, `wall` outside.
Potential1D box_well(double wall = 1e4, double half_width = 1.5, int points = 3001);

struct WellSolution {
    double e0 = 0.0;
    double e1 = 0.0;
    double gap = 0.0;
    VectorXr grid;
    /// Normalized so that sum psi^2 h = 1; psi0 > 0, psi1'(0) > 0 (or psi1 > 0 at its first extremum).
    VectorXr psi0;
    VectorXr psi1;
    double psi0_at_0 = 0.0;
    double psi1_deriv_at_0 = 0.0;
    /// int_0^max psi0 psi1 (trapezoid).
    double cross_integral = 0.0;
    double residual0 = 0.0;
    double residual1 = 0.0;
    /// Largest |psi| next to either boundary, relative to max |psi|.
    double leakage = 0.0;
    double mass = 1.0;
    bool symmetric = false;
};

/// Two lowest states of -(1/(2 mass)) d^2/dphi^2 + U with second-order differences.
/// Symmetric potentials are solved in the even and odd sectors separately.
WellSolution solve_well(const Potential1D& pot, double mass_scale = 1.0);

/// Same problem on the full grid, without using parity.
WellSolution solve_well_full(const Potential1D& pot, double mass_scale = 1.0);

/// gap * int_0 psi0 psi1 / (psi0(0) psi1'(0)).
double gap_identity_ratio(const WellSolution& sol);

/// ‖psi(phi) - psi(-phi)‖ / ‖psi‖ and the odd analogue (sign = -1).
double parity_defect(const VectorXr& psi, int sign);

} // namespace gapcert
