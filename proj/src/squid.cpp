#include "gapcert/squid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gapcert {

namespace {

struct Tridiagonal {
    VectorXr diag;
    VectorXr off; // off(i) couples i and i+1
};

/// Number of eigenvalues strictly below x (Sturm count via the LDL^T pivots).
Index count_below(const Tridiagonal& t, double x)
{
    const double tiny = std::numeric_limits<double>::min();
    Index count = 0;
    double q = t.diag(0) - x;
    for (Index i = 0;; ++i) {
        if (q == 0.0) q = -tiny;
        if (q < 0.0) ++count;
        if (i + 1 == t.diag.size()) break;
        q = t.diag(i + 1) - x - t.off(i) * t.off(i) / q;
    }
    return count;
}

/// k-th smallest eigenvalue (k = 0 is the lowest) by bisection.
double kth_eigenvalue(const Tridiagonal& t, Index k)
{
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    const Index n = t.diag.size();
    for (Index i = 0; i < n; ++i) {
        const double r = (i > 0 ? std::abs(t.off(i - 1)) : 0.0) + (i + 1 < n ? std::abs(t.off(i)) : 0.0);
        lo = std::min(lo, t.diag(i) - r);
        hi = std::max(hi, t.diag(i) + r);
    }
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (count_below(t, mid) > k)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

VectorXr apply(const Tridiagonal& t, const VectorXr& x)
{
    const Index n = x.size();
    VectorXr y = t.diag.cwiseProduct(x);
    y.head(n - 1) += t.off.cwiseProduct(x.tail(n - 1));
    y.tail(n - 1) += t.off.cwiseProduct(x.head(n - 1));
    return y;
}

/// Inverse iteration at the converged shift; unpivoted elimination with zero pivots nudged.
VectorXr eigenvector(const Tridiagonal& t, double lambda)
{
    const Index n = t.diag.size();
    const double scale = t.diag.cwiseAbs().maxCoeff() + 2.0 * t.off.cwiseAbs().maxCoeff();
    const double nudge = std::numeric_limits<double>::epsilon() * scale;
    VectorXr x(n);
    for (Index i = 0; i < n; ++i) x(i) = 1.0 + 0.5 * std::sin(0.37 * static_cast<double>(i));
    VectorXr pivot(n), rhs(n);
    for (int it = 0; it < 4; ++it) {
        pivot(0) = t.diag(0) - lambda;
        rhs(0) = x(0);
        for (Index i = 1; i < n; ++i) {
            if (std::abs(pivot(i - 1)) < nudge) pivot(i - 1) = nudge;
            const double f = t.off(i - 1) / pivot(i - 1);
            pivot(i) = t.diag(i) - lambda - f * t.off(i - 1);
            rhs(i) = x(i) - f * rhs(i - 1);
        }
        if (std::abs(pivot(n - 1)) < nudge) pivot(n - 1) = nudge;
        x(n - 1) = rhs(n - 1) / pivot(n - 1);
        for (Index i = n - 2; i >= 0; --i) x(i) = (rhs(i) - t.off(i) * x(i + 1)) / pivot(i);
        x /= x.norm();
    }
    return x;
}

struct Sampled {
    VectorXr grid;
    VectorXr u;
    double h = 0.0;
    double t = 0.0; // 1 / (2 mass h^2)
};

Sampled sample(const Potential1D& pot, double mass)
{
    require(pot.points >= 64, "potential grid needs at least 64 points");
    require(pot.phi_max > pot.phi_min, "potential grid must have phi_max > phi_min");
    require(mass > 0.0 && std::isfinite(mass), "mass scale must be positive");
    require(static_cast<bool>(pot.u), "potential has no function");
    Sampled s;
    s.h = pot.spacing();
    s.t = 1.0 / (2.0 * mass * s.h * s.h);
    s.grid.resize(pot.points);
    s.u.resize(pot.points);
    const int c = (pot.points - 1) / 2;
    for (int i = 0; i < pot.points; ++i) {
        // Symmetric grids are generated from the center so mirrored points match bit for bit.
        s.grid(i) = pot.symmetric ? (i - c) * s.h : pot.phi_min + i * s.h;
        s.u(i) = pot.u(s.grid(i));
        require(std::isfinite(s.u(i)), "potential is not finite on the grid");
    }
    return s;
}

Tridiagonal full_operator(const Sampled& s)
{
    const Index n = s.grid.size() - 2;
    Tridiagonal t;
    t.diag = s.u.segment(1, n).array() + 2.0 * s.t;
    t.off = VectorXr::Constant(n - 1, -s.t);
    return t;
}

void finish(WellSolution& sol, const Sampled& s, double mass)
{
    const Index n = s.grid.size();
    const double h = s.h;
    sol.mass = mass;
    sol.grid = s.grid;
    for (VectorXr* psi : {&sol.psi0, &sol.psi1}) *psi /= std::sqrt(psi->squaredNorm() * h);
    if (sol.psi0.sum() < 0.0) sol.psi0 = -sol.psi0;

    const Index c = sol.symmetric ? (n - 1) / 2
                                  : static_cast<Index>(std::lround(-s.grid(0) / h));
    require(c >= 2 && c + 2 < n, "grid must contain phi = 0 away from the ends");
    auto deriv = [&](const VectorXr& p) {
        return (-p(c + 2) + 8.0 * p(c + 1) - 8.0 * p(c - 1) + p(c - 2)) / (12.0 * h);
    };
    if (deriv(sol.psi1) < 0.0) sol.psi1 = -sol.psi1;

    sol.gap = sol.e1 - sol.e0;
    sol.psi0_at_0 = sol.psi0(c);
    sol.psi1_deriv_at_0 = deriv(sol.psi1);
    double integral = 0.0;
    for (Index i = c; i + 1 < n; ++i)
        integral += 0.5 * h * (sol.psi0(i) * sol.psi1(i) + sol.psi0(i + 1) * sol.psi1(i + 1));
    sol.cross_integral = integral;

    const Tridiagonal full = full_operator(s);
    auto residual = [&](const VectorXr& psi, double e) {
        const VectorXr inner = psi.segment(1, n - 2);
        return std::sqrt((apply(full, inner) - e * inner).squaredNorm() * h);
    };
    sol.residual0 = residual(sol.psi0, sol.e0);
    sol.residual1 = residual(sol.psi1, sol.e1);
    if (std::max(sol.residual0, sol.residual1) > 1e-8)
        throw ConvergenceError("solve_well: eigen-residual above 1e-8", std::max(sol.residual0, sol.residual1));

    sol.leakage = 0.0;
    for (const VectorXr* psi : {&sol.psi0, &sol.psi1}) {
        const double peak = psi->cwiseAbs().maxCoeff();
        sol.leakage = std::max(sol.leakage, std::max(std::abs((*psi)(1)), std::abs((*psi)(n - 2))) / peak);
    }
    if (sol.leakage > 1e-8)
        throw ConvergenceError("solve_well: boundary amplitude " + std::to_string(sol.leakage) +
                                   " exceeds 1e-8 of the peak; widen the grid",
                               sol.leakage);

    const double floor = -1e-10 * sol.psi0.cwiseAbs().maxCoeff();
    for (Index i = 1; i + 1 < n; ++i)
        if (sol.psi0(i) < floor) throw Error("solve_well: ground state has a node; grid too coarse");
}

} // namespace

Potential1D quartic_double_well(double beta, double half_width, int points)
{
    require(beta > 0.0, "quartic_double_well: beta must be positive");
    Potential1D p;
    p.u = [beta](double x) { return beta * (x * x - 1.0) * (x * x - 1.0); };
    p.phi_min = -half_width;
    p.phi_max = half_width;
    p.points = points;
    p.symmetric = true;
    p.name = "quartic";
    return p;
}

Potential1D harmonic_well(double half_width, int points)
{
    Potential1D p;
    p.u = [](double x) { return 0.5 * x * x; };
    p.phi_min = -half_width;
    p.phi_max = half_width;
    p.points = points;
    p.symmetric = true;
    p.name = "harmonic";
    return p;
}

Potential1D box_well(double wall, double half_width, int points)
{
    Potential1D p;
    p.u = [wall](double x) { return std::abs(x) < 1.0 ? 0.0 : wall; };
    p.phi_min = -half_width;
    p.phi_max = half_width;
    p.points = points;
    p.symmetric = true;
    p.name = "box";
    return p;
}

WellSolution solve_well(const Potential1D& pot, double mass_scale)
{
    if (!pot.symmetric) return solve_well_full(pot, mass_scale);
    require(pot.points % 2 == 1, "symmetric grid needs an odd point count");
    require(std::abs(pot.phi_min + pot.phi_max) <= 1e-12 * std::abs(pot.phi_max),
            "symmetric grid must be centered at 0");
    const Sampled s = sample(pot, mass_scale);
    const int n = pot.points;
    const int c = (n - 1) / 2;
    for (int i = 0; i < c; ++i) {
        const double a = s.u(i), b = s.u(n - 1 - i);
        require(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(a)), "potential flagged symmetric is not even");
    }

    // Even sector: psi_c .. psi_{n-2}, with psi_{c-1} = psi_{c+1}; the first
    // unknown is rescaled by 1/sqrt(2) to keep the matrix symmetric.
    const Index m_even = n - 1 - c;
    Tridiagonal even;
    even.diag = s.u.segment(c, m_even).array() + 2.0 * s.t;
    even.off = VectorXr::Constant(m_even - 1, -s.t);
    even.off(0) = -std::sqrt(2.0) * s.t;

    // Odd sector: psi_c = 0, unknowns psi_{c+1} .. psi_{n-2}.
    const Index m_odd = m_even - 1;
    Tridiagonal odd;
    odd.diag = s.u.segment(c + 1, m_odd).array() + 2.0 * s.t;
    odd.off = VectorXr::Constant(m_odd - 1, -s.t);

    WellSolution sol;
    sol.symmetric = true;
    sol.e0 = kth_eigenvalue(even, 0);
    sol.e1 = kth_eigenvalue(odd, 0);
    require(sol.e0 < sol.e1, "solve_well: lowest odd level lies below the lowest even level");
    // The second even level must not undercut the first odd one.
    require(kth_eigenvalue(even, 1) > sol.e1, "solve_well: second even level below the first odd level");

    VectorXr ve = eigenvector(even, sol.e0);
    ve(0) *= std::sqrt(2.0);
    const VectorXr vo = eigenvector(odd, sol.e1);
    sol.psi0 = VectorXr::Zero(n);
    sol.psi1 = VectorXr::Zero(n);
    for (Index i = 0; i < m_even; ++i) {
        sol.psi0(c + i) = ve(i);
        sol.psi0(c - i) = ve(i);
    }
    for (Index i = 0; i < m_odd; ++i) {
        sol.psi1(c + 1 + i) = vo(i);
        sol.psi1(c - 1 - i) = -vo(i);
    }
    finish(sol, s, mass_scale);
    return sol;
}

WellSolution solve_well_full(const Potential1D& pot, double mass_scale)
{
    const Sampled s = sample(pot, mass_scale);
    const Tridiagonal t = full_operator(s);
    const Index n = pot.points;
    WellSolution sol;
    sol.symmetric = false;
    sol.e0 = kth_eigenvalue(t, 0);
    sol.e1 = kth_eigenvalue(t, 1);
    sol.psi0 = VectorXr::Zero(n);
    sol.psi1 = VectorXr::Zero(n);
    sol.psi0.segment(1, n - 2) = eigenvector(t, sol.e0);
    VectorXr v1 = eigenvector(t, sol.e1);
    // Near-degenerate pairs: project out the ground state once.
    const VectorXr v0 = sol.psi0.segment(1, n - 2);
    v1 -= v0.dot(v1) * v0;
    sol.psi1.segment(1, n - 2) = v1.normalized();
    finish(sol, s, mass_scale);
    return sol;
}

double gap_identity_ratio(const WellSolution& sol)
{
    if (std::abs(sol.psi0_at_0) < 1e-13)
        throw Error("gap_identity_ratio: psi0(0) below 1e-13; the ratio is unreliable in the degenerate limit");
    require(sol.psi1_deriv_at_0 != 0.0, "gap_identity_ratio: psi1'(0) vanishes");
    return sol.gap * sol.cross_integral / (sol.psi0_at_0 * sol.psi1_deriv_at_0);
}

double parity_defect(const VectorXr& psi, int sign)
{
    require(sign == 1 || sign == -1, "parity_defect: sign must be +1 or -1");
    const VectorXr mirrored = psi.reverse();
    return (psi - sign * mirrored).norm() / psi.norm();
}

} // namespace gapcert
