#pragma once

#include "gapcert/basis.hpp"
#include "gapcert/core.hpp"

namespace gapcert {

/// psi = a1 psi1 + a2 psi2 with unit psi1, psi2 and a1, a2 > 0. The overlap
/// lambda = <psi2|psi1> is arbitrary (|lambda| < 1).
struct Decomposition {
    VectorXc psi1;
    VectorXc psi2;
    double a1 = 0.0;
    double a2 = 0.0;

    cplx overlap() const { return psi2.dot(psi1); }
    VectorXc reconstruct() const { return a1 * psi1 + a2 * psi2; }
};

/// A distribution cut at s_mbar: sectors with s_m < s_mbar form the first
/// region, sectors with s_m >= s_mbar the second. s_mbar need not be a sector
/// value (half-integer cuts are allowed).
struct SplitSummary {
    SectorDistribution distribution;
    double separation_point = 0.0;
    std::size_t first_upper = 0;
    double a1 = 0.0;
    double a2 = 0.0;
    /// |<S>_psi2 - <S>_psi1|.
    double region_distance = 0.0;
    /// Distance between the most probable outcome of each region.
    double peak_distance = 0.0;
    /// delta_sigma of the observable, when known.
    double level_span = 0.0;

    double separation_probability(double half_width) const;
};

/// Closed-interval window weight: sum of p_m over |s_m - s_mbar| <= half_width.
double separation_probability(const SectorDistribution& dist, double s_mbar, double half_width);

/// Splits a distribution; throws DegenerateSplit if either side has weight below 1e-30 (a < 1e-15).
SplitSummary split_distribution(const SectorDistribution& dist, double s_mbar, double level_span = 0.0);

/// Sector split of a state vector into orthogonal components.
struct GroundStateSplit {
    SplitSummary summary;
    VectorXc psi1;
    VectorXc psi2;
    /// <psi2|psi1>, zero by construction.
    cplx overlap{0.0, 0.0};
    /// ‖a1 psi1 + a2 psi2 - psi‖.
    double reconstruction_error = 0.0;

    double a1() const noexcept { return summary.a1; }
    double a2() const noexcept { return summary.a2; }
    Decomposition decomposition() const { return {psi1, psi2, summary.a1, summary.a2}; }
};

GroundStateSplit split_at(const VectorXc& state, const SectorIndex& sectors, double s_mbar);

/// Sector value minimizing P_sep(half_width) subject to a1^2, a2^2 >= weight_floor.
/// Ties (within 1e-15) go to the candidate nearest the distribution's median,
/// and then to the larger candidate.
double auto_separation_point(const SectorDistribution& dist, double half_width, double weight_floor = 0.05);

/// Midpoint of the lower and upper weighted medians.
double distribution_median(const SectorDistribution& dist);

} // namespace gapcert
