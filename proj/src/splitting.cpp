#include "gapcert/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gapcert {

namespace {

bool at_or_above(double value, double cut)
{
    return value >= cut - 1e-12 * std::max(1.0, std::abs(cut));
}

} // namespace

double separation_probability(const SectorDistribution& dist, double s_mbar, double half_width)
{
    require(half_width >= 0.0, "separation_probability: half width must be nonnegative");
    const double slack = 1e-12 * std::max(1.0, std::abs(s_mbar) + half_width);
    double p = 0.0;
    for (std::size_t m = 0; m < dist.size(); ++m)
        if (std::abs(dist.values[m] - s_mbar) <= half_width + slack) p += dist.probabilities[m];
    return p;
}

double SplitSummary::separation_probability(double half_width) const
{
    return gapcert::separation_probability(distribution, separation_point, half_width);
}

SplitSummary split_distribution(const SectorDistribution& dist, double s_mbar, double level_span)
{
    require(dist.size() > 0, "split_distribution: empty distribution");
    SplitSummary out;
    out.distribution = dist;
    out.separation_point = s_mbar;
    out.level_span = level_span;

    double w1 = 0.0, w2 = 0.0, m1 = 0.0, m2 = 0.0;
    double best1 = -1.0, best2 = -1.0, peak1 = 0.0, peak2 = 0.0;
    out.first_upper = dist.size();
    for (std::size_t m = 0; m < dist.size(); ++m) {
        const double p = dist.probabilities[m];
        const double s = dist.values[m];
        if (at_or_above(s, s_mbar)) {
            out.first_upper = std::min(out.first_upper, m);
            w2 += p;
            m2 += p * s;
            if (p > best2) {
                best2 = p;
                peak2 = s;
            }
        } else {
            w1 += p;
            m1 += p * s;
            if (p > best1) {
                best1 = p;
                peak1 = s;
            }
        }
    }
    out.a1 = std::sqrt(w1);
    out.a2 = std::sqrt(w2);
    if (out.a1 < 1e-15 || out.a2 < 1e-15)
        throw DegenerateSplit("degenerate split: all weight lies on one side of the separation point");
    out.region_distance = std::abs(m2 / w2 - m1 / w1);
    out.peak_distance = std::abs(peak2 - peak1);
    return out;
}

GroundStateSplit split_at(const VectorXc& state, const SectorIndex& sectors, double s_mbar)
{
    const auto dist = sector_distribution(state, sectors);
    GroundStateSplit out;
    out.summary = split_distribution(dist, s_mbar, sectors.level_span());
    const std::size_t cut = out.summary.first_upper;
    const auto& member = sectors.membership();
    out.psi1 = VectorXc::Zero(state.size());
    out.psi2 = VectorXc::Zero(state.size());
    for (Index i = 0; i < state.size(); ++i) {
        if (static_cast<std::size_t>(member[static_cast<std::size_t>(i)]) < cut)
            out.psi1(i) = state(i);
        else
            out.psi2(i) = state(i);
    }
    out.psi1 /= out.summary.a1;
    out.psi2 /= out.summary.a2;
    out.overlap = out.psi2.dot(out.psi1);
    out.reconstruction_error = (out.summary.a1 * out.psi1 + out.summary.a2 * out.psi2 - state).norm();
    return out;
}

double distribution_median(const SectorDistribution& dist)
{
    require(dist.size() > 0, "distribution_median: empty distribution");
    const double total = dist.total();
    double cdf = 0.0;
    double lower = dist.values.back(), upper = dist.values.back();
    bool have_lower = false;
    for (std::size_t m = 0; m < dist.size(); ++m) {
        cdf += dist.probabilities[m] / total;
        if (!have_lower && cdf >= 0.5 - 1e-12) {
            lower = dist.values[m];
            have_lower = true;
        }
        if (cdf > 0.5 + 1e-12) {
            upper = dist.values[m];
            break;
        }
    }
    return 0.5 * (lower + upper);
}

double auto_separation_point(const SectorDistribution& dist, double half_width, double weight_floor)
{
    require(dist.size() > 0, "auto_separation_point: empty distribution");
    const double median = distribution_median(dist);
    double best_p = std::numeric_limits<double>::infinity();
    double best_s = 0.0;
    bool found = false;
    double below = 0.0;
    for (std::size_t m = 0; m < dist.size(); ++m) {
        // Candidate s_m: weight below is sum_{m' < m} p_m'.
        const double above = dist.total() - below;
        if (below >= weight_floor && above >= weight_floor) {
            const double s = dist.values[m];
            const double p = separation_probability(dist, s, half_width);
            bool better = false;
            if (!found || p < best_p - 1e-15) {
                better = true;
            } else if (std::abs(p - best_p) <= 1e-15) {
                const double dn = std::abs(s - median), db = std::abs(best_s - median);
                better = dn < db - 1e-12 || (std::abs(dn - db) <= 1e-12 && s > best_s);
            }
            if (better) {
                best_p = std::min(p, best_p);
                best_s = s;
                found = true;
            }
        }
        below += dist.probabilities[m];
    }
    if (!found) throw DegenerateSplit("auto_separation_point: no separation point satisfies the weight floor");
    return best_s;
}

} // namespace gapcert
