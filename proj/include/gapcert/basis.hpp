#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gapcert/core.hpp"

namespace gapcert {

/// Local Hilbert space of one site.
struct SiteSpace {
    int d = 2;

    explicit SiteSpace(int dim = 2);
};

/// Tensor product of `n_sites` identical sites.
///
/// Basis indices are little-endian mixed-radix integers: site 0 is the least
/// significant digit, so index = sum_i digit_i * d^i.
class ManyBodySpace {
public:
    ManyBodySpace(int n_sites, SiteSpace site);

    int n_sites() const noexcept { return n_sites_; }
    int d() const noexcept { return site_.d; }
    SiteSpace site() const noexcept { return site_; }
    Index dim() const noexcept { return dim_; }

    Index stride(int site) const { return strides_.at(static_cast<std::size_t>(site)); }
    int digit(Index basis, int site) const
    {
        return static_cast<int>((basis / strides_[static_cast<std::size_t>(site)]) % site_.d);
    }

    bool operator==(const ManyBodySpace& other) const noexcept
    {
        return n_sites_ == other.n_sites_ && site_.d == other.site_.d;
    }

private:
    int n_sites_;
    SiteSpace site_;
    Index dim_;
    std::vector<Index> strides_;
};

/// p/q with q > 0, reduced.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational make(std::int64_t num, std::int64_t den);
    static std::optional<Rational> parse(const std::string& text);
    double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;
    friend bool operator==(const Rational&, const Rational&) = default;
};

/// One eigenvalue of the single-site observable and its multiplicity.
struct Level {
    double value = 0.0;
    int degeneracy = 1;
    std::optional<Rational> exact;
};

/// S = sum_i S_i with every S_i the same diagonal d x d operator.
///
/// The computational basis is the eigenbasis of S_i; `level_of(k)` is the
/// level index of local basis state k. Hamiltonians written in another basis
/// must be conjugated first (see LocalHamiltonian::conjugated).
class AdditiveObservable {
public:
    /// Levels in ascending order; local basis states are assigned to levels
    /// consecutively (the first mu_1 states get the lowest eigenvalue, ...).
    static AdditiveObservable from_levels(std::vector<Level> levels);

    /// Arbitrary diagonal, one eigenvalue per local basis state.
    static AdditiveObservable from_diagonal(const std::vector<double>& diagonal);
    static AdditiveObservable from_diagonal(const std::vector<Rational>& diagonal);

    /// Spin-1/2 J_z with |0> = up: diag(+1/2, -1/2).
    static AdditiveObservable spin_half_z();

    int site_dim() const noexcept { return static_cast<int>(level_of_.size()); }
    const std::vector<Level>& levels() const noexcept { return levels_; }
    int level_of(int local_state) const { return level_of_.at(static_cast<std::size_t>(local_state)); }
    double eigenvalue_of(int local_state) const { return levels_[static_cast<std::size_t>(level_of(local_state))].value; }

    /// delta_sigma = largest minus smallest level.
    double span() const noexcept { return levels_.back().value - levels_.front().value; }
    bool is_exact() const noexcept;
    MatrixXr site_matrix() const;

private:
    AdditiveObservable(std::vector<Level> levels, std::vector<int> level_of);

    std::vector<Level> levels_;
    std::vector<int> level_of_;
};

/// Eigenvalue sectors of an additive observable over a many-body space.
class SectorIndex {
public:
    /// Distinct eigenvalues s_1 < ... < s_M.
    const std::vector<double>& values() const noexcept { return values_; }
    const std::vector<Index>& dimensions() const noexcept { return dims_; }
    /// Occupation numbers (n_{m,1}, ..., n_{m,l}) of every composition in sector m.
    const std::vector<std::vector<int>>& compositions(std::size_t m) const { return compositions_.at(m); }
    std::size_t size() const noexcept { return values_.size(); }

    int sector_of(Index basis) const { return membership_[static_cast<std::size_t>(basis)]; }
    const std::vector<int>& membership() const noexcept { return membership_; }

    const ManyBodySpace& space() const noexcept { return space_; }
    double level_span() const noexcept { return level_span_; }

private:
    friend SectorIndex enumerate_sectors(const ManyBodySpace&, const AdditiveObservable&);
    explicit SectorIndex(const ManyBodySpace& space) : space_(space) {}

    ManyBodySpace space_;
    double level_span_ = 0.0;
    std::vector<double> values_;
    std::vector<Index> dims_;
    std::vector<std::vector<std::vector<int>>> compositions_;
    std::vector<int> membership_;
};

SectorIndex enumerate_sectors(const ManyBodySpace& space, const AdditiveObservable& obs);

/// Outcome distribution {(s_m, p_m)} of an additive observable.
struct SectorDistribution {
    std::vector<double> values;
    std::vector<double> probabilities;

    std::size_t size() const noexcept { return values.size(); }
    double total() const;
    double mean() const;
    double variance() const;
};

/// Tolerance on |‖psi‖ - 1| accepted by state-consuming operations.
inline constexpr double kNormTolerance = 1e-12;

namespace detail {
void check_state(Index size, double norm, const SectorIndex& sectors);
}

/// p_m = squared norm of the projection of `state` onto sector m.
template <typename Derived>
SectorDistribution sector_distribution(const Eigen::MatrixBase<Derived>& state, const SectorIndex& sectors)
{
    detail::check_state(state.size(), state.norm(), sectors);
    SectorDistribution out;
    out.values = sectors.values();
    out.probabilities.assign(sectors.size(), 0.0);
    const auto& member = sectors.membership();
    for (Index i = 0; i < state.size(); ++i)
        out.probabilities[static_cast<std::size_t>(member[static_cast<std::size_t>(i)])] += std::norm(state(i));
    return out;
}

/// Component of `state` supported on the sectors for which `keep(m)` is true.
template <typename Derived, typename Pred>
auto project_sectors(const Eigen::MatrixBase<Derived>& state, const SectorIndex& sectors, Pred keep)
    -> Vector<typename Derived::Scalar>
{
    require(state.size() == sectors.space().dim(), "project_sectors: state size does not match sector index");
    Vector<typename Derived::Scalar> out = Vector<typename Derived::Scalar>::Zero(state.size());
    const auto& member = sectors.membership();
    for (Index i = 0; i < state.size(); ++i)
        if (keep(static_cast<std::size_t>(member[static_cast<std::size_t>(i)]))) out(i) = state(i);
    return out;
}

} // namespace gapcert
