#include "gapcert/basis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

namespace gapcert {

SiteSpace::SiteSpace(int dim) : d(dim)
{
    require(dim >= 2, "SiteSpace: local dimension must be >= 2");
}

ManyBodySpace::ManyBodySpace(int n_sites, SiteSpace site) : n_sites_(n_sites), site_(site), dim_(1)
{
    require(n_sites >= 1, "ManyBodySpace: need at least one site");
    strides_.reserve(static_cast<std::size_t>(n_sites));
    for (int i = 0; i < n_sites; ++i) {
        strides_.push_back(dim_);
        require(dim_ <= kMaxDimension / site.d,
                "ManyBodySpace: d^N exceeds the supported dimension cap (2^28)");
        dim_ *= site.d;
    }
}

// ---------------------------------------------------------------------------

Rational Rational::make(std::int64_t num, std::int64_t den)
{
    require(den != 0, "Rational: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    return Rational{num / g, den / g};
}

std::optional<Rational> Rational::parse(const std::string& text)
{
    const auto slash = text.find('/');
    try {
        std::size_t used = 0;
        if (slash == std::string::npos) {
            const auto n = std::stoll(text, &used);
            if (used != text.size()) return std::nullopt;
            return make(n, 1);
        }
        const auto n = std::stoll(text.substr(0, slash), &used);
        if (used != slash) return std::nullopt;
        const auto rest = text.substr(slash + 1);
        const auto q = std::stoll(rest, &used);
        if (used != rest.size() || q == 0) return std::nullopt;
        return make(n, q);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::string Rational::str() const
{
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

// ---------------------------------------------------------------------------

AdditiveObservable::AdditiveObservable(std::vector<Level> levels, std::vector<int> level_of)
    : levels_(std::move(levels)), level_of_(std::move(level_of))
{
    require(levels_.size() >= 2, "AdditiveObservable: need at least two distinct levels");
    require(levels_.size() <= level_of_.size(), "AdditiveObservable: more levels than local states");
    for (std::size_t l = 0; l + 1 < levels_.size(); ++l)
        require(levels_[l].value < levels_[l + 1].value, "AdditiveObservable: levels must be strictly increasing");
    std::vector<int> count(levels_.size(), 0);
    for (int l : level_of_) ++count[static_cast<std::size_t>(l)];
    for (std::size_t l = 0; l < levels_.size(); ++l)
        require(count[l] == levels_[l].degeneracy && count[l] >= 1,
                "AdditiveObservable: degeneracies inconsistent with local dimension");
}

AdditiveObservable AdditiveObservable::from_levels(std::vector<Level> levels)
{
    std::vector<int> level_of;
    for (std::size_t l = 0; l < levels.size(); ++l) {
        require(levels[l].degeneracy >= 1, "AdditiveObservable: degeneracy must be >= 1");
        if (levels[l].exact) levels[l].value = levels[l].exact->value();
        level_of.insert(level_of.end(), static_cast<std::size_t>(levels[l].degeneracy), static_cast<int>(l));
    }
    require(level_of.size() >= 2, "AdditiveObservable: local dimension must be >= 2");
    return AdditiveObservable(std::move(levels), std::move(level_of));
}

namespace {

template <typename T, typename ValueOf, typename MakeLevel>
std::pair<std::vector<Level>, std::vector<int>> levels_from_diagonal(const std::vector<T>& diag, ValueOf value_of,
                                                                     MakeLevel make_level, double tol)
{
    require(diag.size() >= 2, "AdditiveObservable: local dimension must be >= 2");
    std::vector<double> sorted;
    for (const auto& v : diag) sorted.push_back(value_of(v));
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> distinct;
    for (double v : sorted)
        if (distinct.empty() || v - distinct.back() > tol) distinct.push_back(v);

    std::vector<Level> levels(distinct.size());
    std::vector<int> level_of(diag.size());
    for (std::size_t k = 0; k < diag.size(); ++k) {
        const double v = value_of(diag[k]);
        const auto it = std::min_element(distinct.begin(), distinct.end(),
                                         [v](double a, double b) { return std::abs(a - v) < std::abs(b - v); });
        const auto l = static_cast<std::size_t>(it - distinct.begin());
        level_of[k] = static_cast<int>(l);
        levels[l] = make_level(diag[k]);
    }
    for (std::size_t l = 0; l < levels.size(); ++l)
        levels[l].degeneracy = static_cast<int>(std::count(level_of.begin(), level_of.end(), static_cast<int>(l)));
    return {std::move(levels), std::move(level_of)};
}

} // namespace

AdditiveObservable AdditiveObservable::from_diagonal(const std::vector<double>& diagonal)
{
    auto [levels, level_of] = levels_from_diagonal(
        diagonal, [](double v) { return v; }, [](double v) { return Level{v, 1, std::nullopt}; }, 1e-12);
    return AdditiveObservable(std::move(levels), std::move(level_of));
}

AdditiveObservable AdditiveObservable::from_diagonal(const std::vector<Rational>& diagonal)
{
    auto [levels, level_of] = levels_from_diagonal(
        diagonal, [](const Rational& r) { return r.value(); },
        [](const Rational& r) { return Level{r.value(), 1, r}; }, 0.0);
    return AdditiveObservable(std::move(levels), std::move(level_of));
}

AdditiveObservable AdditiveObservable::spin_half_z()
{
    return from_diagonal(std::vector<Rational>{Rational::make(1, 2), Rational::make(-1, 2)});
}

bool AdditiveObservable::is_exact() const noexcept
{
    return std::all_of(levels_.begin(), levels_.end(), [](const Level& l) { return l.exact.has_value(); });
}

MatrixXr AdditiveObservable::site_matrix() const
{
    MatrixXr m = MatrixXr::Zero(site_dim(), site_dim());
    for (int k = 0; k < site_dim(); ++k) m(k, k) = eigenvalue_of(k);
    return m;
}

// ---------------------------------------------------------------------------

namespace {

void for_each_composition(int n, int parts, std::vector<int>& current, std::size_t pos,
                          std::vector<std::vector<int>>& out)
{
    if (pos + 1 == current.size()) {
        current[pos] = n;
        out.push_back(current);
        return;
    }
    for (int k = 0; k <= n; ++k) {
        current[pos] = k;
        for_each_composition(n - k, parts, current, pos + 1, out);
    }
}

Index multinomial_weight(int n, const std::vector<int>& occ, const std::vector<Level>& levels)
{
    // N! / prod n_l! * prod mu_l^{n_l}; the result is at most d^N <= kMaxDimension.
    double log_w = std::lgamma(n + 1.0);
    for (std::size_t l = 0; l < occ.size(); ++l)
        log_w += -std::lgamma(occ[l] + 1.0) + occ[l] * std::log(static_cast<double>(levels[l].degeneracy));
    return static_cast<Index>(std::llround(std::exp(log_w)));
}

} // namespace

SectorIndex enumerate_sectors(const ManyBodySpace& space, const AdditiveObservable& obs)
{
    require(obs.site_dim() == space.d(), "enumerate_sectors: observable dimension does not match site dimension");

    const int n = space.n_sites();
    const auto& levels = obs.levels();
    const std::size_t n_levels = levels.size();

    std::vector<std::vector<int>> comps;
    std::vector<int> scratch(n_levels, 0);
    for_each_composition(n, static_cast<int>(n_levels), scratch, 0, comps);

    // Composition key: sum_l n_l (N+1)^l, additive over sites.
    std::vector<std::int64_t> weight(n_levels, 1);
    for (std::size_t l = 1; l < n_levels; ++l) {
        require(weight[l - 1] <= std::numeric_limits<std::int64_t>::max() / (n + 1) / 2,
                "enumerate_sectors: too many levels for composition keys");
        weight[l] = weight[l - 1] * (n + 1);
    }
    auto key_of = [&](const std::vector<int>& occ) {
        std::int64_t k = 0;
        for (std::size_t l = 0; l < n_levels; ++l) k += occ[l] * weight[l];
        return k;
    };

    // Sector value of every composition; rational levels are summed exactly.
    struct Entry {
        double value;
        std::int64_t exact_numerator;
        std::size_t comp;
    };
    std::vector<Entry> entries;
    const bool exact = obs.is_exact();
    std::int64_t common_den = 1;
    if (exact) {
        for (const auto& l : levels) {
            const std::int64_t g = std::gcd(common_den, l.exact->den);
            require(common_den / g <= std::numeric_limits<std::int32_t>::max() / l.exact->den,
                    "enumerate_sectors: rational denominators too large");
            common_den = common_den / g * l.exact->den;
        }
    }
    for (std::size_t c = 0; c < comps.size(); ++c) {
        double v = 0.0;
        std::int64_t num = 0;
        for (std::size_t l = 0; l < n_levels; ++l) {
            v += comps[c][l] * levels[l].value;
            if (exact) num += comps[c][l] * (levels[l].exact->num * (common_den / levels[l].exact->den));
        }
        if (exact) v = static_cast<double>(num) / static_cast<double>(common_den);
        entries.push_back({v, num, c});
    }
    std::sort(entries.begin(), entries.end(), [exact](const Entry& a, const Entry& b) {
        return exact ? a.exact_numerator < b.exact_numerator : a.value < b.value;
    });

    SectorIndex index(space);
    index.level_span_ = obs.span();
    std::vector<int> sector_of_comp(comps.size(), -1);
    for (std::size_t e = 0; e < entries.size(); ++e) {
        bool merge = false;
        if (e > 0) {
            if (exact)
                merge = entries[e].exact_numerator == entries[e - 1].exact_numerator;
            else
                merge = entries[e].value - index.values_.back() <= 1e-12 * std::max(1.0, std::abs(entries[e].value));
        }
        if (!merge) {
            index.values_.push_back(entries[e].value);
            index.dims_.push_back(0);
            index.compositions_.emplace_back();
        }
        const auto m = index.values_.size() - 1;
        sector_of_comp[entries[e].comp] = static_cast<int>(m);
        index.dims_[m] += multinomial_weight(n, comps[entries[e].comp], levels);
        index.compositions_[m].push_back(comps[entries[e].comp]);
    }

    std::unordered_map<std::int64_t, int> sector_of_key;
    for (std::size_t c = 0; c < comps.size(); ++c) sector_of_key.emplace(key_of(comps[c]), sector_of_comp[c]);

    // Odometer over the computational basis, updating the composition key in place.
    const int d = space.d();
    std::vector<std::int64_t> local_weight(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) local_weight[static_cast<std::size_t>(k)] = weight[static_cast<std::size_t>(obs.level_of(k))];
    std::vector<int> digits(static_cast<std::size_t>(n), 0);
    std::int64_t key = static_cast<std::int64_t>(n) * local_weight[0];
    index.membership_.resize(static_cast<std::size_t>(space.dim()));
    for (Index b = 0; b < space.dim(); ++b) {
        index.membership_[static_cast<std::size_t>(b)] = sector_of_key.at(key);
        for (std::size_t s = 0; s < digits.size(); ++s) {
            key -= local_weight[static_cast<std::size_t>(digits[s])];
            if (++digits[s] < d) {
                key += local_weight[static_cast<std::size_t>(digits[s])];
                break;
            }
            digits[s] = 0;
            key += local_weight[0];
        }
    }
    return index;
}

// ---------------------------------------------------------------------------

double SectorDistribution::total() const
{
    return std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
}

double SectorDistribution::mean() const
{
    double s = 0.0;
    for (std::size_t m = 0; m < size(); ++m) s += probabilities[m] * values[m];
    return s;
}

double SectorDistribution::variance() const
{
    const double mu = mean();
    double s = 0.0;
    for (std::size_t m = 0; m < size(); ++m) s += probabilities[m] * (values[m] - mu) * (values[m] - mu);
    return s;
}

namespace detail {

void check_state(Index size, double norm, const SectorIndex& sectors)
{
    require(size == sectors.space().dim(), "state size does not match the sector index's space");
    require(std::abs(norm - 1.0) <= kNormTolerance, "state is not normalized (|norm - 1| > 1e-12)");
}

} // namespace detail

} // namespace gapcert
