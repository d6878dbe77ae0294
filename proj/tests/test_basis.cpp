#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "gapcert/basis.hpp"
#include "gapcert/special_states.hpp"
#include "oracle.hpp"

using namespace gapcert;

namespace {

AdditiveObservable qutrit_two_level()
{
    return AdditiveObservable::from_levels({Level{0.0, 2, std::nullopt}, Level{1.0, 1, std::nullopt}});
}

} // namespace

TEST(ManyBodySpace, DimensionAndDigits)
{
    const ManyBodySpace s(3, SiteSpace(3));
    EXPECT_EQ(s.dim(), 27);
    // index = d0 + 3 d1 + 9 d2
    EXPECT_EQ(s.digit(5, 0), 2);
    EXPECT_EQ(s.digit(5, 1), 1);
    EXPECT_EQ(s.digit(5, 2), 0);
    EXPECT_EQ(s.stride(2), 9);
}

TEST(ManyBodySpace, RejectsOverflowAndBadSites)
{
    EXPECT_THROW(ManyBodySpace(29, SiteSpace(2)), InvalidArgument);
    EXPECT_THROW(ManyBodySpace(0, SiteSpace(2)), InvalidArgument);
    EXPECT_THROW(SiteSpace(1), InvalidArgument);
    EXPECT_NO_THROW(ManyBodySpace(28, SiteSpace(2)));
}

TEST(Rational, ParseAndReduce)
{
    EXPECT_EQ(Rational::parse("2/4")->str(), "1/2");
    EXPECT_EQ(Rational::parse("-3/6")->str(), "-1/2");
    EXPECT_EQ(Rational::parse("3/-6")->str(), "-1/2");
    EXPECT_EQ(Rational::parse("7")->str(), "7");
    EXPECT_FALSE(Rational::parse("1/0"));
    EXPECT_FALSE(Rational::parse("a/2"));
    EXPECT_FALSE(Rational::parse("1/2x"));
}

TEST(AdditiveObservable, Invariants)
{
    EXPECT_THROW(AdditiveObservable::from_levels({Level{0.0, 2, std::nullopt}}), InvalidArgument);
    EXPECT_THROW(AdditiveObservable::from_levels({Level{1.0, 1, std::nullopt}, Level{0.0, 1, std::nullopt}}),
                 InvalidArgument);
    EXPECT_THROW(AdditiveObservable::from_levels({Level{0.0, 0, std::nullopt}, Level{1.0, 2, std::nullopt}}),
                 InvalidArgument);
    EXPECT_THROW(AdditiveObservable::from_diagonal(std::vector<double>{1.0, 1.0}), InvalidArgument);

    const auto jz = AdditiveObservable::spin_half_z();
    EXPECT_EQ(jz.site_dim(), 2);
    EXPECT_DOUBLE_EQ(jz.eigenvalue_of(0), 0.5); // |0> is up
    EXPECT_DOUBLE_EQ(jz.eigenvalue_of(1), -0.5);
    EXPECT_DOUBLE_EQ(jz.span(), 1.0);
    EXPECT_TRUE(jz.is_exact());
}

TEST(EnumerateSectors, TwoQubitsJz)
{
    const auto idx = enumerate_sectors(ManyBodySpace(2, SiteSpace(2)), AdditiveObservable::spin_half_z());
    EXPECT_EQ(idx.values(), (std::vector<double>{-1.0, 0.0, 1.0}));
    EXPECT_EQ(idx.dimensions(), (std::vector<Index>{1, 2, 1}));
    EXPECT_EQ(idx.sector_of(0), 2); // up up
    EXPECT_EQ(idx.sector_of(3), 0);
}

TEST(EnumerateSectors, SingleSiteEqualsLevels)
{
    const auto obs = AdditiveObservable::from_levels(
        {Level{-1.0, 1, std::nullopt}, Level{0.25, 3, std::nullopt}, Level{2.0, 2, std::nullopt}});
    const auto idx = enumerate_sectors(ManyBodySpace(1, SiteSpace(6)), obs);
    EXPECT_EQ(idx.values(), (std::vector<double>{-1.0, 0.25, 2.0}));
    EXPECT_EQ(idx.dimensions(), (std::vector<Index>{1, 3, 2}));
}

TEST(EnumerateSectors, QutritsDegenerateLevel)
{
    const auto idx = enumerate_sectors(ManyBodySpace(3, SiteSpace(3)), qutrit_two_level());
    ASSERT_EQ(idx.values().front(), 0.0);
    EXPECT_EQ(idx.dimensions().front(), 8);
    EXPECT_EQ(idx.values().back(), 3.0);
    EXPECT_EQ(idx.dimensions().back(), 1);
}

TEST(EnumerateSectors, DimensionMismatch)
{
    EXPECT_THROW(enumerate_sectors(ManyBodySpace(2, SiteSpace(3)), AdditiveObservable::spin_half_z()),
                 InvalidArgument);
}

// Exhaustive scan: sum site eigenvalues per basis state, group by value.
TEST(EnumerateSectors, AgreesWithExhaustiveScan)
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> small(-3, 3);
    for (int d = 2; d <= 3; ++d) {
        for (int n = 1; n <= 6; ++n) {
            for (int trial = 0; trial < 3; ++trial) {
                std::vector<Rational> diag;
                do {
                    diag.clear();
                    for (int k = 0; k < d; ++k) diag.push_back(Rational::make(small(rng), 2));
                } while (std::all_of(diag.begin(), diag.end(), [&](const Rational& r) { return r == diag[0]; }));
                const auto obs = AdditiveObservable::from_diagonal(diag);
                const ManyBodySpace space(n, SiteSpace(d));
                const auto idx = enumerate_sectors(space, obs);

                std::map<long long, Index> count; // keyed by 2 * value
                std::vector<long long> value_of(static_cast<std::size_t>(space.dim()));
                for (Index b = 0; b < space.dim(); ++b) {
                    long long twice = 0;
                    for (int s = 0; s < n; ++s) twice += std::lround(2.0 * diag[static_cast<std::size_t>(oracle::digit(b, s, d))].value());
                    ++count[twice];
                    value_of[static_cast<std::size_t>(b)] = twice;
                }
                ASSERT_EQ(idx.size(), count.size());
                std::size_t m = 0;
                Index total = 0;
                for (const auto& [twice, c] : count) {
                    EXPECT_DOUBLE_EQ(idx.values()[m], twice / 2.0);
                    EXPECT_EQ(idx.dimensions()[m], c);
                    total += idx.dimensions()[m];
                    ++m;
                }
                EXPECT_EQ(total, space.dim());
                for (Index b = 0; b < space.dim(); ++b)
                    EXPECT_DOUBLE_EQ(idx.values()[static_cast<std::size_t>(idx.sector_of(b))],
                                     value_of[static_cast<std::size_t>(b)] / 2.0);
                const auto& lv = obs.levels();
                EXPECT_DOUBLE_EQ(idx.values().front(), n * lv.front().value);
                EXPECT_DOUBLE_EQ(idx.values().back(), n * lv.back().value);
            }
        }
    }
}

TEST(EnumerateSectors, ExactRationalsKeepCloseSectorsApart)
{
    // Sector values n1 / 3 + n2 / 7; count the distinct 7 n1 + 3 n2 directly.
    const auto obs = AdditiveObservable::from_diagonal(
        std::vector<Rational>{Rational::make(0, 1), Rational::make(1, 3), Rational::make(1, 7)});
    const auto idx = enumerate_sectors(ManyBodySpace(12, SiteSpace(3)), obs);
    std::set<int> distinct;
    for (int a = 0; a <= 12; ++a)
        for (int b = 0; a + b <= 12; ++b) distinct.insert(7 * a + 3 * b);
    EXPECT_EQ(idx.size(), distinct.size());
    for (std::size_t m = 0; m < idx.size(); ++m) {
        const auto it = std::next(distinct.begin(), static_cast<long>(m));
        EXPECT_NEAR(idx.values()[m], *it / 21.0, 1e-14);
    }
    Index total = 0;
    for (auto dim : idx.dimensions()) total += dim;
    EXPECT_EQ(total, idx.space().dim());
}

TEST(SectorDistribution, ProductAndGhz)
{
    const int n = 5;
    const auto idx = enumerate_sectors(ManyBodySpace(n, SiteSpace(2)), AdditiveObservable::spin_half_z());
    VectorXc up = VectorXc::Zero(idx.space().dim());
    up(0) = 1.0;
    const auto p = sector_distribution(up, idx);
    EXPECT_DOUBLE_EQ(p.probabilities.back(), 1.0);
    EXPECT_DOUBLE_EQ(p.values.back(), 2.5);

    VectorXc phi_up(2), phi_down(2);
    phi_up << 1.0, 0.0;
    phi_down << 0.0, 1.0;
    const auto ghz = ghz_state(n, phi_up, phi_down, 0.0);
    const auto q = sector_distribution(ghz.state, idx);
    EXPECT_NEAR(q.probabilities.front(), 0.5, 1e-15);
    EXPECT_NEAR(q.probabilities.back(), 0.5, 1e-15);
    EXPECT_NEAR(q.total(), 1.0, 1e-12);
}

TEST(SectorDistribution, RejectsBadInput)
{
    const auto idx = enumerate_sectors(ManyBodySpace(3, SiteSpace(2)), AdditiveObservable::spin_half_z());
    VectorXc v = VectorXc::Ones(8);
    EXPECT_THROW(sector_distribution(v, idx), InvalidArgument);
    VectorXc w = VectorXc::Ones(16) / 4.0;
    EXPECT_THROW(sector_distribution(w, idx), InvalidArgument);
}

TEST(SectorDistribution, ProjectorsAreCompleteAndOrthogonal)
{
    std::mt19937_64 rng(3);
    const auto idx = enumerate_sectors(ManyBodySpace(4, SiteSpace(3)), qutrit_two_level());
    const VectorXc psi = oracle::random_unit(idx.space().dim(), rng);
    VectorXc sum = VectorXc::Zero(psi.size());
    std::vector<VectorXc> parts;
    for (std::size_t m = 0; m < idx.size(); ++m) {
        parts.push_back(project_sectors(psi, idx, [m](std::size_t k) { return k == m; }));
        sum += parts.back();
    }
    EXPECT_LE((sum - psi).norm(), 1e-12);
    for (std::size_t a = 0; a < parts.size(); ++a)
        for (std::size_t b = a + 1; b < parts.size(); ++b) EXPECT_EQ(parts[a].dot(parts[b]), cplx(0.0, 0.0));
    const auto p = sector_distribution(psi, idx);
    EXPECT_NEAR(p.total(), 1.0, 1e-12);
    for (std::size_t m = 0; m < idx.size(); ++m) EXPECT_NEAR(p.probabilities[m], parts[m].squaredNorm(), 1e-15);
}
