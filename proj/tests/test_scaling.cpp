#include <gtest/gtest.h>

#include <cmath>

#include "gapcert/bounds.hpp"
#include "gapcert/scaling.hpp"
#include "gapcert/special_states.hpp"
#include "gapcert/splitting.hpp"

using namespace gapcert;
using nlohmann::json;

namespace {

SweepSeries synthetic(const std::vector<double>& sizes, double (*f)(double))
{
    SweepSeries s;
    for (double n : sizes) s.push({n, f(n)});
    return s;
}

std::vector<double> range(double a, double b, double step)
{
    std::vector<double> v;
    for (double x = a; x <= b + 1e-9; x += step) v.push_back(x);
    return v;
}

} // namespace

TEST(Fits, ExactPowerLaw)
{
    const auto s = synthetic(range(10, 200, 10), [](double n) { return 3.0 * std::pow(n, -1.5); });
    const auto f = fit_power_law(s);
    EXPECT_NEAR(f.exponent, -1.5, 1e-10);
    EXPECT_NEAR(std::exp(f.intercept), 3.0, 1e-10);
    EXPECT_NEAR(f.stderr_, 0.0, 1e-10);
    EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
    EXPECT_EQ(f.points_used, s.rows.size());
}

TEST(Fits, ExactExponential)
{
    const auto s = synthetic(range(4, 60, 4), [](double n) { return std::pow(0.8, n); });
    EXPECT_NEAR(fit_exponential(s).exponent, std::log(0.8), 1e-10);
}

TEST(Fits, ExponentialWithPrefactor)
{
    const auto s = synthetic(range(10, 100, 5), [](double n) { return 7.0 * n * n * std::pow(0.7, n); });
    FitOptions fixed;
    fixed.prefactor = {ExponentialPrefactor::Kind::fixed, 2.0};
    const auto a = fit_exponential(s, fixed);
    EXPECT_NEAR(a.exponent, std::log(0.7), 1e-10);
    EXPECT_EQ(*a.prefactor_power, 2.0);
    FitOptions free;
    free.prefactor.kind = ExponentialPrefactor::Kind::free;
    const auto b = fit_exponential(s, free);
    EXPECT_NEAR(b.exponent, std::log(0.7), 1e-10);
    EXPECT_NEAR(*b.prefactor_power, 2.0, 1e-9);
    EXPECT_NEAR(b.intercept, std::log(7.0), 1e-8);
}

TEST(Fits, AutoWindowDropsTransient)
{
    const auto s = synthetic(range(2, 40, 2), [](double n) { return std::pow(n, -2.0) * (1.0 + 20.0 / (n * n * n)); });
    const auto all = fit_power_law(s, FitOptions{false, 0.999, {}});
    const auto win = fit_power_law(s);
    EXPECT_GT(win.window_start, 2.0);
    EXPECT_GE(win.r_squared, 0.999);
    EXPECT_GE(win.points_used, 10u);
    EXPECT_LT(std::abs(win.exponent + 2.0), std::abs(all.exponent + 2.0));
    EXPECT_EQ(all.window_start, 2.0);
}

TEST(Fits, WindowKeepsHalfThePoints)
{
    // Noise that no window can fix: the loop stops at half the points.
    SweepSeries s;
    for (int i = 1; i <= 12; ++i) s.push({static_cast<double>(i), i % 2 ? 1.0 : 2.0});
    const auto f = fit_power_law(s);
    EXPECT_EQ(f.points_used, 6u);
}

TEST(Fits, ZeroTailIsIdenticallyZero)
{
    SweepSeries s;
    s.push({10, 1e-3});
    s.push({20, 0.0});
    s.push({30, 0.0});
    s.push({40, 0.0});
    const auto f = fit_exponential(s);
    EXPECT_TRUE(f.identically_zero);
    EXPECT_EQ(f.window_start, 20.0);
    EXPECT_TRUE(std::isinf(f.exponent));

    SweepSeries bad;
    for (double v : {1.0, 0.0, 0.5, 0.2}) bad.push({bad.rows.size() + 1.0, v});
    EXPECT_THROW(fit_power_law(bad), InvalidArgument);
}

TEST(Fits, RejectsBadSeries)
{
    SweepSeries s;
    s.push({1, 1});
    s.push({2, 1});
    s.push({3, 1});
    EXPECT_THROW(fit_power_law(s), InvalidArgument);
    s.push({4, -1});
    EXPECT_THROW(fit_power_law(s), InvalidArgument);
    EXPECT_THROW(s.push({4, 1}), InvalidArgument);
}

TEST(Sweep, GhzMatchesFormula)
{
    const json cfg = {{"family", "ghz"}, {"sizes", {{"start", 30}, {"stop", 60}, {"step", 10}}},
                      {"params", {{"omega", 0.8}, {"K", 2}, {"H21K", 1.0}}}};
    const auto s = run_sweep(cfg);
    ASSERT_EQ(s.rows.size(), 4u);
    for (const auto& r : s.rows) EXPECT_DOUBLE_EQ(r.value, ghz_bound(static_cast<int>(r.size), 2, 0.8, 1.0));
}

TEST(Sweep, GhzSeparationProbabilityIsZero)
{
    const json cfg = {{"family", "ghz"}, {"quantity", "p_sep"}, {"sizes", {10, 20, 30, 40}}, {"fit", "exponential"}};
    const auto s = run_sweep(cfg);
    const auto f = fit_from_config(s, cfg);
    ASSERT_TRUE(f);
    EXPECT_TRUE(f->identically_zero);
    EXPECT_NE(scaling_report(s, f, cfg).find("identically zero in window"), std::string::npos);
}

TEST(Sweep, WStateSeparationProbability)
{
    const json cfg = {{"family", "w_state"}, {"sizes", {20, 40, 60, 80}}, {"s_mbar", 0.0}, {"half_width", 2.0}};
    const auto s = run_sweep(cfg);
    for (const auto& r : s.rows)
        EXPECT_DOUBLE_EQ(r.value, separation_probability(w_state_distribution_exact(r.size), 0.0, 2.0));
}

TEST(Sweep, DeterministicAcrossRuns)
{
    const json cfg = {{"family", "random"}, {"sizes", {4, 5, 6, 7, 8}}, {"seed", 42}, {"quantity", "bound"},
                      {"params", {{"K", 2}, {"graph", "chain"}}}};
    const auto a = series_to_csv(run_sweep(cfg));
    const auto b = series_to_csv(run_sweep(cfg));
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.substr(0, a.find('\n')), "N,bound,gap,P_sep,a1sq,a2sq,s_mbar");
}

TEST(Sweep, BoundNeverBelowGap)
{
    const json cfg = {{"family", "random"}, {"sizes", {4, 5, 6, 7, 8, 9, 10}}, {"seed", 7}, {"quantity", "bound"},
                      {"params", {{"K", 2}, {"graph", "all"}, {"real", true}}}};
    const auto s = run_sweep(cfg);
    EXPECT_FALSE(s.partial);
    EXPECT_EQ(s.metadata.count("unsound_at"), 0u);
    for (const auto& r : s.rows) EXPECT_GE(*r.bound, *r.gap - 1e-8) << r.size;
}

TEST(Sweep, EmptyRangeAndUnknownFamily)
{
    EXPECT_THROW(run_sweep(json{{"family", "ghz"}, {"sizes", json::array()}}), InvalidArgument);
    EXPECT_THROW(run_sweep(json{{"family", "ghz"}, {"sizes", {{"start", 10}, {"stop", 5}}}}), InvalidArgument);
    EXPECT_THROW(run_sweep(json{{"family", "nope"}, {"sizes", {1, 2}}}), InvalidArgument);
}

TEST(Sweep, PartialResultsOnLaterFailure)
{
    // 30 qubits exceed the dimension cap; the earlier sizes are kept.
    const json cfg = {{"family", "tfim"}, {"sizes", {4, 6, 30}}, {"params", {{"g", 0.5}}}};
    const auto s = run_sweep(cfg);
    EXPECT_TRUE(s.partial);
    EXPECT_EQ(s.rows.size(), 2u);
    EXPECT_NE(s.error.find("30"), std::string::npos);
    EXPECT_TRUE(series_to_json(s).at("partial").get<bool>());
}

TEST(Sweep, DickeSuperpositionRejectsNonzeroSum)
{
    const json cfg = {{"family", "dicke_superposition"},
                      {"sizes", {20, 40, 60, 80}},
                      {"params", {{"spec", {{"n", 2}, {"coefficients", {1.0, 0.0, 0.0, 1.0}}, {"sign", "+"}, {"normalize", true}}}}}};
    EXPECT_THROW(run_sweep(cfg), InvalidArgument);
}

TEST(Report, ExclusionAndExpectation)
{
    const auto s = synthetic(range(20, 200, 20), [](double n) { return std::pow(n, -3.0); });
    const json cfg = {{"fit", "power_law"}, {"exclusion_order", 2}, {"expect", {{"max_exponent", -2.8}}}};
    const auto f = fit_from_config(s, cfg);
    EXPECT_TRUE(expectation_met(f, cfg));
    const auto text = scaling_report(s, f, cfg);
    EXPECT_NE(text.find("excluded at order 2"), std::string::npos);
    EXPECT_NE(text.find("expectation: PASS"), std::string::npos);

    const json strict = {{"fit", "power_law"}, {"expect", {{"exponent", -1.5}, {"tolerance", 0.1}}}};
    EXPECT_FALSE(expectation_met(fit_from_config(s, strict), strict));
    EXPECT_FALSE(fit_from_config(s, json::object()));
    EXPECT_THROW(fit_from_config(s, json{{"fit", "cubic"}}), InvalidArgument);
}

TEST(RegionDistance, GhzIsExactlyN)
{
    const auto s = region_distance_series("ghz", {4, 10, 40, 100});
    for (const auto& r : s.rows) EXPECT_EQ(r.value, r.size);
}

TEST(RegionDistance, WStateGrowsLikeRootTwoN)
{
    const auto s = region_distance_series("w_state", {400}, DistanceMetric::peak);
    EXPECT_NEAR(s.rows[0].value / std::sqrt(800.0), 1.0, 0.05);
    EXPECT_THROW(region_distance_series("dicke", {10}, DistanceMetric::mean, json{{"excitations", 0}}), DegenerateSplit);
}
