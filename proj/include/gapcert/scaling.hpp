#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gapcert/core.hpp"

namespace gapcert {

/// One size of a sweep. `value` is the quantity being fitted; the optional
/// columns are filled when the sweep computes them.
struct SweepRow {
    double size = 0.0;
    double value = 0.0;
    std::optional<double> gap;
    std::optional<double> bound;
    std::optional<double> p_sep;
    std::optional<double> a1sq;
    std::optional<double> a2sq;
    std::optional<double> s_mbar;
};

struct SweepSeries {
    std::string label;
    std::string quantity;
    std::map<std::string, std::string> metadata;
    std::vector<SweepRow> rows;
    /// Set when an upstream error stopped the sweep; rows hold what finished.
    bool partial = false;
    std::string error;

    std::vector<double> sizes() const;
    std::vector<double> values() const;
    void push(SweepRow row);
};

enum class FitModel { power_law, exponential };

/// Optional N^p factor in front of an exponential.
struct ExponentialPrefactor {
    enum class Kind { none, fixed, free } kind = Kind::none;
    double power = 0.0;
};

struct FitOptions {
    /// Drop the smallest sizes until r^2 >= 0.999 or half the points remain.
    bool auto_window = true;
    double r_squared_target = 0.999;
    ExponentialPrefactor prefactor;
};

struct ScalingFit {
    FitModel model = FitModel::power_law;
    /// Power-law exponent, or exponential rate per unit size.
    double exponent = 0.0;
    double stderr_ = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    /// Fitted or fixed N^p prefactor power of an exponential fit.
    std::optional<double> prefactor_power;
    double window_start = 0.0;
    std::size_t points_used = 0;
    std::size_t points_total = 0;
    /// All values in the window are exactly zero; exponent is -inf.
    bool identically_zero = false;
};

ScalingFit fit_power_law(const SweepSeries& series, const FitOptions& opts = {});
ScalingFit fit_exponential(const SweepSeries& series, const FitOptions& opts = {});

std::string to_string(FitModel model);

/// Config keys: family, quantity, observable, sizes, bound, fit, seed, params.
/// See README for the accepted families.
SweepSeries run_sweep(const nlohmann::json& config);

enum class DistanceMetric { mean, peak };

/// Region distance per size for "ghz" (J_z), "w_state" (J_x) or "dicke_superposition".
SweepSeries region_distance_series(const std::string& family, const std::vector<double>& sizes,
                                   DistanceMetric metric = DistanceMetric::mean,
                                   const nlohmann::json& params = nlohmann::json::object());

std::string series_to_csv(const SweepSeries& series);
nlohmann::json fit_to_json(const ScalingFit& fit);
nlohmann::json series_to_json(const SweepSeries& series);

/// Fit requested by the config's "fit" entry, if any. Exact zeros in the
/// window give an `identically_zero` fit instead of an error.
std::optional<ScalingFit> fit_from_config(const SweepSeries& series, const nlohmann::json& config);

/// Plain-text summary. Reads "exclusion_order" (labels exponents below -K - 0.1)
/// and "expect" ({"exponent", "tolerance"} or {"max_exponent"}) from the config.
std::string scaling_report(const SweepSeries& series, const std::optional<ScalingFit>& fit,
                           const nlohmann::json& config = nlohmann::json::object());

/// True when the config's "expect" entry is met (or absent).
bool expectation_met(const std::optional<ScalingFit>& fit, const nlohmann::json& config);

} // namespace gapcert
