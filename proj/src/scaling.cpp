#include "gapcert/scaling.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <exception>
#include <future>
#include <limits>
#include <sstream>
#include <thread>

#include "gapcert/bounds.hpp"
#include "gapcert/certify.hpp"
#include "gapcert/io.hpp"
#include "gapcert/special_states.hpp"
#include "gapcert/splitting.hpp"

namespace gapcert {

using nlohmann::json;

std::vector<double> SweepSeries::sizes() const
{
    std::vector<double> out;
    for (const auto& r : rows) out.push_back(r.size);
    return out;
}

std::vector<double> SweepSeries::values() const
{
    std::vector<double> out;
    for (const auto& r : rows) out.push_back(r.value);
    return out;
}

void SweepSeries::push(SweepRow row)
{
    require(rows.empty() || row.size > rows.back().size, "sweep sizes must be strictly increasing");
    require(std::isfinite(row.value), "sweep value is not finite");
    rows.push_back(row);
}

std::string to_string(FitModel model)
{
    return model == FitModel::power_law ? "power_law" : "exponential";
}

// -- fitting ---------------------------------------------------------------

namespace {

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct LinearFit {
    VectorXr coef;
    double slope_stderr = 0.0;
    double r_squared = 0.0;
};

/// Least squares y ~ X b; reports the stderr of coefficient `slope_col`.
LinearFit least_squares(const MatrixXr& x, const VectorXr& y, Index slope_col)
{
    LinearFit f;
    f.coef = x.colPivHouseholderQr().solve(y);
    const VectorXr resid = y - x * f.coef;
    const double sse = resid.squaredNorm();
    const double sst = (y.array() - y.mean()).square().sum();
    f.r_squared = sst > 0.0 ? std::clamp(1.0 - sse / sst, 0.0, 1.0) : 1.0;
    const Index dof = x.rows() - x.cols();
    if (dof > 0) {
        const MatrixXr cov = (x.transpose() * x).inverse() * (sse / static_cast<double>(dof));
        f.slope_stderr = std::sqrt(std::max(0.0, cov(slope_col, slope_col)));
    }
    return f;
}

ScalingFit fit_series(const SweepSeries& series, FitModel model, const FitOptions& opts)
{
    const auto& rows = series.rows;
    require(rows.size() >= 4, "fit: need at least 4 points");
    for (const auto& r : rows) {
        require(r.value >= 0.0, "fit: values must be nonnegative");
        require(r.size > 0.0, "fit: sizes must be positive");
    }

    ScalingFit out;
    out.model = model;
    out.points_total = rows.size();

    // Exact zeros: allowed only as a tail of the series, which then is the window.
    std::size_t first_zero = rows.size();
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i].value == 0.0) {
            first_zero = i;
            break;
        }
    if (first_zero < rows.size()) {
        for (std::size_t i = first_zero; i < rows.size(); ++i)
            require(rows[i].value == 0.0, "fit: zero values interleaved with positive ones");
        out.identically_zero = true;
        out.exponent = -std::numeric_limits<double>::infinity();
        out.window_start = rows[first_zero].size;
        out.points_used = rows.size() - first_zero;
        out.r_squared = 1.0;
        return out;
    }

    const bool free_power = model == FitModel::exponential && opts.prefactor.kind == ExponentialPrefactor::Kind::free;
    const bool fixed_power =
        model == FitModel::exponential && opts.prefactor.kind == ExponentialPrefactor::Kind::fixed;
    const Index cols = free_power ? 3 : 2;

    auto fit_from = [&](std::size_t start) {
        const auto n = static_cast<Index>(rows.size() - start);
        MatrixXr x(n, cols);
        VectorXr y(n);
        for (Index i = 0; i < n; ++i) {
            const auto& r = rows[start + static_cast<std::size_t>(i)];
            x(i, 0) = 1.0;
            x(i, 1) = model == FitModel::power_law ? std::log(r.size) : r.size;
            if (free_power) x(i, 2) = std::log(r.size);
            y(i) = std::log(r.value) - (fixed_power ? opts.prefactor.power * std::log(r.size) : 0.0);
        }
        return least_squares(x, y, 1);
    };

    const std::size_t min_keep = std::max<std::size_t>(4, (rows.size() + 1) / 2);
    std::size_t start = 0;
    LinearFit f = fit_from(start);
    while (opts.auto_window && f.r_squared < opts.r_squared_target && rows.size() - start - 1 >= min_keep) {
        ++start;
        f = fit_from(start);
    }

    out.exponent = f.coef(1);
    out.intercept = f.coef(0);
    out.stderr_ = f.slope_stderr;
    out.r_squared = f.r_squared;
    if (free_power) out.prefactor_power = f.coef(2);
    if (fixed_power) out.prefactor_power = opts.prefactor.power;
    out.window_start = rows[start].size;
    out.points_used = rows.size() - start;
    return out;
}

} // namespace

ScalingFit fit_power_law(const SweepSeries& series, const FitOptions& opts)
{
    return fit_series(series, FitModel::power_law, opts);
}

ScalingFit fit_exponential(const SweepSeries& series, const FitOptions& opts)
{
    return fit_series(series, FitModel::exponential, opts);
}

// -- sweeps ----------------------------------------------------------------

namespace {

std::vector<double> parse_sizes(const json& j)
{
    std::vector<double> sizes;
    if (j.is_array()) {
        for (const auto& v : j) sizes.push_back(v.get<double>());
    } else if (j.is_object()) {
        const double start = j.at("start").get<double>();
        const double stop = j.at("stop").get<double>();
        const double step = j.value("step", 1.0);
        require(step > 0.0, "sizes: step must be positive");
        for (int i = 0;; ++i) {
            const double s = start + i * step;
            if (s > stop + 1e-9 * std::abs(stop)) break;
            sizes.push_back(s);
        }
    } else {
        throw InvalidArgument("sizes must be a list or {start, stop, step}");
    }
    require(!sizes.empty(), "sweep: empty size range");
    return sizes;
}

std::string dump_scalar(const json& v)
{
    return v.is_string() ? v.get<std::string>() : v.dump();
}

/// Separation point used for collective-spin families: 0 for integer j, 1/2 otherwise.
double center_cut(double j)
{
    return std::abs(j - std::round(j)) < 1e-9 ? 0.0 : 0.5;
}

int as_int(double size, const char* what)
{
    const double r = std::round(size);
    require(std::abs(size - r) < 1e-9 && r >= 1.0, std::string(what) + " sizes must be positive integers");
    return static_cast<int>(r);
}

LocalHamiltonian build_family(const std::string& family, int n, const json& params, std::uint64_t seed)
{
    if (family == "tfim")
        return tfim_chain(n, params.value("J", 1.0), params.value("g", 0.5), params.value("periodic", false));
    if (family == "lmg") return lmg_model(n, params.value("gamma", 0.5), params.value("field", 0.5));
    if (family == "random") {
        const int k = params.value("K", 2);
        const std::string graph = params.value("graph", std::string("chain"));
        const auto supports = graph == "all" ? all_supports(n, k) : chain_supports(n, k, params.value("periodic", false));
        return random_local(ManyBodySpace(n, SiteSpace(2)), supports, seed + static_cast<std::uint64_t>(n),
                            params.value("real", false));
    }
    throw InvalidArgument("unknown Hamiltonian family: " + family);
}

void hamiltonian_point(SweepSeries& s, const json& config, const std::string& family, double size)
{
    const json params = config.value("params", json::object());
    const int n = as_int(size, "Hamiltonian");
    const auto seed = config.value("seed", std::uint64_t{0x5eed});
    const LocalHamiltonian h = build_family(family, n, params, seed);

    CertifyOptions opts;
    opts.solver.tol = config.value("eig_tol", 1e-10);
    opts.solver.max_iterations = config.value("eig_maxiter", std::int64_t{0});
    opts.solver.seed = seed;
    if (config.contains("s_mbar") && config.at("s_mbar").is_number()) opts.s_mbar = config.at("s_mbar").get<double>();
    const auto result = certify(h, observable_preset(config.value("observable", std::string("jz"))), opts);

    const std::string bound = config.value("bound", std::string(h.order() == 2 ? "theorem2local" : "theoremKlocal"));
    const GapCertificate& cert = result.certificate(bound_kind_from_string(bound == "theorem" ? "theorem2local" : bound));

    SweepRow row;
    row.size = size;
    row.gap = result.spectrum.gap;
    row.bound = cert.bound_value;
    const int k = h.order();
    row.p_sep = cert.has_input("P_sep") ? cert.input("P_sep")
                                        : result.split.summary.separation_probability(2.0 * k * result.split.summary.level_span);
    row.a1sq = result.split.a1() * result.split.a1();
    row.a2sq = result.split.a2() * result.split.a2();
    row.s_mbar = result.split.summary.separation_point;

    const std::string q = s.quantity;
    if (q == "gap")
        row.value = *row.gap;
    else if (q == "bound")
        row.value = *row.bound;
    else if (q == "p_sep")
        row.value = *row.p_sep;
    else
        throw InvalidArgument("unknown quantity for Hamiltonian family: " + q);
    if (cert.satisfied && !*cert.satisfied) s.metadata["unsound_at"] = std::to_string(n);
    if (result.spectrum.degenerate) s.metadata["degenerate_at"] += std::to_string(n) + " ";
    s.push(row);
}

void special_point(SweepSeries& s, const json& config, const std::string& family, double size)
{
    const json params = config.value("params", json::object());
    SweepRow row;
    row.size = size;
    const std::string q = s.quantity;

    if (family == "w_state" || family == "dicke_superposition") {
        const bool by_n = config.value("size_unit", std::string("j")) == "N";
        const double j = by_n ? 0.5 * size : size;
        const SectorDistribution dist =
            family == "w_state" ? w_state_distribution_exact(j)
                                : dicke_superposition_distribution(io::dicke_spec_from_json(params.at("spec")), j);
        const double cut = config.contains("s_mbar") && config.at("s_mbar").is_number()
                               ? config.at("s_mbar").get<double>()
                               : center_cut(j);
        const double width = config.value("half_width", 2.0);
        row.s_mbar = cut;
        if (q == "p_sep") {
            row.value = separation_probability(dist, cut, width);
            row.p_sep = row.value;
        } else if (q == "variance") {
            row.value = dist.variance();
        } else if (q == "region_distance" || q == "peak_distance" || q == "region_ratio") {
            const auto split = split_distribution(dist, cut, 1.0);
            row.a1sq = split.a1 * split.a1;
            row.a2sq = split.a2 * split.a2;
            const double n_sites = 2.0 * j;
            if (q == "region_distance")
                row.value = split.region_distance;
            else if (q == "peak_distance")
                row.value = split.peak_distance;
            else
                row.value = split.peak_distance / std::sqrt(2.0 * n_sites);
        } else if (q == "p1" && family == "w_state") {
            row.value = dist.probabilities[static_cast<std::size_t>(std::lround(j + 1.0))];
        } else {
            throw InvalidArgument("unknown quantity for " + family + ": " + q);
        }
    } else if (family == "ghz") {
        const int n = as_int(size, "GHZ");
        const double omega = params.value("omega", 0.8);
        const int k = params.value("K", 2);
        if (q == "ghz_bound") {
            row.value = ghz_bound(n, k, omega, params.value("H21K", 1.0));
            row.bound = row.value;
        } else if (q == "p_sep") {
            // |up>^N + |down>^N under J_z: weight 1/2 on each extreme sector.
            SectorDistribution dist;
            for (int i = 0; i <= n; ++i) {
                dist.values.push_back(-0.5 * n + i);
                dist.probabilities.push_back(i == 0 || i == n ? 0.5 : 0.0);
            }
            row.value = separation_probability(dist, center_cut(0.5 * n), config.value("half_width", 2.0 * k));
            row.p_sep = row.value;
        } else {
            throw InvalidArgument("unknown quantity for ghz: " + q);
        }
    } else if (family == "distinguishability") {
        const int groups = as_int(size, "distinguishability");
        const double qv = params.value("q", 0.6);
        const int k = params.value("K", 2);
        const std::size_t count =
            params.value("interaction_count", std::string("fixed")) == "linear"
                ? static_cast<std::size_t>(groups)
                : static_cast<std::size_t>(params.value("count", 100));
        row.value = distinguishability_bound(qv, groups, k, count, params.value("max_norm", 1.0));
        row.bound = row.value;
    } else {
        throw InvalidArgument("unknown sweep family: " + family);
    }
    s.push(row);
}

const char* default_quantity(const std::string& family)
{
    if (family == "ghz") return "ghz_bound";
    if (family == "distinguishability") return "bound";
    if (family == "tfim" || family == "lmg" || family == "random") return "gap";
    return "p_sep";
}

} // namespace

SweepSeries run_sweep(const json& config)
{
    require(config.is_object(), "sweep config must be a JSON object");
    require(config.contains("family"), "sweep config needs a family");
    const std::string family = config.at("family").get<std::string>();
    const auto sizes = parse_sizes(config.at("sizes"));

    SweepSeries s;
    s.quantity = config.value("quantity", std::string(default_quantity(family)));
    s.label = config.value("label", family + ":" + s.quantity);
    s.metadata["family"] = family;
    for (const char* key : {"observable", "bound", "s_mbar", "half_width", "seed", "size_unit"})
        if (config.contains(key)) s.metadata[key] = dump_scalar(config.at(key));
    if (config.contains("params")) s.metadata["params"] = config.at("params").dump();
    if ((family == "w_state" || family == "dicke_superposition") && !config.contains("size_unit"))
        s.metadata["size_unit"] = "j";

    const bool hamiltonian = family == "tfim" || family == "lmg" || family == "random";

    // Points are independent: evaluate them concurrently into scratch series,
    // then merge in size order so the output does not depend on scheduling.
    struct Point {
        SweepSeries part;
        std::exception_ptr error;
    };
    std::vector<Point> points(sizes.size());
    auto evaluate = [&](std::size_t i) {
        points[i].part.quantity = s.quantity;
        try {
            if (hamiltonian)
                hamiltonian_point(points[i].part, config, family, sizes[i]);
            else
                special_point(points[i].part, config, family, sizes[i]);
        } catch (...) {
            points[i].error = std::current_exception();
        }
    };
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), 8));
    for (std::size_t begin = 0; begin < sizes.size(); begin += workers) {
        std::vector<std::future<void>> batch;
        for (std::size_t i = begin; i < std::min(sizes.size(), begin + workers); ++i)
            batch.push_back(std::async(std::launch::async, evaluate, i));
        for (auto& f : batch) f.get();
    }

    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (points[i].error) {
            try {
                std::rethrow_exception(points[i].error);
            } catch (const InvalidArgument& e) {
                if (s.rows.empty()) throw;
                s.partial = true;
                s.error = "size " + num(sizes[i]) + ": " + e.what();
            } catch (const std::exception& e) {
                s.partial = true;
                s.error = "size " + num(sizes[i]) + ": " + e.what();
            }
            break;
        }
        for (const auto& r : points[i].part.rows) s.push(r);
        for (const auto& [key, value] : points[i].part.metadata) {
            if (key == "degenerate_at")
                s.metadata[key] += value;
            else
                s.metadata[key] = value;
        }
    }
    return s;
}

SweepSeries region_distance_series(const std::string& family, const std::vector<double>& sizes,
                                   DistanceMetric metric, const json& params)
{
    require(!sizes.empty(), "region_distance_series: empty size range");
    SweepSeries s;
    s.quantity = metric == DistanceMetric::mean ? "region_distance" : "peak_distance";
    s.label = family + ":" + s.quantity;
    s.metadata["family"] = family;
    for (double size : sizes) {
        const int n = as_int(size, "region distance");
        const double j = 0.5 * n;
        SectorDistribution dist;
        if (family == "ghz") {
            VectorXc amps = VectorXc::Zero(n + 1);
            amps(0) = amps(n) = 1.0 / std::sqrt(2.0);
            dist = collective_distribution(amps, j, Axis::z);
        } else if (family == "w_state") {
            dist = w_state_distribution_exact(j);
        } else if (family == "dicke_superposition") {
            dist = dicke_superposition_distribution(io::dicke_spec_from_json(params.at("spec")), j);
        } else if (family == "dicke") {
            VectorXc amps = VectorXc::Zero(n + 1);
            amps(n - params.value("excitations", 0)) = 1.0;
            dist = collective_distribution(amps, j, Axis::z);
        } else {
            throw InvalidArgument("region_distance_series: unsupported family " + family);
        }
        const auto split = split_distribution(dist, center_cut(j), 1.0);
        SweepRow row;
        row.size = size;
        row.value = metric == DistanceMetric::mean ? split.region_distance : split.peak_distance;
        row.a1sq = split.a1 * split.a1;
        row.a2sq = split.a2 * split.a2;
        row.s_mbar = split.separation_point;
        s.push(row);
    }
    return s;
}

// -- output ----------------------------------------------------------------

namespace {

std::string opt(const std::optional<double>& v)
{
    return v ? num(*v) : "";
}

json opt_json(const std::optional<double>& v)
{
    return v ? json(*v) : json(nullptr);
}

} // namespace

std::string series_to_csv(const SweepSeries& series)
{
    // Value column comes second, named by the quantity; an auxiliary column of
    // the same name would only repeat it, so it is dropped.
    const auto unit = series.metadata.count("size_unit") ? series.metadata.at("size_unit") : "N";
    using Field = std::optional<double> SweepRow::*;
    const std::vector<std::pair<std::string, Field>> aux = {
        {"gap", &SweepRow::gap},   {"bound", &SweepRow::bound}, {"P_sep", &SweepRow::p_sep},
        {"a1sq", &SweepRow::a1sq}, {"a2sq", &SweepRow::a2sq},   {"s_mbar", &SweepRow::s_mbar}};
    auto same = [&](const std::string& name) {
        return std::equal(name.begin(), name.end(), series.quantity.begin(), series.quantity.end(),
                          [](char a, char b) { return std::tolower(a) == std::tolower(b); });
    };
    std::ostringstream out;
    out << unit << "," << series.quantity;
    for (const auto& [name, field] : aux)
        if (!same(name)) out << "," << name;
    out << "\n";
    for (const auto& r : series.rows) {
        out << num(r.size) << "," << num(r.value);
        for (const auto& [name, field] : aux)
            if (!same(name)) out << "," << opt(r.*field);
        out << "\n";
    }
    return out.str();
}

json fit_to_json(const ScalingFit& fit)
{
    json j{{"model", to_string(fit.model)},
           {"identically_zero", fit.identically_zero},
           {"window_start", fit.window_start},
           {"points_used", fit.points_used},
           {"points_total", fit.points_total}};
    if (fit.identically_zero) {
        j["exponent"] = nullptr;
        j["note"] = "identically zero in window";
    } else {
        j["exponent"] = fit.exponent;
        j["stderr"] = fit.stderr_;
        j["intercept"] = fit.intercept;
        j["r_squared"] = fit.r_squared;
    }
    if (fit.prefactor_power) j["prefactor_power"] = *fit.prefactor_power;
    return j;
}

json series_to_json(const SweepSeries& series)
{
    json rows = json::array();
    for (const auto& r : series.rows)
        rows.push_back({{"size", r.size},
                        {"value", r.value},
                        {"gap", opt_json(r.gap)},
                        {"bound", opt_json(r.bound)},
                        {"P_sep", opt_json(r.p_sep)},
                        {"a1sq", opt_json(r.a1sq)},
                        {"a2sq", opt_json(r.a2sq)},
                        {"s_mbar", opt_json(r.s_mbar)}});
    json j{{"label", series.label}, {"quantity", series.quantity}, {"metadata", series.metadata}, {"rows", rows},
           {"partial", series.partial}};
    if (series.partial) j["error"] = series.error;
    return j;
}

std::optional<ScalingFit> fit_from_config(const SweepSeries& series, const json& config)
{
    if (!config.contains("fit") || config.at("fit").is_null()) return std::nullopt;
    const json& f = config.at("fit");
    std::string model;
    FitOptions opts;
    if (f.is_string()) {
        model = f.get<std::string>();
    } else {
        model = f.at("model").get<std::string>();
        opts.auto_window = f.value("window", std::string("auto")) != "all";
        if (f.contains("prefactor")) {
            const json& p = f.at("prefactor");
            if (p.is_number()) {
                opts.prefactor = {ExponentialPrefactor::Kind::fixed, p.get<double>()};
            } else if (p.get<std::string>() == "free") {
                opts.prefactor.kind = ExponentialPrefactor::Kind::free;
            } else {
                require(p.get<std::string>() == "none", "fit prefactor must be a number, \"free\" or \"none\"");
            }
        }
    }
    if (model == "power_law") return fit_power_law(series, opts);
    if (model == "exponential") return fit_exponential(series, opts);
    throw InvalidArgument("unknown fit model: " + model);
}

bool expectation_met(const std::optional<ScalingFit>& fit, const json& config)
{
    if (!config.contains("expect")) return true;
    if (!fit) return false;
    const json& e = config.at("expect");
    const double x = fit->exponent;
    bool ok = true;
    if (e.contains("exponent")) ok = ok && std::abs(x - e.at("exponent").get<double>()) <= e.value("tolerance", 0.1);
    if (e.contains("max_exponent")) ok = ok && x <= e.at("max_exponent").get<double>();
    return ok;
}

std::string scaling_report(const SweepSeries& series, const std::optional<ScalingFit>& fit, const json& config)
{
    std::ostringstream out;
    out << "series: " << series.label << "\n";
    out << "quantity: " << series.quantity << "\n";
    for (const auto& [k, v] : series.metadata) out << "  " << k << " = " << v << "\n";
    out << "points: " << series.rows.size();
    if (!series.rows.empty()) out << " (sizes " << num(series.rows.front().size) << " .. " << num(series.rows.back().size) << ")";
    out << "\n";
    if (series.partial) out << "PARTIAL: " << series.error << "\n";
    if (!fit) return out.str();

    out << "fit: " << to_string(fit->model) << "\n";
    if (fit->identically_zero) {
        out << "  identically zero in window (from size " << num(fit->window_start) << ")\n";
    } else {
        out << "  exponent = " << num(fit->exponent) << " +/- " << num(fit->stderr_) << "\n";
        out << "  r^2 = " << num(fit->r_squared) << "\n";
        if (fit->prefactor_power) out << "  prefactor power = " << num(*fit->prefactor_power) << "\n";
        out << "  window: sizes >= " << num(fit->window_start) << " (" << fit->points_used << " of "
            << fit->points_total << " points)\n";
    }
    if (config.contains("exclusion_order")) {
        const int k = config.at("exclusion_order").get<int>();
        const bool excluded = fit->identically_zero || fit->exponent < -k - 0.1;
        out << "  " << (excluded ? "excluded at order " : "not excluded at order ") << k << "\n";
    }
    if (config.contains("expect")) out << "expectation: " << (expectation_met(fit, config) ? "PASS" : "FAIL") << "\n";
    return out.str();
}

} // namespace gapcert
