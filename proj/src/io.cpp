#include "gapcert/io.hpp"

#include <cmath>
#include <fstream>

namespace gapcert::io {

namespace {

struct ParsedValue {
    double value;
    std::optional<Rational> exact;
};

ParsedValue parse_value(const json& v)
{
    if (v.is_number()) return {v.get<double>(), std::nullopt};
    if (v.is_string()) {
        const auto r = Rational::parse(v.get<std::string>());
        if (!r) throw InvalidArgument("observable: cannot parse level value '" + v.get<std::string>() + "'");
        return {r->value(), r};
    }
    throw InvalidArgument("observable: level value must be a number or a \"p/q\" string");
}

json value_json(const Level& l)
{
    if (l.exact) return l.exact->str();
    return l.value;
}

cplx parse_complex(const json& v)
{
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    throw InvalidArgument("expected a number or a [re, im] pair");
}

} // namespace

AdditiveObservable observable_from_json(const json& j)
{
    if (j.contains("diagonal")) {
        const auto& diag = j.at("diagonal");
        require(diag.is_array(), "observable: \"diagonal\" must be an array");
        bool all_exact = true;
        std::vector<ParsedValue> parsed;
        for (const auto& v : diag) {
            parsed.push_back(parse_value(v));
            all_exact = all_exact && parsed.back().exact.has_value();
        }
        if (all_exact) {
            std::vector<Rational> r;
            for (const auto& p : parsed) r.push_back(*p.exact);
            return AdditiveObservable::from_diagonal(r);
        }
        std::vector<double> d;
        for (const auto& p : parsed) d.push_back(p.value);
        return AdditiveObservable::from_diagonal(d);
    }
    require(j.contains("levels") && j.at("levels").is_array(), "observable: expected \"levels\" or \"diagonal\"");
    std::vector<Level> levels;
    for (const auto& entry : j.at("levels")) {
        json value, degeneracy = 1;
        if (entry.is_array()) {
            require(entry.size() == 2, "observable: level entries are [value, degeneracy]");
            value = entry[0];
            degeneracy = entry[1];
        } else if (entry.is_object()) {
            value = entry.at("value");
            if (entry.contains("degeneracy")) degeneracy = entry.at("degeneracy");
        } else {
            value = entry;
        }
        require(degeneracy.is_number_integer(), "observable: degeneracy must be an integer");
        const auto p = parse_value(value);
        levels.push_back(Level{p.value, degeneracy.get<int>(), p.exact});
    }
    return AdditiveObservable::from_levels(std::move(levels));
}

json observable_to_json(const AdditiveObservable& obs)
{
    // Consecutive assignment is the "levels" form; anything else needs the diagonal.
    bool consecutive = true;
    for (int k = 1; k < obs.site_dim(); ++k)
        if (obs.level_of(k) < obs.level_of(k - 1)) consecutive = false;
    if (consecutive) {
        json levels = json::array();
        for (const auto& l : obs.levels()) levels.push_back(json::array({value_json(l), l.degeneracy}));
        return json{{"levels", levels}};
    }
    json diag = json::array();
    for (int k = 0; k < obs.site_dim(); ++k)
        diag.push_back(value_json(obs.levels()[static_cast<std::size_t>(obs.level_of(k))]));
    return json{{"diagonal", diag}};
}

LocalHamiltonian hamiltonian_from_json(const json& j)
{
    const int n = j.at("n_sites").get<int>();
    const int d = j.value("d", 2);
    const ManyBodySpace space(n, SiteSpace(d));
    std::vector<InteractionTerm> terms;
    for (const auto& t : j.at("terms")) {
        InteractionTerm term;
        term.support = t.at("support").get<std::vector<int>>();
        const auto& block = t.at("block");
        Index dim = 1;
        for (std::size_t k = 0; k < term.support.size(); ++k) dim *= d;
        require(block.is_array() && static_cast<Index>(block.size()) == dim * dim,
                "hamiltonian: block must list d^K x d^K entries row-major");
        term.block.resize(dim, dim);
        for (Index r = 0; r < dim; ++r)
            for (Index c = 0; c < dim; ++c) term.block(r, c) = parse_complex(block[static_cast<std::size_t>(r * dim + c)]);
        terms.push_back(std::move(term));
    }
    return LocalHamiltonian::assemble(space, std::move(terms));
}

json hamiltonian_to_json(const LocalHamiltonian& h)
{
    json terms = json::array();
    for (const auto& t : h.terms()) {
        json block = json::array();
        for (Index r = 0; r < t.block.rows(); ++r)
            for (Index c = 0; c < t.block.cols(); ++c) block.push_back({t.block(r, c).real(), t.block(r, c).imag()});
        terms.push_back({{"support", t.support}, {"block", block}});
    }
    return json{{"n_sites", h.space().n_sites()}, {"d", h.space().d()}, {"terms", terms}};
}

json certificate_to_json(const GapCertificate& c)
{
    json inputs = json::object();
    for (const auto& [k, v] : c.inputs) inputs[k] = v;
    json out{{"kind", to_string(c.kind)}, {"bound_value", c.bound_value}, {"inputs", inputs}};
    out["exact_gap"] = c.exact_gap ? json(*c.exact_gap) : json(nullptr);
    out["satisfied"] = c.satisfied ? json(*c.satisfied) : json(nullptr);
    if (!c.notes.empty()) out["notes"] = c.notes;
    return out;
}

GapCertificate certificate_from_json(const json& j)
{
    GapCertificate c;
    c.kind = bound_kind_from_string(j.at("kind").get<std::string>());
    c.bound_value = j.at("bound_value").get<double>();
    for (const auto& [k, v] : j.at("inputs").items()) c.inputs.emplace_back(k, v.get<double>());
    if (j.contains("exact_gap") && !j.at("exact_gap").is_null()) c.exact_gap = j.at("exact_gap").get<double>();
    if (j.contains("satisfied") && !j.at("satisfied").is_null()) c.satisfied = j.at("satisfied").get<bool>();
    if (j.contains("notes")) c.notes = j.at("notes").get<std::vector<std::string>>();
    return c;
}

json spectral_pair_to_json(const SpectralPair& p)
{
    auto finite_or_null = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    return json{{"E0", p.e0},
                {"E1", p.e1},
                {"E2", finite_or_null(p.e2)},
                {"gap", p.gap},
                {"degenerate", p.degenerate},
                {"degeneracy_threshold", p.degeneracy_threshold},
                {"residual0", p.residual0},
                {"residual1", p.residual1},
                {"method", p.method},
                {"iterations", p.iterations},
                {"seed", p.seed},
                {"eig_tol", p.tol},
                {"eig_maxiter", p.max_iterations}};
}

DickeSuperpositionSpec dicke_spec_from_json(const json& j)
{
    DickeSuperpositionSpec spec;
    spec.n = j.at("n").get<int>();
    for (const auto& c : j.at("coefficients")) spec.coefficients.push_back(parse_complex(c));
    const auto& s = j.at("sign");
    if (s.is_string()) {
        const auto text = s.get<std::string>();
        require(text == "+" || text == "-", "Dicke spec: sign must be \"+\" or \"-\"");
        spec.sign = text == "+" ? 1 : -1;
    } else {
        spec.sign = s.get<int>();
    }
    // Convenience for hand-written files: rescale to unit norm before validating.
    if (j.value("normalize", false)) {
        double norm = 0.0;
        for (const auto& c : spec.coefficients) norm += std::norm(c);
        require(norm > 0.0, "Dicke spec: all coefficients are zero");
        for (auto& c : spec.coefficients) c /= std::sqrt(norm);
    }
    spec.validate();
    return spec;
}

json dicke_spec_to_json(const DickeSuperpositionSpec& spec)
{
    json coeffs = json::array();
    for (const auto& c : spec.coefficients) coeffs.push_back({c.real(), c.imag()});
    return json{{"n", spec.n}, {"coefficients", coeffs}, {"sign", spec.sign > 0 ? "+" : "-"}};
}

json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InvalidArgument(path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

} // namespace gapcert::io
