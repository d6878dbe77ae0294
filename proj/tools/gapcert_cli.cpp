#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gapcert/certify.hpp"
#include "gapcert/io.hpp"
#include "gapcert/scaling.hpp"
#include "gapcert/special_states.hpp"
#include "gapcert/squid.hpp"

using namespace gapcert;
using io::json;

namespace {

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct CertifyArgs {
    std::string hamiltonian;
    std::string family;
    int n = 8;
    double coupling = 1.0;
    double field = 0.5;
    double gamma = 0.0;
    bool periodic = false;
    std::string observable = "jz";
    std::optional<double> s_mbar;
    double eig_tol = 1e-10;
    std::int64_t eig_maxiter = 0;
    std::string out;
};

ObservableChoice pick_observable(const std::string& arg)
{
    if (arg == "jz" || arg == "jx") return observable_preset(arg);
    return {"custom", io::observable_from_json(io::read_json_file(arg)), std::nullopt};
}

LocalHamiltonian build_hamiltonian(const CertifyArgs& a)
{
    if (!a.hamiltonian.empty()) {
        if (!a.family.empty() && a.family != "custom")
            throw InvalidArgument("--hamiltonian is only combined with --family custom");
        return io::hamiltonian_from_json(io::read_json_file(a.hamiltonian));
    }
    if (a.family == "tfim") return tfim_chain(a.n, a.coupling, a.field, a.periodic);
    if (a.family == "lmg") return lmg_model(a.n, a.gamma, a.field);
    if (a.family == "custom") throw InvalidArgument("--family custom needs --hamiltonian <file>");
    throw InvalidArgument("give --hamiltonian <file> or --family tfim|lmg|custom");
}

json split_to_json(const GroundStateSplit& s)
{
    const auto& m = s.summary;
    return {{"s_mbar", m.separation_point}, {"a1", m.a1},
            {"a2", m.a2},                  {"region_distance", m.region_distance},
            {"peak_distance", m.peak_distance}, {"level_span", m.level_span},
            {"reconstruction_error", s.reconstruction_error},
            {"overlap", std::abs(s.overlap)}};
}

int run_certify(const CertifyArgs& a)
{
    const auto h = build_hamiltonian(a);
    CertifyOptions opts;
    opts.solver.tol = a.eig_tol;
    opts.solver.max_iterations = a.eig_maxiter;
    opts.s_mbar = a.s_mbar;
    const auto r = certify(h, pick_observable(a.observable), opts);

    json certs = json::array();
    for (const auto& c : r.certificates) certs.push_back(io::certificate_to_json(c));
    const json out = {{"n_sites", h.space().n_sites()},
                      {"d", h.space().site().d},
                      {"K", h.order()},
                      {"interaction_count", h.interaction_count()},
                      {"max_term_norm", r.norms.max_norm},
                      {"observable", r.observable},
                      {"spectrum", io::spectral_pair_to_json(r.spectrum)},
                      {"split", split_to_json(r.split)},
                      {"klocal_split", split_to_json(r.klocal_split)},
                      {"certificates", certs}};
    const std::string text = out.dump(2) + "\n";
    if (a.out.empty())
        std::cout << text;
    else
        io::write_text_file(a.out, text);
    return 0;
}

int run_wstate(double j, const std::string& method)
{
    const auto d = method == "rotation" ? w_state_distribution_rotation(j) : w_state_distribution_exact(j);
    std::cout << "j,m,p_m\n";
    for (std::size_t k = 0; k < d.size(); ++k)
        std::cout << num(j) << ',' << num(d.values[k]) << ',' << num(d.probabilities[k]) << '\n';
    return 0;
}

int run_dicke(const std::string& spec_file, double jmin, double jmax, double step, double s_mbar, double half_width)
{
    const auto spec = io::dicke_spec_from_json(io::read_json_file(spec_file));
    spec.validate();
    require(step > 0 && jmax >= jmin, "dicke-sup: need jmax >= jmin and step > 0");
    std::cout << "j,P_sep\n";
    for (double j = jmin; j <= jmax + 1e-9; j += step)
        std::cout << num(j) << ','
                  << num(separation_probability(dicke_superposition_distribution(spec, j), s_mbar, half_width)) << '\n';
    return 0;
}

int run_squid(const std::string& potential, const std::vector<double>& betas, int grid, double mass,
              double half_width)
{
    std::cout << "beta,E0,E1,gap,psi0_at_0,ratio\n";
    auto row = [&](double beta, const Potential1D& pot) {
        const auto s = solve_well(pot, mass);
        std::cout << num(beta) << ',' << num(s.e0) << ',' << num(s.e1) << ',' << num(s.gap) << ','
                  << num(s.psi0_at_0) << ',' << num(gap_identity_ratio(s)) << '\n';
    };
    if (potential == "quartic") {
        require(!betas.empty(), "squid: --beta needs at least one value");
        for (double b : betas) row(b, quartic_double_well(b, half_width, grid));
    } else if (potential == "harmonic") {
        row(0.0, harmonic_well(half_width, grid));
    } else {
        throw InvalidArgument("squid: unknown potential " + potential);
    }
    return 0;
}

int run_sweep_cmd(const std::string& config_file, const std::string& out_dir)
{
    const json cfg = io::read_json_file(config_file);
    const auto series = run_sweep(cfg);
    const auto fit = fit_from_config(series, cfg);
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);
    io::write_text_file((dir / "series.csv").string(), series_to_csv(series));
    json fit_json = fit ? fit_to_json(*fit) : json(nullptr);
    io::write_text_file((dir / "fit.json").string(),
                        json{{"series", series_to_json(series)}, {"fit", fit_json}}.dump(2) + "\n");
    const std::string report = scaling_report(series, fit, cfg);
    io::write_text_file((dir / "report.txt").string(), report);
    std::cout << report;
    if (series.partial) return 3;
    return expectation_met(fit, cfg) ? 0 : 2;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Gap certificates for macroscopic superpositions"};
    app.require_subcommand(1);

    CertifyArgs ca;
    auto* cert = app.add_subcommand("certify", "Exact gap, ground-state split and every bound, as JSON");
    cert->add_option("--hamiltonian", ca.hamiltonian, "Hamiltonian JSON file")->check(CLI::ExistingFile);
    cert->add_option("--family", ca.family, "tfim | lmg | custom");
    cert->add_option("--n", ca.n, "Number of sites for built-in families");
    cert->add_option("--J", ca.coupling, "TFIM coupling");
    cert->add_option("--g,--field", ca.field, "Transverse field (tfim) or longitudinal field (lmg)");
    cert->add_option("--gamma", ca.gamma, "LMG anisotropy");
    cert->add_flag("--periodic", ca.periodic, "Periodic TFIM chain");
    cert->add_option("--observable", ca.observable, "jz | jx | observable JSON file");
    cert->add_option("--s-mbar", ca.s_mbar, "Separation point (default: automatic)");
    cert->add_option("--eig-tol", ca.eig_tol, "Eigen-residual tolerance");
    cert->add_option("--eig-maxiter", ca.eig_maxiter, "Iteration cap (0: 10 sqrt(dim) + 500)");
    cert->add_option("--out", ca.out, "Write JSON here instead of stdout");

    double wj = 0.0;
    std::string wmethod = "exact";
    auto* w = app.add_subcommand("wstate", "Collective J_x distribution of the W state, CSV j,m,p_m");
    w->add_option("--j", wj, "Total spin (integer or half-integer)")->required();
    w->add_option("--method", wmethod, "exact | rotation")->check(CLI::IsMember({"exact", "rotation"}));

    std::string spec_file;
    double jmin = 20, jmax = 200, jstep = 1, ds_mbar = 0.0, dhw = 2.0;
    auto* dk = app.add_subcommand("dicke-sup", "P_sep of a Dicke superposition over j, CSV j,P_sep");
    dk->add_option("--spec", spec_file, "Superposition JSON file")->required()->check(CLI::ExistingFile);
    dk->add_option("--jmin", jmin);
    dk->add_option("--jmax", jmax);
    dk->add_option("--step", jstep);
    dk->add_option("--s-mbar", ds_mbar);
    dk->add_option("--half-width", dhw);

    std::string potential = "quartic";
    std::vector<double> betas;
    int grid = 2001;
    double mass = 10.0, well_half_width = 4.0;
    auto* sq = app.add_subcommand("squid", "Double-well tunnel splitting, CSV beta,E0,E1,gap,psi0_at_0,ratio");
    sq->add_option("--potential", potential)->check(CLI::IsMember({"quartic", "harmonic"}));
    sq->add_option("--beta", betas, "Barrier heights")->delimiter(',');
    sq->add_option("--grid", grid, "Odd number of grid points");
    sq->add_option("--mass", mass, "Mass scale");
    sq->add_option("--half-width", well_half_width, "Grid spans [-w, w]");

    std::string config_file, out_dir;
    auto* sw = app.add_subcommand("sweep", "Size sweep with fit and report");
    sw->add_option("--config", config_file, "Sweep JSON file")->required()->check(CLI::ExistingFile);
    sw->add_option("--out", out_dir, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cert) return run_certify(ca);
        if (*w) return run_wstate(wj, wmethod);
        if (*dk) return run_dicke(spec_file, jmin, jmax, jstep, ds_mbar, dhw);
        if (*sq) return run_squid(potential, betas, grid, mass, well_half_width);
        if (*sw) return run_sweep_cmd(config_file, out_dir);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
