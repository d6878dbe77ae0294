#include "gapcert/certify.hpp"

#include <cmath>

namespace gapcert {

ObservableChoice observable_preset(const std::string& name)
{
    if (name == "jz") return {"jz", AdditiveObservable::spin_half_z(), std::nullopt};
    if (name == "jx") {
        MatrixXc u(2, 2);
        const double r = 1.0 / std::sqrt(2.0);
        u << r, r, r, -r;
        return {"jx", AdditiveObservable::spin_half_z(), u};
    }
    throw InvalidArgument("unknown observable preset: " + name + " (expected jz or jx)");
}

const GapCertificate& CertificationResult::certificate(BoundKind kind) const
{
    for (const auto& c : certificates)
        if (c.kind == kind) return c;
    throw InvalidArgument("no certificate of kind " + to_string(kind));
}

CertificationResult certify(const LocalHamiltonian& h, const ObservableChoice& obs, const CertifyOptions& opts)
{
    require(obs.observable.site_dim() == h.space().d(), "certify: observable does not match the site dimension");
    const LocalHamiltonian rotated = obs.site_basis ? h.conjugated(*obs.site_basis) : h;

    CertificationResult out;
    out.observable = obs.name;
    out.spectrum = lowest_two(rotated, opts.solver);
    out.norms = term_norms(rotated);

    const SectorIndex sectors = enumerate_sectors(rotated.space(), obs.observable);
    const double delta = sectors.level_span();
    const int k = rotated.order();
    // Each theorem window gets its own separation point unless one is given.
    const auto dist = sector_distribution(out.spectrum.ground, sectors);
    auto split_for = [&](double half_width) {
        return split_at(out.spectrum.ground, sectors,
                        opts.s_mbar ? *opts.s_mbar : auto_separation_point(dist, half_width, opts.weight_floor));
    };
    out.split = split_for((k == 2 ? 2.0 : 2.0 * k) * delta);
    out.klocal_split = k == 2 && !opts.s_mbar ? split_for(2.0 * k * delta) : out.split;

    out.certificates.push_back(lemma_bound(rotated, out.split, out.spectrum.e0));
    if (k == 2) out.certificates.push_back(theorem_bound(rotated, out.split, out.norms));
    out.certificates.push_back(theorem_bound_klocal(rotated, out.klocal_split, out.norms));
    for (auto& c : out.certificates) {
        c.compare_with(out.spectrum.gap, opts.tolerance);
        if (out.spectrum.degenerate) c.notes.push_back("ground state flagged degenerate; the gap bound is moot");
    }
    return out;
}

} // namespace gapcert
