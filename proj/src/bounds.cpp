#include "gapcert/bounds.hpp"

#include <cmath>
#include <limits>

namespace gapcert {

std::string to_string(BoundKind kind)
{
    switch (kind) {
    case BoundKind::lemma: return "lemma";
    case BoundKind::theorem2local: return "theorem2local";
    case BoundKind::theoremKlocal: return "theoremKlocal";
    case BoundKind::ghz: return "ghz";
    case BoundKind::local_distinguishability: return "local_distinguishability";
    }
    return "unknown";
}

BoundKind bound_kind_from_string(const std::string& name)
{
    for (auto k : {BoundKind::lemma, BoundKind::theorem2local, BoundKind::theoremKlocal, BoundKind::ghz,
                   BoundKind::local_distinguishability})
        if (to_string(k) == name) return k;
    throw InvalidArgument("unknown certificate kind: " + name);
}

void GapCertificate::compare_with(double gap, double tol)
{
    exact_gap = gap;
    satisfied = bound_value >= gap - tol;
}

double GapCertificate::input(const std::string& key) const
{
    for (const auto& [k, v] : inputs)
        if (k == key) return v;
    throw InvalidArgument("certificate has no input named " + key);
}

bool GapCertificate::has_input(const std::string& key) const
{
    for (const auto& kv : inputs)
        if (kv.first == key) return true;
    return false;
}

namespace {

// Shared tail of every Lemma-type estimate: (|H21 - lambda E0|) / (a1 a2 (1 - |lambda|^2)).
double lemma_denominator(double a1, double a2, cplx overlap)
{
    require(a1 > 0.0 && a2 > 0.0, "lemma bound: weights a1, a2 must be positive");
    const double lam = std::abs(overlap);
    require(lam < 1.0 - 1e-12, "lemma bound: |lambda| must be below 1 - 1e-12");
    return a1 * a2 * (1.0 - lam * lam);
}

void check_space(const LocalHamiltonian& h, Index size)
{
    require(size == h.space().dim(), "bound: state dimension does not match the Hamiltonian");
}

GapCertificate theorem_common(const LocalHamiltonian& h, const GroundStateSplit& split, const NormReport& norms,
                              int k, double width_factor, BoundKind kind)
{
    check_space(h, split.psi1.size());
    require(std::abs(split.overlap) <= 1e-12, "theorem bound: split is not a sector split");
    require(norms.term_norms.size() == h.interaction_count(), "theorem bound: norm report does not match h");
    const double delta = split.summary.level_span;
    require(delta > 0.0, "theorem bound: split carries no level span");

    const double a1sq = split.a1() * split.a1();
    const double a2sq = split.a2() * split.a2();
    const double width = width_factor * delta;
    const double p_sep = split.summary.separation_probability(width);
    const double count = static_cast<double>(h.interaction_count());

    GapCertificate c;
    c.kind = kind;
    c.bound_value = count / (2.0 * a1sq * a2sq) * norms.max_norm * p_sep;
    c.inputs = {{"interaction_count", count},
                {"K", static_cast<double>(k)},
                {"a1sq", a1sq},
                {"a2sq", a2sq},
                {"max_norm", norms.max_norm},
                {"level_span", delta},
                {"half_width", width},
                {"s_mbar", split.summary.separation_point},
                {"P_sep", p_sep}};
    if (p_sep >= 1.0 - 1e-12) c.notes.push_back("window covers all weight; bound is vacuous");
    return c;
}

} // namespace

GapCertificate lemma_bound(const LocalHamiltonian& h, const Decomposition& split, double e0)
{
    check_space(h, split.psi1.size());
    require(split.psi2.size() == split.psi1.size(), "lemma bound: component sizes differ");
    const cplx lambda = split.overlap();
    const double denom = lemma_denominator(split.a1, split.a2, lambda);
    const cplx h21 = matrix_element(h, split.psi2, split.psi1);
    const double numer = std::abs(h21 - lambda * e0);

    GapCertificate c;
    c.kind = BoundKind::lemma;
    c.bound_value = numer / denom;
    c.inputs = {{"H21_re", h21.real()},   {"H21_im", h21.imag()},   {"lambda_re", lambda.real()},
                {"lambda_im", lambda.imag()}, {"E0", e0},          {"a1", split.a1},
                {"a2", split.a2}};
    if (c.bound_value <= 1e-12) c.notes.push_back("bound vanishes: the ground state must be degenerate");
    return c;
}

GapCertificate lemma_bound(const LocalHamiltonian& h, const GroundStateSplit& split, double e0)
{
    return lemma_bound(h, split.decomposition(), e0);
}

GapCertificate theorem_bound(const LocalHamiltonian& h, const GroundStateSplit& split, const NormReport& norms)
{
    if (h.order() != 2) throw InvalidArgument("theorem_bound: Hamiltonian is not 2-local; use theorem_bound_klocal");
    // Two sites change the sector value by at most 2 delta.
    return theorem_common(h, split, norms, 2, 2.0, BoundKind::theorem2local);
}

GapCertificate theorem_bound_klocal(const LocalHamiltonian& h, const GroundStateSplit& split, const NormReport& norms)
{
    // Looser window 2 K delta; at K = 2 this is wider than theorem_bound's.
    return theorem_common(h, split, norms, h.order(), 2.0 * h.order(), BoundKind::theoremKlocal);
}

double ghz_bound(int n_sites, int k, double omega, double h21k)
{
    require(n_sites >= 1 && k >= 1 && k <= n_sites, "ghz_bound: need 1 <= K <= N");
    require(omega >= 0.0, "ghz_bound: omega must be nonnegative");
    require(omega < 1.0, "ghz_bound: omega must be below 1");
    require(h21k >= 0.0, "ghz_bound: H21K must be nonnegative");
    if (h21k == 0.0) return 0.0;
    if (n_sites == k) return binomial(n_sites, k) * h21k;
    if (omega == 0.0) return 0.0;
    return std::exp(log_binomial(n_sites, k) + (n_sites - k) * std::log(omega) + std::log(h21k));
}

double distinguishability_q(double p1_plus, double p2_plus)
{
    require(p1_plus >= 0.0 && p1_plus <= 1.0 && p2_plus >= 0.0 && p2_plus <= 1.0,
            "distinguishability_q: probabilities must lie in [0, 1]");
    return std::sqrt(p1_plus * p2_plus) + std::sqrt((1.0 - p1_plus) * (1.0 - p2_plus));
}

double distinguishability_bound(double q, int groups, int k, std::size_t interaction_count, double max_norm)
{
    require(q >= 0.0 && q <= 1.0, "distinguishability_bound: q must lie in [0, 1]");
    require(groups > k, "distinguishability_bound: need more groups than K");
    require(max_norm >= 0.0, "distinguishability_bound: norm must be nonnegative");
    if (q == 0.0 || interaction_count == 0 || max_norm == 0.0) return 0.0;
    return std::exp(std::log(static_cast<double>(interaction_count)) + std::log(max_norm) + (groups - k) * std::log(q));
}

GapCertificate ghz_certificate(const LocalHamiltonian& h, const VectorXc& phi1, const VectorXc& phi2, double alpha,
                               double e0)
{
    const int d = h.space().d();
    const int n = h.space().n_sites();
    require(phi1.size() == d && phi2.size() == d, "ghz_certificate: site states must have the local dimension");
    const VectorXc u1 = phi1.normalized(), u2 = phi2.normalized();
    const cplx site_overlap = u2.dot(u1);
    const double omega = std::abs(site_overlap);
    require(omega < 1.0 - 1e-12, "ghz_certificate: site states are not distinguishable (omega = 1)");

    double h21k = 0.0;
    for (const auto& t : h.terms()) {
        const int k = static_cast<int>(t.support.size());
        const VectorXc b1 = kron_sites(std::vector<MatrixXc>(static_cast<std::size_t>(k), u1));
        const VectorXc b2 = kron_sites(std::vector<MatrixXc>(static_cast<std::size_t>(k), u2));
        h21k = std::max(h21k, std::abs(b2.dot(t.block * b1)));
    }

    // psi = a (phi1^N + e^{i alpha} phi2^N); psi2 carries the phase.
    const cplx phase = std::polar(1.0, alpha);
    const cplx lambda = std::conj(phase) * std::pow(site_overlap, n);
    const double norm_sq = 2.0 + 2.0 * std::real(phase * std::conj(std::pow(site_overlap, n)));
    const double a = 1.0 / std::sqrt(norm_sq);
    const double denom = lemma_denominator(a, a, lambda);
    const int order = h.order();
    const double count = static_cast<double>(h.interaction_count());
    double h21_estimate = 0.0;
    if (h21k > 0.0 && count > 0.0) {
        h21_estimate = order == n ? count * h21k
                                  : (omega == 0.0 ? 0.0
                                                  : std::exp(std::log(count) + (n - order) * std::log(omega) +
                                                             std::log(h21k)));
    }

    GapCertificate c;
    c.kind = BoundKind::ghz;
    c.bound_value = (h21_estimate + std::abs(lambda) * std::abs(e0)) / denom;
    c.inputs = {{"N", static_cast<double>(n)},
                {"K", static_cast<double>(order)},
                {"omega", omega},
                {"H21K", h21k},
                {"interaction_count", count},
                {"binomial_bound", ghz_bound(n, order, omega, h21k)},
                {"H21_estimate", h21_estimate},
                {"lambda_abs", std::abs(lambda)},
                {"E0", e0},
                {"a1", a},
                {"a2", a}};
    c.notes.push_back("valid only if the GHZ state is the ground state of h");
    return c;
}

GapCertificate local_distinguishability_certificate(const LocalHamiltonian& h, const NormReport& norms, double q,
                                                    int groups, double a1, double a2, cplx overlap, double e0)
{
    const double denom = lemma_denominator(a1, a2, overlap);
    const double h21 = distinguishability_bound(q, groups, h.order(), h.interaction_count(), norms.max_norm);
    GapCertificate c;
    c.kind = BoundKind::local_distinguishability;
    c.bound_value = (h21 + std::abs(overlap) * std::abs(e0)) / denom;
    c.inputs = {{"q", q},
                {"groups", static_cast<double>(groups)},
                {"K", static_cast<double>(h.order())},
                {"interaction_count", static_cast<double>(h.interaction_count())},
                {"max_norm", norms.max_norm},
                {"H21_estimate", h21},
                {"lambda_abs", std::abs(overlap)},
                {"E0", e0},
                {"a1", a1},
                {"a2", a2}};
    c.notes.push_back("assumes group measurements factorize; not verified");
    return c;
}

} // namespace gapcert
