#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gapcert/hamiltonian.hpp"
#include "gapcert/splitting.hpp"

namespace gapcert {

enum class BoundKind { lemma, theorem2local, theoremKlocal, ghz, local_distinguishability };

std::string to_string(BoundKind kind);
BoundKind bound_kind_from_string(const std::string& name);

/// Value of one gap upper bound plus every quantity that went into it.
struct GapCertificate {
    BoundKind kind = BoundKind::lemma;
    double bound_value = 0.0;
    std::vector<std::pair<std::string, double>> inputs;
    std::optional<double> exact_gap;
    std::optional<bool> satisfied;
    std::vector<std::string> notes;

    /// Records the exact gap; satisfied = bound_value >= exact_gap - tol.
    void compare_with(double gap, double tol = 1e-8);
    double input(const std::string& key) const;
    bool has_input(const std::string& key) const;
};

/// |<psi2|H|psi1> - lambda E0| / (a1 a2 (1 - |lambda|^2)).
/// Valid when psi = a1 psi1 + a2 psi2 is the (unique) ground state with energy e0.
GapCertificate lemma_bound(const LocalHamiltonian& h, const Decomposition& split, double e0);
GapCertificate lemma_bound(const LocalHamiltonian& h, const GroundStateSplit& split, double e0);

/// 2-local form: |I| / (2 a1^2 a2^2) * max‖H_ij‖ * P_sep(2 delta).
GapCertificate theorem_bound(const LocalHamiltonian& h, const GroundStateSplit& split, const NormReport& norms);

/// K = h.order(): |I| / (2 a1^2 a2^2) * max‖block‖ * P_sep(2 K delta).
GapCertificate theorem_bound_klocal(const LocalHamiltonian& h, const GroundStateSplit& split, const NormReport& norms);

/// C(N, K) * omega^(N-K) * h21k, evaluated through logarithms.
double ghz_bound(int n_sites, int k, double omega, double h21k);

/// sqrt(p1+ p2+) + sqrt(p1- p2-), p- = 1 - p+.
double distinguishability_q(double p1_plus, double p2_plus);

/// interaction_count * max_norm * q^(groups - K).
double distinguishability_bound(double q, int groups, int k, std::size_t interaction_count, double max_norm);

/// Lemma applied to |phi1>^N + e^{i alpha} |phi2>^N (normalized), with the
/// cross element bounded term by term: |H21| <= |I| omega^(N-K) H21^[K], where
/// H21^[K] is the largest |<phi2^k|H_t|phi1^k>| over terms.
/// Only meaningful when that state is the ground state of h.
GapCertificate ghz_certificate(const LocalHamiltonian& h, const VectorXc& phi1, const VectorXc& phi2, double alpha,
                               double e0);

/// Lemma with |H21| replaced by the local-distinguishability estimate.
GapCertificate local_distinguishability_certificate(const LocalHamiltonian& h, const NormReport& norms, double q,
                                                    int groups, double a1, double a2, cplx overlap, double e0);

} // namespace gapcert
