#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gapcert/basis.hpp"
#include "gapcert/bounds.hpp"
#include "gapcert/eigensolver.hpp"
#include "gapcert/hamiltonian.hpp"
#include "gapcert/splitting.hpp"

namespace gapcert {

/// An additive observable given in its own eigenbasis plus the site unitary
/// whose columns are that eigenbasis in the computational basis.
struct ObservableChoice {
    std::string name;
    AdditiveObservable observable;
    std::optional<MatrixXc> site_basis;
};

/// "jz" or "jx" on qubits. For jx the local state 0 is |+>.
ObservableChoice observable_preset(const std::string& name);

struct CertifyOptions {
    SolverOptions solver;
    /// Empty: auto_separation_point per theorem window (2 delta for K = 2, 2 K delta otherwise).
    std::optional<double> s_mbar;
    double weight_floor = 0.05;
    double tolerance = 1e-8;
};

struct CertificationResult {
    SpectralPair spectrum;
    /// Split used by the lemma and the K = 2 theorem.
    GroundStateSplit split;
    /// Split for the K-local certificate; differs from `split` only for K = 2 with an automatic cut.
    GroundStateSplit klocal_split;
    NormReport norms;
    std::string observable;
    /// lemma, then theorem2local (K = 2 only), then theoremKlocal.
    std::vector<GapCertificate> certificates;

    const GapCertificate& certificate(BoundKind kind) const;
};

CertificationResult certify(const LocalHamiltonian& h, const ObservableChoice& obs, const CertifyOptions& opts = {});

} // namespace gapcert
