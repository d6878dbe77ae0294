#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "gapcert/core.hpp"
#include "gapcert/hamiltonian.hpp"

namespace gapcert {

struct SolverOptions {
    /// Absolute tolerance on ‖H psi - E psi‖ for unit psi.
    double tol = 1e-10;
    /// Cap on matrix-vector products per Krylov run; 0 selects 10 sqrt(dim) + 500.
    std::int64_t max_iterations = 0;
    /// Dimensions at or below this are diagonalized densely.
    /// A full dense solve costs ~5 s at 1024, so Krylov takes over early.
    Index dense_threshold = 256;
    std::uint64_t seed = 0x5eed;
    /// Krylov subspace size before a thick restart.
    int krylov_dim = 40;
};

std::int64_t default_max_iterations(Index dim);

/// Two lowest eigenpairs with the degeneracy flag and bookkeeping.
struct SpectralPair {
    double e0 = 0.0;
    double e1 = 0.0;
    double gap = 0.0;
    /// Third-lowest eigenvalue; E1 is only reported once E2 is resolved too.
    double e2 = 0.0;
    VectorXc ground;
    VectorXc excited;
    bool degenerate = false;
    double degeneracy_threshold = 0.0;
    double residual0 = 0.0;
    double residual1 = 0.0;
    std::string method;
    std::int64_t iterations = 0;
    std::uint64_t seed = 0;
    double tol = 0.0;
    std::int64_t max_iterations = 0;
};

/// E0 <= E1 <= E2 with eigenvectors; dense below `dense_threshold`, otherwise
/// thick-restart Lanczos with full reorthogonalization and a deflated
/// verification pass that catches missed multiplicities.
///
/// Ground vector phase: its largest-magnitude amplitude is real positive.
/// Degenerate when gap <= max(1e-10, 1e-8 * sum of term norms).
SpectralPair lowest_two(const LocalHamiltonian& h, const SolverOptions& opts = {});

/// Energies shifted so that E0 = 0.
SpectralPair shift_to_zero(const SpectralPair& pair);

/// Makes the largest-magnitude amplitude real and positive (first index wins ties).
void fix_phase(VectorXc& v);

} // namespace gapcert
