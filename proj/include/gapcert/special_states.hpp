#pragma once

#include <vector>

#include "gapcert/basis.hpp"
#include "gapcert/core.hpp"

namespace gapcert {

// Qubit convention throughout: local state 0 is spin up (J_z = +1/2).

/// |phi1>^N + e^{i alpha} |phi2>^N, normalized.
struct GhzState {
    VectorXc state;
    /// <phi2|phi1>^N.
    cplx lambda;
    /// |<phi1|phi2>|.
    double omega = 0.0;
    /// Norm of the sum before normalization.
    double raw_norm = 0.0;
};

GhzState ghz_state(int n_sites, const VectorXc& phi1, const VectorXc& phi2, double alpha);

VectorXc product_state(int n_sites, const VectorXc& phi);

/// Symmetric N-qubit state with N/2 + m up spins, uniform positive amplitudes.
VectorXc dicke_state(int n_sites, double m);

/// sum_i op_i over N sites as a dense matrix. Meant for small-N checks.
MatrixXc collective_operator(int n_sites, const MatrixXc& site_op);

/// True for any multiple of 1/2 (integers included).
bool is_half_integer(double x);

// -- collective (2j+1)-dimensional space: index k <-> m = -j + k ----------

int spin_dimension(double j);
MatrixXr collective_jz(double j);
/// J_+ |j,m> = sqrt((j-m)(j+m+1)) |j,m+1>.
MatrixXr collective_jplus(double j);
MatrixXr collective_jx(double j);
MatrixXc collective_jy(double j);

/// P_n^{(a,b)}(x) by the three-term recurrence.
double jacobi_polynomial(int n, double a, double b, double x);

/// d^j_{m'm}(theta) = <j,m'| exp(-i theta J_y) |j,m>.
double wigner_d(double j, double mp, double m, double theta);

/// Full d-matrix, rows m', columns m.
MatrixXr wigner_d_matrix(double j, double theta);

enum class Axis { x, y, z };

/// Outcome distribution of J_axis for a collective-space state.
SectorDistribution collective_distribution(const VectorXc& amplitudes, double j, Axis axis);

/// p_m = 2 m^2 C(2j, j+m) / (2^{2j} j), m = -j..j.
SectorDistribution w_state_distribution_exact(double j);

/// Same distribution from |d^j_{j-1,m}(pi/2)|^2.
SectorDistribution w_state_distribution_rotation(double j);

/// Signed c_m for m = -j..j from c_j = 2^{-j}, c_m = -sqrt((j+m+1)/(j-m)) c_{m+1}.
std::vector<double> w_state_overlap_recurrence(double j);

/// sqrt(2/(pi j)) cos((j - m + m') pi/2).
double asymptotic_overlap(double j, double m, double mp);

/// sum_k (sign)^k c_k |j, -n + 2k>.
struct DickeSuperpositionSpec {
    int n = 0;
    std::vector<cplx> coefficients;
    int sign = 1;

    /// Throws InvalidArgument unless sum |c|^2 = 1 and sum c = 0 within 1e-12.
    void validate() const;
    /// m values carried by the coefficients.
    double lowest_m() const { return -n; }
    double highest_m() const { return -n + 2.0 * (static_cast<double>(coefficients.size()) - 1.0); }
};

VectorXc dicke_superposition_amplitudes(const DickeSuperpositionSpec& spec, double j);

/// Measured in J_x for sign -1 and in J_y for sign +1.
SectorDistribution dicke_superposition_distribution(const DickeSuperpositionSpec& spec, double j);

} // namespace gapcert
