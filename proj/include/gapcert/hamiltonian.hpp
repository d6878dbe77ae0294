#pragma once

#include <cstdint>
#include <vector>

#include "gapcert/basis.hpp"
#include "gapcert/core.hpp"

namespace gapcert {

/// One K-body contribution H_{i1...iK}.
///
/// `block` acts on the d^K-dimensional space of the support; its local index
/// is little-endian over `support`, i.e. sum_k digit(support[k]) * d^k.
struct InteractionTerm {
    std::vector<int> support;
    MatrixXc block;
};

/// Sum of interaction terms, applied term by term without forming a global matrix.
class LocalHamiltonian {
public:
    /// Validates supports (sorted, distinct, in range, no duplicates across
    /// terms) and Hermiticity of every block to 1e-12, and enforces
    /// |I| <= C(N, K) where K is the largest support size.
    static LocalHamiltonian assemble(const ManyBodySpace& space, std::vector<InteractionTerm> terms);

    const ManyBodySpace& space() const noexcept { return space_; }
    const std::vector<InteractionTerm>& terms() const noexcept { return terms_; }
    /// Largest support size K.
    int order() const noexcept { return order_; }
    /// |I_N^(K)|, the number of interaction terms.
    std::size_t interaction_count() const noexcept { return terms_.size(); }
    /// All blocks have zero imaginary part; enables the real-arithmetic path.
    bool is_real() const noexcept { return real_; }

    /// y = H x. Scalar must be cplx, or double when is_real().
    template <typename Scalar>
    void apply_into(const Scalar* x, Scalar* y) const;

    template <typename Derived>
    Vector<typename Derived::Scalar> apply(const Eigen::MatrixBase<Derived>& x) const
    {
        using Scalar = typename Derived::Scalar;
        require(x.size() == space_.dim(), "LocalHamiltonian::apply: vector size does not match space");
        const Vector<Scalar> xin = x;
        Vector<Scalar> y(xin.size());
        apply_into<Scalar>(xin.data(), y.data());
        return y;
    }

    /// Dense d^N x d^N matrix assembled column by column from apply().
    template <typename Scalar>
    Matrix<Scalar> dense() const;

    /// Same operator written in the rotated site basis: every block becomes
    /// (U^{(x)K})^dagger H (U^{(x)K}), U being the d x d site change of basis.
    LocalHamiltonian conjugated(const MatrixXc& site_unitary) const;

private:
    LocalHamiltonian(const ManyBodySpace& space, std::vector<InteractionTerm> terms);

    struct Plan {
        std::vector<Index> local_offsets; // global offset of each local basis state
        std::vector<Index> env_strides;   // strides of the sites outside the support
        MatrixXr real_block;
    };

    ManyBodySpace space_;
    std::vector<InteractionTerm> terms_;
    std::vector<Plan> plans_;
    int order_ = 0;
    bool real_ = true;
};

/// Per-term spectral norms.
struct NormReport {
    std::vector<double> term_norms;
    double max_norm = 0.0;
    double sum = 0.0;
};

NormReport term_norms(const LocalHamiltonian& h);

/// <bra|H|ket>.
cplx matrix_element(const LocalHamiltonian& h, const VectorXc& bra, const VectorXc& ket);

// -- operators and families ------------------------------------------------

MatrixXc pauli_x();
MatrixXc pauli_y();
MatrixXc pauli_z();

/// Tensor product with ops[0] on the least significant (first) support site.
MatrixXc kron_sites(const std::vector<MatrixXc>& ops);

/// Random Hermitian matrix with complex (or real) Gaussian entries.
MatrixXc random_hermitian(int dim, std::uint64_t seed, bool real = false);

/// Nearest-neighbour supports {i, i+1, ..., i+K-1}, wrapping when periodic.
std::vector<std::vector<int>> chain_supports(int n_sites, int k, bool periodic);

/// Every K-subset of the sites, in lexicographic order.
std::vector<std::vector<int>> all_supports(int n_sites, int k);

/// -J Z_i Z_{i+1} - g X_i on a chain. Single-site fields are folded into the
/// bonds (each site's field split evenly between the bonds that contain it),
/// so |I| is the bond count.
LocalHamiltonian tfim_chain(int n_sites, double coupling, double field, bool periodic);

/// Fully connected Lipkin-Meshkov-Glick model,
/// -(1/N) sum_{i<j} (X_i X_j + gamma Y_i Y_j) - h sum_i Z_i, fields folded into pairs.
LocalHamiltonian lmg_model(int n_sites, double gamma, double field);

/// Independent random Hermitian blocks on the given supports.
LocalHamiltonian random_local(const ManyBodySpace& space, const std::vector<std::vector<int>>& supports,
                              std::uint64_t seed, bool real = false);

} // namespace gapcert
