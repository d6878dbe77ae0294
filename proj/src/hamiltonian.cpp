#include "gapcert/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

namespace gapcert {

LocalHamiltonian::LocalHamiltonian(const ManyBodySpace& space, std::vector<InteractionTerm> terms)
    : space_(space), terms_(std::move(terms))
{
    const int d = space_.d();
    const int n = space_.n_sites();
    plans_.reserve(terms_.size());
    for (const auto& t : terms_) {
        order_ = std::max(order_, static_cast<int>(t.support.size()));
        real_ = real_ && t.block.imag().cwiseAbs().maxCoeff() == 0.0;
    }
    for (const auto& t : terms_) {
        Plan plan;
        const auto k = t.support.size();
        Index local_dim = 1;
        for (std::size_t s = 0; s < k; ++s) local_dim *= d;
        plan.local_offsets.resize(static_cast<std::size_t>(local_dim));
        for (Index local = 0; local < local_dim; ++local) {
            Index rest = local;
            Index offset = 0;
            for (std::size_t s = 0; s < k; ++s) {
                offset += (rest % d) * space_.stride(t.support[s]);
                rest /= d;
            }
            plan.local_offsets[static_cast<std::size_t>(local)] = offset;
        }
        for (int site = 0; site < n; ++site)
            if (!std::binary_search(t.support.begin(), t.support.end(), site))
                plan.env_strides.push_back(space_.stride(site));
        if (real_) plan.real_block = t.block.real();
        plans_.push_back(std::move(plan));
    }
}

LocalHamiltonian LocalHamiltonian::assemble(const ManyBodySpace& space, std::vector<InteractionTerm> terms)
{
    const int n = space.n_sites();
    std::set<std::vector<int>> seen;
    int order = 0;
    for (const auto& t : terms) {
        const auto k = static_cast<int>(t.support.size());
        require(k >= 1 && k <= n, "assemble: support size must be in [1, N]");
        for (std::size_t s = 0; s < t.support.size(); ++s) {
            require(t.support[s] >= 0 && t.support[s] < n, "assemble: support index out of range");
            require(s == 0 || t.support[s - 1] < t.support[s], "assemble: support must be strictly increasing");
        }
        require(seen.insert(t.support).second, "assemble: duplicate support tuple (pre-sum terms on equal supports)");
        Index local_dim = 1;
        for (int s = 0; s < k; ++s) local_dim *= space.d();
        require(t.block.rows() == local_dim && t.block.cols() == local_dim,
                "assemble: block dimension must be d^K x d^K");
        require((t.block - t.block.adjoint()).cwiseAbs().maxCoeff() <= 1e-12, "assemble: block is not Hermitian");
        order = std::max(order, k);
    }
    if (!terms.empty())
        require(static_cast<double>(terms.size()) <= binomial(n, order),
                "assemble: more terms than C(N, K); fold lower-order terms into K-body blocks");
    return LocalHamiltonian(space, std::move(terms));
}

template <typename Scalar>
void LocalHamiltonian::apply_into(const Scalar* x, Scalar* y) const
{
    const Index dim = space_.dim();
    std::fill(y, y + dim, Scalar(0));
    if constexpr (std::is_same_v<Scalar, double>)
        require(real_, "LocalHamiltonian::apply: complex Hamiltonian applied to a real vector");

    std::vector<Scalar> local_in;
    std::vector<Scalar> local_out;
    std::vector<int> env_digits;
    for (std::size_t t = 0; t < terms_.size(); ++t) {
        const Plan& plan = plans_[t];
        const auto local_dim = plan.local_offsets.size();
        local_in.resize(local_dim);
        local_out.resize(local_dim);

        const Scalar* block = nullptr;
        if constexpr (std::is_same_v<Scalar, double>)
            block = plan.real_block.data();
        else
            block = terms_[t].block.data();
        const auto ld = static_cast<Index>(local_dim); // column-major leading dimension

        // Odometer over the environment sites.
        env_digits.assign(plan.env_strides.size(), 0);
        Index base = 0;
        const Index env_count = dim / ld;
        for (Index e = 0; e < env_count; ++e) {
            for (std::size_t a = 0; a < local_dim; ++a) local_in[a] = x[base + plan.local_offsets[a]];
            std::fill(local_out.begin(), local_out.end(), Scalar(0));
            for (std::size_t b = 0; b < local_dim; ++b) {
                const Scalar xb = local_in[b];
                if (xb == Scalar(0)) continue;
                const Scalar* col = block + static_cast<Index>(b) * ld;
                for (std::size_t a = 0; a < local_dim; ++a) local_out[a] += col[a] * xb;
            }
            for (std::size_t a = 0; a < local_dim; ++a) y[base + plan.local_offsets[a]] += local_out[a];

            for (std::size_t s = 0; s < env_digits.size(); ++s) {
                base += plan.env_strides[s];
                if (++env_digits[s] < space_.d()) break;
                base -= plan.env_strides[s] * space_.d();
                env_digits[s] = 0;
            }
        }
    }
}

template void LocalHamiltonian::apply_into<double>(const double*, double*) const;
template void LocalHamiltonian::apply_into<cplx>(const cplx*, cplx*) const;

template <typename Scalar>
Matrix<Scalar> LocalHamiltonian::dense() const
{
    const Index dim = space_.dim();
    Matrix<Scalar> m(dim, dim);
    Vector<Scalar> e = Vector<Scalar>::Zero(dim);
    for (Index c = 0; c < dim; ++c) {
        e(c) = Scalar(1);
        apply_into<Scalar>(e.data(), m.col(c).data());
        e(c) = Scalar(0);
    }
    return m;
}

template Matrix<double> LocalHamiltonian::dense<double>() const;
template Matrix<cplx> LocalHamiltonian::dense<cplx>() const;

LocalHamiltonian LocalHamiltonian::conjugated(const MatrixXc& site_unitary) const
{
    require(site_unitary.rows() == space_.d() && site_unitary.cols() == space_.d(),
            "conjugated: site unitary must be d x d");
    require((site_unitary.adjoint() * site_unitary - MatrixXc::Identity(space_.d(), space_.d())).norm() <= 1e-12,
            "conjugated: site change of basis is not unitary");
    std::vector<InteractionTerm> rotated;
    rotated.reserve(terms_.size());
    for (const auto& t : terms_) {
        const MatrixXc u = kron_sites(std::vector<MatrixXc>(t.support.size(), site_unitary));
        MatrixXc b = u.adjoint() * t.block * u;
        b = (0.5 * (b + b.adjoint())).eval();
        // Drop rounding-level imaginary parts so real operators stay on the real path.
        for (Index i = 0; i < b.size(); ++i)
            if (std::abs(b.data()[i].imag()) < 1e-15) b.data()[i] = b.data()[i].real();
        rotated.push_back({t.support, b});
    }
    return LocalHamiltonian(space_, std::move(rotated));
}

// ---------------------------------------------------------------------------

NormReport term_norms(const LocalHamiltonian& h)
{
    NormReport r;
    for (const auto& t : h.terms()) {
        Eigen::SelfAdjointEigenSolver<MatrixXc> es(t.block, Eigen::EigenvaluesOnly);
        const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
        r.term_norms.push_back(norm);
        r.max_norm = std::max(r.max_norm, norm);
        r.sum += norm;
    }
    return r;
}

cplx matrix_element(const LocalHamiltonian& h, const VectorXc& bra, const VectorXc& ket)
{
    require(bra.size() == h.space().dim() && ket.size() == h.space().dim(),
            "matrix_element: vector size does not match the Hamiltonian's space");
    return bra.dot(h.apply(ket));
}

// ---------------------------------------------------------------------------

MatrixXc pauli_x()
{
    MatrixXc m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

MatrixXc pauli_y()
{
    MatrixXc m(2, 2);
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return m;
}

MatrixXc pauli_z()
{
    MatrixXc m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

MatrixXc kron_sites(const std::vector<MatrixXc>& ops)
{
    require(!ops.empty(), "kron_sites: empty operator list");
    MatrixXc out = ops.front();
    for (std::size_t k = 1; k < ops.size(); ++k) {
        const MatrixXc& a = ops[k]; // more significant factor
        MatrixXc next(a.rows() * out.rows(), a.cols() * out.cols());
        for (Index i = 0; i < a.rows(); ++i)
            for (Index j = 0; j < a.cols(); ++j)
                next.block(i * out.rows(), j * out.cols(), out.rows(), out.cols()) = a(i, j) * out;
        out = std::move(next);
    }
    return out;
}

MatrixXc random_hermitian(int dim, std::uint64_t seed, bool real)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    MatrixXc a(dim, dim);
    for (Index j = 0; j < dim; ++j)
        for (Index i = 0; i < dim; ++i) a(i, j) = real ? cplx(gauss(rng), 0.0) : cplx(gauss(rng), gauss(rng));
    MatrixXc h = 0.5 * (a + a.adjoint());
    if (real) h = h.real().cast<cplx>();
    return h;
}

std::vector<std::vector<int>> chain_supports(int n_sites, int k, bool periodic)
{
    require(k >= 1 && k <= n_sites, "chain_supports: need 1 <= K <= N");
    std::vector<std::vector<int>> out;
    const int count = periodic && n_sites > k ? n_sites : n_sites - k + 1;
    for (int start = 0; start < count; ++start) {
        std::vector<int> s;
        for (int o = 0; o < k; ++o) s.push_back((start + o) % n_sites);
        std::sort(s.begin(), s.end());
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<std::vector<int>> all_supports(int n_sites, int k)
{
    require(k >= 1 && k <= n_sites, "all_supports: need 1 <= K <= N");
    std::vector<std::vector<int>> out;
    std::vector<int> s(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) s[static_cast<std::size_t>(i)] = i;
    while (true) {
        out.push_back(s);
        int i = k - 1;
        while (i >= 0 && s[static_cast<std::size_t>(i)] == n_sites - k + i) --i;
        if (i < 0) break;
        ++s[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) s[static_cast<std::size_t>(j)] = s[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

namespace {

/// Pair terms a * (P_i P_j) + field-like single-site parts folded with weights.
LocalHamiltonian pair_model(int n_sites, const std::vector<std::vector<int>>& pairs, const MatrixXc& pair_op,
                            const MatrixXc& site_op)
{
    std::vector<int> degree(static_cast<std::size_t>(n_sites), 0);
    for (const auto& p : pairs)
        for (int s : p) ++degree[static_cast<std::size_t>(s)];
    const MatrixXc id = MatrixXc::Identity(2, 2);
    std::vector<InteractionTerm> terms;
    for (const auto& p : pairs) {
        const double wi = 1.0 / degree[static_cast<std::size_t>(p[0])];
        const double wj = 1.0 / degree[static_cast<std::size_t>(p[1])];
        MatrixXc block = pair_op + wi * kron_sites({site_op, id}) + wj * kron_sites({id, site_op});
        terms.push_back({p, block});
    }
    return LocalHamiltonian::assemble(ManyBodySpace(n_sites, SiteSpace(2)), std::move(terms));
}

} // namespace

LocalHamiltonian tfim_chain(int n_sites, double coupling, double field, bool periodic)
{
    require(n_sites >= 2, "tfim_chain: need at least two sites");
    require(!periodic || n_sites >= 3, "tfim_chain: periodic chain needs at least three sites");
    const MatrixXc zz = kron_sites({pauli_z(), pauli_z()});
    return pair_model(n_sites, chain_supports(n_sites, 2, periodic), -coupling * zz, -field * pauli_x());
}

LocalHamiltonian lmg_model(int n_sites, double gamma, double field)
{
    require(n_sites >= 2, "lmg_model: need at least two sites");
    const MatrixXc xx = kron_sites({pauli_x(), pauli_x()});
    const MatrixXc yy = kron_sites({pauli_y(), pauli_y()});
    MatrixXc pair = -(1.0 / n_sites) * (xx + gamma * yy);
    pair = (0.5 * (pair + pair.adjoint())).eval();
    for (Index i = 0; i < pair.size(); ++i)
        if (std::abs(pair.data()[i].imag()) < 1e-15) pair.data()[i] = pair.data()[i].real();
    return pair_model(n_sites, all_supports(n_sites, 2), pair, -field * pauli_z());
}

LocalHamiltonian random_local(const ManyBodySpace& space, const std::vector<std::vector<int>>& supports,
                              std::uint64_t seed, bool real)
{
    std::vector<InteractionTerm> terms;
    std::uint64_t s = seed;
    for (const auto& sup : supports) {
        Index local_dim = 1;
        for (std::size_t k = 0; k < sup.size(); ++k) local_dim *= space.d();
        // splitmix-style decorrelation of per-term seeds
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        terms.push_back({sup, random_hermitian(static_cast<int>(local_dim), s, real)});
    }
    return LocalHamiltonian::assemble(space, std::move(terms));
}

} // namespace gapcert
