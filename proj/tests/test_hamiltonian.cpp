#include <gtest/gtest.h>

#include <random>

#include <Eigen/Eigenvalues>

#include "gapcert/hamiltonian.hpp"
#include "oracle.hpp"

using namespace gapcert;

namespace {

// -J sum Z_i Z_{i+1} - g sum X_i built entry by entry on qubits (|0> = up, Z = +1).
MatrixXr tfim_oracle(int n, double j, double g, bool periodic)
{
    const Index dim = Index{1} << n;
    MatrixXr h = MatrixXr::Zero(dim, dim);
    const int bonds = periodic ? n : n - 1;
    for (Index b = 0; b < dim; ++b) {
        for (int i = 0; i < bonds; ++i) {
            const int zi = ((b >> i) & 1) ? -1 : 1;
            const int zj = ((b >> ((i + 1) % n)) & 1) ? -1 : 1;
            h(b, b) -= j * zi * zj;
        }
        for (int i = 0; i < n; ++i) h(b ^ (Index{1} << i), b) -= g;
    }
    return h;
}

std::vector<InteractionTerm> random_terms(int n, int d, int k, std::uint64_t seed)
{
    std::vector<InteractionTerm> terms;
    int dk = 1;
    for (int i = 0; i < k; ++i) dk *= d;
    std::uint64_t s = seed;
    for (const auto& sup : all_supports(n, k)) terms.push_back({sup, random_hermitian(dk, s++)});
    return terms;
}

} // namespace

TEST(LocalHamiltonian, ApplyMatchesBruteForceOracle)
{
    for (int d = 2; d <= 3; ++d) {
        for (int k = 1; k <= 3; ++k) {
            const int n = d == 2 ? 5 : 4;
            auto terms = random_terms(n, d, k, 100 * d + k);
            const MatrixXc ref = oracle::dense_from_terms(n, d, terms);
            const auto h = LocalHamiltonian::assemble(ManyBodySpace(n, SiteSpace(d)), terms);
            EXPECT_LE((h.dense<cplx>() - ref).norm(), 1e-12 * ref.norm()) << "d=" << d << " k=" << k;
            EXPECT_EQ(h.order(), k);
        }
    }
}

TEST(LocalHamiltonian, DenseIsHermitian)
{
    const auto h = random_local(ManyBodySpace(6, SiteSpace(2)), chain_supports(6, 2, true), 9);
    const MatrixXc m = h.dense<cplx>();
    EXPECT_LE((m - m.adjoint()).norm(), 1e-13);
}

TEST(LocalHamiltonian, ApplyIsLinear)
{
    std::mt19937_64 rng(5);
    const auto h = random_local(ManyBodySpace(7, SiteSpace(2)), all_supports(7, 2), 2);
    const VectorXc x = oracle::random_unit(h.space().dim(), rng);
    const VectorXc y = oracle::random_unit(h.space().dim(), rng);
    const cplx a(0.3, -1.2), b(-2.0, 0.5);
    const VectorXc lhs = h.apply(VectorXc(a * x + b * y));
    const VectorXc rhs = a * h.apply(x) + b * h.apply(y);
    EXPECT_LE((lhs - rhs).norm(), 1e-12 * rhs.norm());
}

TEST(LocalHamiltonian, RealPathAgreesWithComplexPath)
{
    std::mt19937_64 rng(8);
    const auto h = tfim_chain(6, 1.0, 0.7, false);
    ASSERT_TRUE(h.is_real());
    const VectorXc x = oracle::random_unit(h.space().dim(), rng);
    const VectorXr xr = x.real();
    const VectorXc yc = h.apply(VectorXc(xr.cast<cplx>()));
    const VectorXr yr = h.apply(xr);
    EXPECT_LE((yc.real() - yr).norm(), 1e-13);
    EXPECT_LE(yc.imag().norm(), 1e-13);
}

TEST(LocalHamiltonian, RejectsInvalidTerms)
{
    const ManyBodySpace space(4, SiteSpace(2));
    const MatrixXc zz = kron_sites({pauli_z(), pauli_z()});
    EXPECT_THROW(LocalHamiltonian::assemble(space, {{{0, 1}, zz}, {{0, 1}, zz}}), InvalidArgument);
    EXPECT_THROW(LocalHamiltonian::assemble(space, {{{1, 0}, zz}}), InvalidArgument);
    EXPECT_THROW(LocalHamiltonian::assemble(space, {{{0, 4}, zz}}), InvalidArgument);
    EXPECT_THROW(LocalHamiltonian::assemble(space, {{{0, 0}, zz}}), InvalidArgument);
    EXPECT_THROW(LocalHamiltonian::assemble(space, {{{0, 1}, pauli_z()}}), InvalidArgument);
    MatrixXc nonherm = zz;
    nonherm(0, 1) = 1.0;
    EXPECT_THROW(LocalHamiltonian::assemble(space, {{{0, 1}, nonherm}}), InvalidArgument);
}

TEST(LocalHamiltonian, InteractionCountIsCapped)
{
    // Four sites admit C(4,1) = 4 single-site terms; a fifth support cannot exist,
    // but 1- and 2-site terms mixed give K = 2 and at most C(4,2) = 6 terms.
    const ManyBodySpace space(4, SiteSpace(2));
    std::vector<InteractionTerm> terms;
    for (const auto& s : all_supports(4, 2)) terms.push_back({s, kron_sites({pauli_x(), pauli_x()})});
    EXPECT_NO_THROW(LocalHamiltonian::assemble(space, terms));
    terms.push_back({{2}, pauli_z()});
    EXPECT_THROW(LocalHamiltonian::assemble(space, terms), InvalidArgument);
}

TEST(LocalHamiltonian, TermNorms)
{
    const ManyBodySpace space(3, SiteSpace(2));
    const auto h = LocalHamiltonian::assemble(
        space, {{{0, 1}, 2.0 * kron_sites({pauli_z(), pauli_z()})}, {{1, 2}, -0.5 * kron_sites({pauli_x(), pauli_y()})}});
    const auto r = term_norms(h);
    ASSERT_EQ(r.term_norms.size(), 2u);
    EXPECT_NEAR(r.term_norms[0], 2.0, 1e-14);
    EXPECT_NEAR(r.term_norms[1], 0.5, 1e-14);
    EXPECT_NEAR(r.max_norm, 2.0, 1e-14);
    EXPECT_NEAR(r.sum, 2.5, 1e-14);
}

TEST(LocalHamiltonian, KronOrderingIsLittleEndian)
{
    // Z on site 0 only: local index 1 (site 0 down) gets -1.
    const MatrixXc zi = kron_sites({pauli_z(), MatrixXc::Identity(2, 2)});
    EXPECT_EQ(zi(1, 1), cplx(-1.0));
    EXPECT_EQ(zi(2, 2), cplx(1.0));
}

TEST(Families, TfimMatchesDirectConstruction)
{
    for (bool periodic : {false, true}) {
        const auto h = tfim_chain(6, 1.3, 0.8, periodic);
        const MatrixXr ref = tfim_oracle(6, 1.3, 0.8, periodic);
        EXPECT_LE((h.dense<double>() - ref).norm(), 1e-12);
        EXPECT_EQ(h.interaction_count(), periodic ? 6u : 5u);
    }
}

TEST(Families, TfimZeroFieldIsClassical)
{
    const auto h = tfim_chain(5, 1.0, 0.0, false);
    Eigen::SelfAdjointEigenSolver<MatrixXr> es(h.dense<double>());
    EXPECT_NEAR(es.eigenvalues()(0), -4.0, 1e-12);
    EXPECT_NEAR(es.eigenvalues()(1), -4.0, 1e-12);
    EXPECT_NEAR(es.eigenvalues()(2), -2.0, 1e-12);
}

TEST(Families, LmgMatchesCollectiveForm)
{
    const int n = 5;
    const auto h = lmg_model(n, 0.4, 0.6);
    EXPECT_EQ(h.interaction_count(), 10u);
    const MatrixXc m = h.dense<cplx>();
    MatrixXc jx = MatrixXc::Zero(32, 32), jy = jx, jz = jx;
    for (int i = 0; i < n; ++i) {
        std::vector<MatrixXc> ops(n, MatrixXc::Identity(2, 2));
        ops[static_cast<std::size_t>(i)] = 0.5 * pauli_x();
        jx += kron_sites(ops);
        ops[static_cast<std::size_t>(i)] = 0.5 * pauli_y();
        jy += kron_sites(ops);
        ops[static_cast<std::size_t>(i)] = 0.5 * pauli_z();
        jz += kron_sites(ops);
    }
    const MatrixXc j2 = jx * jx + jy * jy + jz * jz;
    EXPECT_LE((m * j2 - j2 * m).norm(), 1e-11);
    // -(1/N) sum_{i<j} (X_i X_j + gamma Y_i Y_j) - h sum Z_i
    //   = -(1/N) (4 Jx^2 - N + gamma (4 Jy^2 - N)) / 2 - 2 h Jz
    const MatrixXc ident = MatrixXc::Identity(32, 32);
    const MatrixXc expect = -(1.0 / n) * 0.5 * (4.0 * jx * jx - n * ident + 0.4 * (4.0 * jy * jy - n * ident)) -
                            2.0 * 0.6 * jz;
    EXPECT_LE((m - expect).norm(), 1e-12);
}

TEST(Families, ConjugatedMatchesRotatedDense)
{
    const auto h = random_local(ManyBodySpace(4, SiteSpace(2)), chain_supports(4, 2, false), 17);
    MatrixXc u(2, 2);
    const double r = 1.0 / std::sqrt(2.0);
    u << r, r, r, -r;
    const MatrixXc big = kron_sites({u, u, u, u});
    const MatrixXc expect = big.adjoint() * h.dense<cplx>() * big;
    EXPECT_LE((h.conjugated(u).dense<cplx>() - expect).norm(), 1e-12);
}

TEST(Families, Supports)
{
    EXPECT_EQ(chain_supports(4, 2, true).back(), (std::vector<int>{0, 3}));
    EXPECT_EQ(chain_supports(4, 3, false).size(), 2u);
    EXPECT_EQ(all_supports(5, 3).size(), 10u);
    EXPECT_EQ(all_supports(5, 2).front(), (std::vector<int>{0, 1}));
}
