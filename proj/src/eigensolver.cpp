#include "gapcert/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace gapcert {

std::int64_t default_max_iterations(Index dim)
{
    return static_cast<std::int64_t>(10.0 * std::sqrt(static_cast<double>(dim))) + 500;
}

void fix_phase(VectorXc& v)
{
    if (v.size() == 0) return;
    Index best = 0;
    double best_mag = -1.0;
    for (Index i = 0; i < v.size(); ++i) {
        // Strictly larger by a relative margin, so rounding noise cannot flip ties.
        const double mag = std::abs(v(i));
        if (mag > best_mag * (1.0 + 1e-12)) {
            best = i;
            best_mag = mag;
        }
    }
    if (best_mag > 0.0) v *= std::conj(v(best)) / best_mag;
    v(best) = cplx(v(best).real(), 0.0);
}

namespace {

struct Eigenpairs {
    std::vector<double> values;
    std::vector<VectorXc> vectors;
    std::int64_t matvecs = 0;
};

template <typename Scalar>
Vector<Scalar> random_vector(Index dim, std::mt19937_64& rng)
{
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector<Scalar> v(dim);
    for (Index i = 0; i < dim; ++i) {
        if constexpr (std::is_same_v<Scalar, double>)
            v(i) = gauss(rng);
        else
            v(i) = cplx(gauss(rng), gauss(rng));
    }
    return v;
}

template <typename Scalar>
void orthogonalize(Eigen::Ref<Vector<Scalar>> w, const Matrix<Scalar>& basis, Index cols)
{
    if (cols == 0) return;
    for (int pass = 0; pass < 2; ++pass) {
        const Vector<Scalar> c = basis.leftCols(cols).adjoint() * w;
        w.noalias() -= basis.leftCols(cols) * c;
    }
}

/// Thick-restart Lanczos for the `nev` lowest eigenpairs of H restricted to
/// the orthogonal complement of `locked`.
template <typename Scalar>
Eigenpairs thick_restart_lanczos(const LocalHamiltonian& h, int nev, const Matrix<Scalar>& locked,
                                 const SolverOptions& opts, std::int64_t max_matvecs, std::mt19937_64& rng)
{
    const Index dim = h.space().dim();
    const Index free_dim = dim - locked.cols();
    require(free_dim >= nev, "lanczos: not enough room for the requested eigenpairs");
    const Index m = std::min<Index>(std::max<Index>(opts.krylov_dim, 2 * nev + 2), free_dim);

    Matrix<Scalar> v = Matrix<Scalar>::Zero(dim, m + 1);
    Matrix<Scalar> t = Matrix<Scalar>::Zero(m, m);
    Vector<Scalar> w(dim);
    Eigenpairs out;

    auto fresh_direction = [&](Index cols) {
        for (int attempt = 0; attempt < 8; ++attempt) {
            Vector<Scalar> r = random_vector<Scalar>(dim, rng);
            orthogonalize<Scalar>(r, locked, locked.cols());
            orthogonalize<Scalar>(r, v, cols);
            const double n = r.norm();
            if (n > 1e-8) return Vector<Scalar>(r / n);
        }
        throw ConvergenceError("lanczos: could not extend the Krylov basis", 0.0);
    };

    v.col(0) = fresh_direction(0);
    Index kept = 0;
    double last_beta = 0.0;
    double worst = std::numeric_limits<double>::infinity();

    while (true) {
        for (Index j = kept; j < m; ++j) {
            h.apply_into<Scalar>(v.col(j).data(), w.data());
            ++out.matvecs;
            orthogonalize<Scalar>(w, locked, locked.cols());
            Vector<Scalar> coef = v.leftCols(j + 1).adjoint() * w;
            w.noalias() -= v.leftCols(j + 1) * coef;
            const Vector<Scalar> again = v.leftCols(j + 1).adjoint() * w;
            w.noalias() -= v.leftCols(j + 1) * again;
            coef += again;
            for (Index i = 0; i <= j; ++i) {
                t(i, j) = coef(i);
                t(j, i) = Eigen::numext::conj(coef(i));
            }
            t(j, j) = Eigen::numext::real(t(j, j));
            double beta = w.norm();
            if (beta <= 1e-12 * std::max(1.0, std::abs(t(j, j)))) {
                // Invariant subspace: continue with a fresh orthogonal direction.
                beta = 0.0;
                v.col(j + 1) = j + 1 < free_dim ? fresh_direction(j + 1) : Vector<Scalar>::Zero(dim);
            } else {
                v.col(j + 1) = w / beta;
            }
            if (j + 1 < m) {
                t(j + 1, j) = beta;
                t(j, j + 1) = beta;
            }
            last_beta = beta;
        }

        Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(t);
        const VectorXr theta = es.eigenvalues();
        const Matrix<Scalar>& y = es.eigenvectors();

        worst = 0.0;
        for (int i = 0; i < nev; ++i) worst = std::max(worst, last_beta * std::abs(y(m - 1, i)));

        const bool budget_spent = out.matvecs >= max_matvecs;
        if (worst <= 0.5 * opts.tol || budget_spent || m == free_dim) {
            // Explicit residuals decide; the Ritz estimate can be optimistic.
            out.values.clear();
            out.vectors.clear();
            double explicit_worst = 0.0;
            for (int i = 0; i < nev; ++i) {
                Vector<Scalar> x = v.leftCols(m) * y.col(i);
                x.normalize();
                Vector<Scalar> hx(dim);
                h.apply_into<Scalar>(x.data(), hx.data());
                ++out.matvecs;
                const double e = Eigen::numext::real(x.dot(hx));
                explicit_worst = std::max(explicit_worst, (hx - e * x).norm());
                out.values.push_back(e);
                out.vectors.push_back(x.template cast<cplx>());
            }
            if (explicit_worst <= opts.tol) return out;
            if (budget_spent || m == free_dim)
                throw ConvergenceError("lanczos: no convergence within the iteration cap", explicit_worst);
        }

        // Thick restart: keep the lowest Ritz vectors plus the residual direction.
        const Index keep = std::min<Index>(std::max<Index>(nev + 1, m / 2), m - 1);
        const Matrix<Scalar> ritz = v.leftCols(m) * y.leftCols(keep);
        const Vector<Scalar> residual_dir = v.col(m);
        v.leftCols(keep) = ritz;
        v.col(keep) = last_beta > 0.0 ? residual_dir : fresh_direction(keep);
        // Re-orthonormalize the kept block against rounding drift.
        for (Index c = 0; c <= keep; ++c) {
            Vector<Scalar> col = v.col(c);
            orthogonalize<Scalar>(col, v, c);
            v.col(c) = col.normalized();
        }
        t.setZero();
        for (Index i = 0; i < keep; ++i) {
            t(i, i) = theta(i);
            t(keep, i) = last_beta * y(m - 1, i);
            t(i, keep) = Eigen::numext::conj(t(keep, i));
        }
        kept = keep;
    }
}

template <typename Scalar>
Eigenpairs lanczos_lowest_three(const LocalHamiltonian& h, const SolverOptions& opts, std::int64_t max_matvecs)
{
    const Index dim = h.space().dim();
    std::mt19937_64 rng(opts.seed);
    Matrix<Scalar> none(dim, 0);
    Eigenpairs found = thick_restart_lanczos<Scalar>(h, 3, none, opts, max_matvecs, rng);

    // A single Krylov sequence sees one vector per eigenspace; search the
    // complement of what was found for missed copies below E2.
    const double slack = std::max(10.0 * opts.tol, 1e-9);
    for (int round = 0; round < 8; ++round) {
        Matrix<Scalar> locked(dim, static_cast<Index>(found.vectors.size()));
        for (std::size_t c = 0; c < found.vectors.size(); ++c) {
            if constexpr (std::is_same_v<Scalar, double>)
                locked.col(static_cast<Index>(c)) = found.vectors[c].real();
            else
                locked.col(static_cast<Index>(c)) = found.vectors[c];
        }
        if (locked.cols() >= dim) break;
        Eigenpairs extra = thick_restart_lanczos<Scalar>(h, 1, locked, opts, max_matvecs, rng);
        found.matvecs += extra.matvecs;
        std::vector<std::size_t> order(found.values.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return found.values[a] < found.values[b]; });
        if (extra.values[0] >= found.values[order[2]] - slack) break;
        found.values.push_back(extra.values[0]);
        found.vectors.push_back(extra.vectors[0]);
    }

    std::vector<std::size_t> order(found.values.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return found.values[a] < found.values[b]; });
    Eigenpairs out;
    out.matvecs = found.matvecs;
    for (int i = 0; i < 3; ++i) {
        out.values.push_back(found.values[order[static_cast<std::size_t>(i)]]);
        out.vectors.push_back(found.vectors[order[static_cast<std::size_t>(i)]]);
    }
    return out;
}

template <typename Scalar>
Eigenpairs dense_lowest(const LocalHamiltonian& h)
{
    const Matrix<Scalar> m = h.dense<Scalar>();
    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(m);
    require(es.info() == Eigen::Success, "lowest_two: dense eigensolver failed");
    Eigenpairs out;
    const Index count = std::min<Index>(3, m.rows());
    for (Index i = 0; i < count; ++i) {
        out.values.push_back(es.eigenvalues()(i));
        out.vectors.push_back(es.eigenvectors().col(i).template cast<cplx>());
    }
    return out;
}

double residual(const LocalHamiltonian& h, const VectorXc& v, double e)
{
    return (h.apply(v) - e * v).norm();
}

} // namespace

SpectralPair lowest_two(const LocalHamiltonian& h, const SolverOptions& opts)
{
    const Index dim = h.space().dim();
    require(dim >= 2, "lowest_two: dimension must be at least 2");
    require(opts.tol > 0.0, "lowest_two: tolerance must be positive");

    SpectralPair out;
    out.tol = opts.tol;
    out.max_iterations = opts.max_iterations > 0 ? opts.max_iterations : default_max_iterations(dim);
    out.seed = opts.seed;

    Eigenpairs pairs;
    if (dim <= opts.dense_threshold) {
        pairs = h.is_real() ? dense_lowest<double>(h) : dense_lowest<cplx>(h);
        out.method = "dense";
    } else {
        pairs = h.is_real() ? lanczos_lowest_three<double>(h, opts, out.max_iterations)
                            : lanczos_lowest_three<cplx>(h, opts, out.max_iterations);
        out.method = "lanczos";
        out.iterations = pairs.matvecs;
    }

    out.e0 = pairs.values[0];
    out.e1 = pairs.values[1];
    out.e2 = pairs.values.size() > 2 ? pairs.values[2] : std::numeric_limits<double>::infinity();
    out.gap = std::max(0.0, out.e1 - out.e0);
    out.ground = pairs.vectors[0];
    out.excited = pairs.vectors[1];
    fix_phase(out.ground);
    fix_phase(out.excited);
    out.residual0 = residual(h, out.ground, out.e0);
    out.residual1 = residual(h, out.excited, out.e1);
    const double achieved = std::max(out.residual0, out.residual1);
    if (achieved > opts.tol)
        throw ConvergenceError("lowest_two: eigen-residual above tolerance", achieved);

    out.degeneracy_threshold = std::max(1e-10, 1e-8 * term_norms(h).sum);
    out.degenerate = out.gap <= out.degeneracy_threshold;
    return out;
}

SpectralPair shift_to_zero(const SpectralPair& pair)
{
    SpectralPair out = pair;
    const double shift = pair.e0;
    out.e0 -= shift;
    out.e1 -= shift;
    out.e2 -= shift;
    return out;
}

} // namespace gapcert
