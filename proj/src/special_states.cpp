#include "gapcert/special_states.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "gapcert/hamiltonian.hpp"

namespace gapcert {

namespace {

constexpr double kPi = std::numbers::pi;

int twice(double x)
{
    const double t = 2.0 * x;
    const double r = std::round(t);
    require(std::abs(t - r) <= 1e-9, "value is not a multiple of 1/2");
    return static_cast<int>(r);
}

void check_spin(double j)
{
    require(j >= 0.5 - 1e-12 && is_half_integer(j), "j must be a positive multiple of 1/2");
    require(j <= 1e6, "j is too large");
}

/// Index k = j + m, with the m-j integrality check.
int offset(double j, double m)
{
    const int tj = twice(j), tm = twice(m);
    require(std::abs(tm) <= tj, "|m| must not exceed j");
    require((tj - tm) % 2 == 0, "j - m must be an integer");
    return (tj + tm) / 2;
}

long double jacobi_ld(int n, long double a, long double b, long double x)
{
    if (n == 0) return 1.0L;
    long double p0 = 1.0L;
    long double p1 = (a + 1.0L) + (a + b + 2.0L) * (x - 1.0L) / 2.0L;
    for (int k = 2; k <= n; ++k) {
        const long double s = 2.0L * k + a + b;
        const long double c0 = 2.0L * k * (k + a + b) * (s - 2.0L);
        const long double c1 = (s - 1.0L) * (s * (s - 2.0L) * x + a * a - b * b);
        const long double c2 = 2.0L * (k + a - 1.0L) * (k + b - 1.0L) * s;
        const long double p2 = (c1 * p1 - c2 * p0) / c0;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

/// d^j_{m'm}(theta) from twice-integers, using the branch with nonnegative Jacobi parameters.
double wigner_d_twice(int tj, int tmp, int tm, double theta)
{
    // All of these are integers: j+m, j-m, j+m', j-m'.
    const int jpm = (tj + tm) / 2, jmm = (tj - tm) / 2;
    const int jpmp = (tj + tmp) / 2, jmmp = (tj - tmp) / 2;
    const int k = std::min({jpm, jmm, jpmp, jmmp});
    const int dm = (tmp - tm) / 2; // m' - m
    int a = 0, lam = 0;
    if (k == jpm) {
        a = dm;
        lam = dm;
    } else if (k == jmm) {
        a = -dm;
    } else if (k == jpmp) {
        a = -dm;
    } else {
        a = dm;
        lam = dm;
    }
    const int b = tj - 2 * k - a;

    const long double half = static_cast<long double>(theta) / 2.0L;
    const long double s = std::sin(half), c = std::cos(half);
    if ((a > 0 && s == 0.0L) || (b > 0 && c == 0.0L)) return 0.0;

    long double logmag = 0.5L * (static_cast<long double>(log_binomial(tj - k, k + a)) -
                                 static_cast<long double>(log_binomial(k + b, b)));
    int sign = (lam % 2 == 0) ? 1 : -1;
    if (a > 0) {
        logmag += a * std::log(std::abs(s));
        if (s < 0 && a % 2 == 1) sign = -sign;
    }
    if (b > 0) {
        logmag += b * std::log(std::abs(c));
        if (c < 0 && b % 2 == 1) sign = -sign;
    }
    const long double p = jacobi_ld(k, a, b, std::cos(static_cast<long double>(theta)));
    return static_cast<double>(sign * std::exp(logmag) * p);
}

SectorDistribution m_distribution(double j, std::vector<double> probabilities)
{
    SectorDistribution out;
    const int dim = spin_dimension(j);
    for (int k = 0; k < dim; ++k) out.values.push_back(-j + k);
    out.probabilities = std::move(probabilities);
    return out;
}

} // namespace

bool is_half_integer(double x)
{
    return std::abs(2.0 * x - std::round(2.0 * x)) <= 1e-9;
}

GhzState ghz_state(int n_sites, const VectorXc& phi1, const VectorXc& phi2, double alpha)
{
    require(n_sites >= 1, "ghz_state: need at least one site");
    require(phi1.size() == phi2.size() && phi1.size() >= 2, "ghz_state: site states must share a dimension >= 2");
    require(std::abs(phi1.norm() - 1.0) <= 1e-12 && std::abs(phi2.norm() - 1.0) <= 1e-12,
            "ghz_state: site states must be unit vectors");
    GhzState out;
    const cplx site = phi2.dot(phi1);
    out.omega = std::abs(site);
    require(out.omega < 1.0 - 1e-12, "ghz_state: site states coincide up to phase (omega = 1)");
    out.lambda = std::pow(site, n_sites);
    out.state = product_state(n_sites, phi1) + std::polar(1.0, alpha) * product_state(n_sites, phi2);
    out.raw_norm = out.state.norm();
    out.state /= out.raw_norm;
    return out;
}

VectorXc product_state(int n_sites, const VectorXc& phi)
{
    require(n_sites >= 1, "product_state: need at least one site");
    VectorXc out(1);
    out(0) = 1.0;
    for (int i = 0; i < n_sites; ++i) {
        // New site is more significant: index = old + d^i * digit.
        VectorXc next(out.size() * phi.size());
        for (Index digit = 0; digit < phi.size(); ++digit)
            next.segment(digit * out.size(), out.size()) = phi(digit) * out;
        out = std::move(next);
    }
    return out;
}

VectorXc dicke_state(int n_sites, double m)
{
    require(n_sites >= 1 && n_sites <= 26, "dicke_state: N must lie in 1..26");
    const double j = 0.5 * n_sites;
    const int ups = offset(j, m);
    const ManyBodySpace space(n_sites, SiteSpace(2));
    VectorXc out = VectorXc::Zero(space.dim());
    const double amp = 1.0 / std::sqrt(binomial(n_sites, ups));
    for (Index b = 0; b < space.dim(); ++b) {
        const int ones = std::popcount(static_cast<std::uint64_t>(b));
        if (n_sites - ones == ups) out(b) = amp;
    }
    return out;
}

MatrixXc collective_operator(int n_sites, const MatrixXc& site_op)
{
    require(site_op.rows() == site_op.cols(), "collective_operator: site operator must be square");
    const ManyBodySpace space(n_sites, SiteSpace(static_cast<int>(site_op.rows())));
    require(space.dim() <= 1 << 14, "collective_operator: dense matrix too large");
    const int d = space.d();
    MatrixXc out = MatrixXc::Zero(space.dim(), space.dim());
    for (int site = 0; site < n_sites; ++site) {
        const Index stride = space.stride(site);
        for (Index col = 0; col < space.dim(); ++col) {
            const int dc = space.digit(col, site);
            const Index base = col - dc * stride;
            for (int dr = 0; dr < d; ++dr) out(base + dr * stride, col) += site_op(dr, dc);
        }
    }
    return out;
}

int spin_dimension(double j)
{
    check_spin(j);
    return twice(j) + 1;
}

MatrixXr collective_jz(double j)
{
    const int dim = spin_dimension(j);
    MatrixXr out = MatrixXr::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) out(k, k) = -j + k;
    return out;
}

MatrixXr collective_jplus(double j)
{
    const int dim = spin_dimension(j);
    MatrixXr out = MatrixXr::Zero(dim, dim);
    for (int k = 0; k + 1 < dim; ++k) {
        const double m = -j + k;
        out(k + 1, k) = std::sqrt((j - m) * (j + m + 1.0));
    }
    return out;
}

MatrixXr collective_jx(double j)
{
    const MatrixXr p = collective_jplus(j);
    return 0.5 * (p + p.transpose());
}

MatrixXc collective_jy(double j)
{
    const MatrixXr p = collective_jplus(j);
    return (p - p.transpose()).cast<cplx>() / cplx(0.0, 2.0);
}

double jacobi_polynomial(int n, double a, double b, double x)
{
    require(n >= 0, "jacobi_polynomial: degree must be nonnegative");
    require(a > -1.0 && b > -1.0, "jacobi_polynomial: parameters must exceed -1");
    require(std::abs(x) <= 1.0 + 1e-12, "jacobi_polynomial: x must lie in [-1, 1]");
    return static_cast<double>(jacobi_ld(n, a, b, std::clamp(x, -1.0, 1.0)));
}

double wigner_d(double j, double mp, double m, double theta)
{
    check_spin(j);
    offset(j, m);
    offset(j, mp);
    require(std::isfinite(theta), "wigner_d: theta must be finite");
    return wigner_d_twice(twice(j), twice(mp), twice(m), theta);
}

MatrixXr wigner_d_matrix(double j, double theta)
{
    const int dim = spin_dimension(j);
    const int tj = twice(j);
    MatrixXr out(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) out(r, c) = wigner_d_twice(tj, 2 * r - tj, 2 * c - tj, theta);
    return out;
}

SectorDistribution collective_distribution(const VectorXc& amplitudes, double j, Axis axis)
{
    const int dim = spin_dimension(j);
    require(amplitudes.size() == dim, "collective_distribution: amplitude count must be 2j+1");
    require(std::abs(amplitudes.norm() - 1.0) <= kNormTolerance, "collective_distribution: state is not normalized");
    const int tj = twice(j);
    std::vector<double> p(static_cast<std::size_t>(dim), 0.0);
    if (axis == Axis::z) {
        for (int k = 0; k < dim; ++k) p[static_cast<std::size_t>(k)] = std::norm(amplitudes(k));
        return m_distribution(j, std::move(p));
    }
    // <m|_x psi> = sum_m' d_{m'm}(pi/2) psi_m'; the y basis adds exp(i pi m'/2).
    std::vector<int> support;
    for (int k = 0; k < dim; ++k)
        if (amplitudes(k) != cplx(0.0, 0.0)) support.push_back(k);
    for (int k = 0; k < dim; ++k) {
        cplx acc = 0.0;
        for (int kp : support) {
            cplx a = amplitudes(kp);
            if (axis == Axis::y) a *= std::polar(1.0, kPi / 4.0 * (2 * kp - tj));
            acc += wigner_d_twice(tj, 2 * kp - tj, 2 * k - tj, kPi / 2.0) * a;
        }
        p[static_cast<std::size_t>(k)] = std::norm(acc);
    }
    return m_distribution(j, std::move(p));
}

SectorDistribution w_state_distribution_exact(double j)
{
    const int dim = spin_dimension(j);
    const int tj = twice(j);
    std::vector<double> p(static_cast<std::size_t>(dim), 0.0);
    for (int k = 0; k < dim; ++k) {
        const double m = -j + k;
        if (m == 0.0) continue;
        p[static_cast<std::size_t>(k)] = std::exp(std::log(2.0) + 2.0 * std::log(std::abs(m)) +
                                                  log_binomial(tj, k) - tj * std::log(2.0) - std::log(j));
    }
    return m_distribution(j, std::move(p));
}

SectorDistribution w_state_distribution_rotation(double j)
{
    const int dim = spin_dimension(j);
    const int tj = twice(j);
    std::vector<double> p(static_cast<std::size_t>(dim));
    for (int k = 0; k < dim; ++k) {
        const double d = wigner_d_twice(tj, tj - 2, 2 * k - tj, kPi / 2.0);
        p[static_cast<std::size_t>(k)] = d * d;
    }
    return m_distribution(j, std::move(p));
}

std::vector<double> w_state_overlap_recurrence(double j)
{
    const int dim = spin_dimension(j);
    std::vector<double> c(static_cast<std::size_t>(dim));
    // Walk down from m = j in log magnitude so 2^{-j} never underflows midway.
    double log_mag = -j * std::log(2.0);
    int sign = 1;
    c[static_cast<std::size_t>(dim - 1)] = std::exp(log_mag);
    for (int k = dim - 2; k >= 0; --k) {
        const double m = -j + k;
        log_mag += 0.5 * std::log((j + m + 1.0) / (j - m));
        sign = -sign;
        c[static_cast<std::size_t>(k)] = sign * std::exp(log_mag);
    }
    return c;
}

double asymptotic_overlap(double j, double m, double mp)
{
    check_spin(j);
    return std::sqrt(2.0 / (kPi * j)) * std::cos((j - m + mp) * kPi / 2.0);
}

void DickeSuperpositionSpec::validate() const
{
    require(n >= 0, "Dicke superposition: n must be nonnegative");
    require(sign == 1 || sign == -1, "Dicke superposition: sign must be + or -");
    require(coefficients.size() >= 2, "Dicke superposition: need at least two coefficients");
    double norm_sq = 0.0;
    cplx sum = 0.0;
    for (const auto& c : coefficients) {
        norm_sq += std::norm(c);
        sum += c;
    }
    require(std::abs(norm_sq - 1.0) <= 1e-12, "Dicke superposition: coefficients are not normalized");
    require(std::abs(sum) <= 1e-12, "Dicke superposition: coefficients must sum to zero");
}

VectorXc dicke_superposition_amplitudes(const DickeSuperpositionSpec& spec, double j)
{
    spec.validate();
    const int dim = spin_dimension(j);
    require(spec.lowest_m() >= -j - 1e-12 && spec.highest_m() <= j + 1e-12,
            "Dicke superposition: m = -n + 2k leaves [-j, j]");
    VectorXc out = VectorXc::Zero(dim);
    for (std::size_t k = 0; k < spec.coefficients.size(); ++k) {
        const double m = -spec.n + 2.0 * static_cast<double>(k);
        const double phase = (spec.sign < 0 && k % 2 == 1) ? -1.0 : 1.0;
        out(offset(j, m)) = phase * spec.coefficients[k];
    }
    return out;
}

SectorDistribution dicke_superposition_distribution(const DickeSuperpositionSpec& spec, double j)
{
    const VectorXc amps = dicke_superposition_amplitudes(spec, j);
    return collective_distribution(amps, j, spec.sign < 0 ? Axis::x : Axis::y);
}

} // namespace gapcert
