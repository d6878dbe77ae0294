#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace gapcert {

using cplx = std::complex<double>;
using Index = std::int64_t;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VectorXr = Vector<double>;
using VectorXc = Vector<cplx>;
using MatrixXr = Matrix<double>;
using MatrixXc = Matrix<cplx>;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad arguments: dimension mismatch, out-of-domain values, malformed configs.
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(what) {}
};

/// All weight of a state falls on one side of a separation point.
class DegenerateSplit : public Error {
public:
    explicit DegenerateSplit(const std::string& what) : Error(what) {}
};

/// An iterative method stopped before reaching its tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double achieved)
        : Error(what), achieved_(achieved) {}
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

inline void require(bool cond, const std::string& msg)
{
    if (!cond) throw InvalidArgument(msg);
}

/// log C(n, k) via lgamma; exact enough for n up to ~1e6.
double log_binomial(double n, double k);

/// C(n, k) as a double, exact for results below 2^53.
double binomial(std::int64_t n, std::int64_t k);

/// Largest state-space dimension the library will allocate.
inline constexpr Index kMaxDimension = Index{1} << 28;

} // namespace gapcert
