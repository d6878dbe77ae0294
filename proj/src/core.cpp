#include "gapcert/core.hpp"

#include <algorithm>
#include <cmath>

namespace gapcert {

double log_binomial(double n, double k)
{
    require(k >= 0.0 && k <= n, "log_binomial: need 0 <= k <= n");
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double binomial(std::int64_t n, std::int64_t k)
{
    require(k >= 0 && k <= n, "binomial: need 0 <= k <= n");
    k = std::min(k, n - k);
    double result = 1.0;
    for (std::int64_t i = 1; i <= k; ++i) result = result * static_cast<double>(n - k + i) / static_cast<double>(i);
    return std::round(result);
}

} // namespace gapcert
