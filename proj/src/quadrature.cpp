#include "risnet/quadrature.hpp"

#include <cmath>

namespace risnet
{

void
IntegrationSpec::validate() const
{
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
    {
        throw std::invalid_argument("integration tolerances must be positive");
    }
    if (max_depth < 1)
    {
        throw std::invalid_argument("max_depth must be at least 1");
    }
    if (!(truncation_epsilon > 0.0 && truncation_epsilon < 1.0))
    {
        throw std::invalid_argument("truncation_epsilon must lie in (0, 1)");
    }
}

double
gamma_ccdf(int n, double x)
{
    if (n < 1)
    {
        throw std::invalid_argument("gamma_ccdf needs n >= 1");
    }
    if (x <= 0.0)
    {
        return 1.0;
    }
    double term = 1.0;
    double sum = 1.0;
    for (int q = 1; q < n; ++q)
    {
        term *= x / q;
        sum += term;
    }
    return std::min(1.0, std::exp(-x) * sum);
}

double
factorial(int n)
{
    double out = 1.0;
    for (int k = 2; k <= n; ++k)
    {
        out *= k;
    }
    return out;
}

double
binomial(int n, int k)
{
    if (k < 0 || k > n)
    {
        return 0.0;
    }
    k = std::min(k, n - k);
    double out = 1.0;
    for (int i = 1; i <= k; ++i)
    {
        out = out * (n - k + i) / i;
    }
    return std::round(out);
}

std::vector<AlzerTerm>
alzer_weights(int n0)
{
    if (n0 < 1)
    {
        throw std::invalid_argument("alzer_weights needs n0 >= 1");
    }
    const double eta = n0 * std::pow(factorial(n0), -1.0 / n0);
    std::vector<AlzerTerm> terms;
    terms.reserve(n0);
    for (int n = 1; n <= n0; ++n)
    {
        terms.push_back({n, n % 2 == 1 ? 1 : -1, binomial(n0, n), eta});
    }
    return terms;
}

double
alzer_sum(int n0, double x)
{
    double sum = 0.0;
    for (const auto& t : alzer_weights(n0))
    {
        sum += t.weight() * std::exp(-t.n * t.eta * x);
    }
    return sum;
}

double
erfcx(double z)
{
    if (z < 0.0)
    {
        return 2.0 * std::exp(z * z) - erfcx(-z);
    }
    if (z < 25.0)
    {
        return std::exp(z * z) * std::erfc(z);
    }
    // Asymptotic series; the fourth term is below 1e-11 relative here.
    const double inv2 = 1.0 / (z * z);
    const double series = 1.0 - 0.5 * inv2 + 0.75 * inv2 * inv2 - 1.875 * inv2 * inv2 * inv2;
    return series / (z * std::sqrt(3.14159265358979323846));
}

} // namespace risnet
