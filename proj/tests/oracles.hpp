#pragma once

// Reference computations written independently of the library: geometry
// straight from the blockage shadow rule, integrals through Boost.Math.

#include "risnet/model.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace oracle
{

using risnet::NetworkParams;

// GK61's error estimate is pessimistic: 1e-10 already yields ~1e-15 on the
// smooth integrands here, while tighter requests subdivide exponentially.
template <class F>
double
integrate(F f, double a, double b)
{
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-10);
}

// Probability that no blockage falls in a segment of length `len`.
inline double
voidProb(double len, const NetworkParams& p)
{
    return std::exp(-p.lambda_v * len);
}

/// P(BS at r and a RIS at signed offset r - rho are both blocked).
inline double
jointBlocked(double r, double rho, const NetworkParams& p)
{
    const double bsShadow = r * p.h_v / p.h_b;
    const double risShadow = std::abs(r - rho) * p.h_v / p.h_s;
    if (r >= rho)
    {
        // Same side: the RIS shadow is shorter, so its blockage also blocks the BS.
        return 1.0 - voidProb(risShadow, p);
    }
    return (1.0 - voidProb(bsShadow, p)) * (1.0 - voidProb(risShadow, p));
}

/// Connection failure for a fixed r_s by direct integration over the
/// serving distance.
inline double
failureFixed(double r_s, const NetworkParams& p)
{
    auto f = [&](double r) {
        return 2.0 * p.lambda_b * std::exp(-2.0 * p.lambda_b * r) * jointBlocked(r, r_s, p);
    };
    const double inf = std::numeric_limits<double>::infinity();
    if (r_s <= 0.0)
    {
        return integrate(f, 0.0, inf);
    }
    return integrate(f, 0.0, r_s) + integrate(f, r_s, inf);
}

/// Nearest-neighbor distance density of the serving BS given r.
inline double
neighborPdf(double y, double r, const NetworkParams& p)
{
    if (y < 2.0 * r)
    {
        return p.lambda_b * std::exp(-p.lambda_b * y);
    }
    return 2.0 * p.lambda_b * std::exp(-2.0 * p.lambda_b * (y - r));
}

/// Connection failure for the cell-fraction deployment by nested
/// integration.
inline double
failureCell(double f, const NetworkParams& p)
{
    const double inf = std::numeric_limits<double>::infinity();
    auto outer = [&](double r) {
        auto inner = [&](double y) { return neighborPdf(y, r, p) * jointBlocked(r, 0.5 * f * y, p); };
        const double knee = 2.0 * r / f;
        double v = integrate(inner, 0.0, 2.0 * r);
        if (knee > 2.0 * r)
        {
            v += integrate(inner, 2.0 * r, knee) + integrate(inner, knee, inf);
        }
        else
        {
            v += integrate(inner, 2.0 * r, inf);
        }
        return 2.0 * p.lambda_b * std::exp(-2.0 * p.lambda_b * r) * v;
    };
    return integrate(outer, 0.0, inf);
}

/// Argmin index of `values`.
inline std::size_t
argmin(const std::vector<double>& values)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
    {
        if (values[i] < values[best])
        {
            best = i;
        }
    }
    return best;
}

inline std::vector<double>
logGrid(double lo, double hi, int n)
{
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i)
    {
        out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    }
    return out;
}

/// Small deterministic generator for property tests.
class Gen
{
  public:
    explicit Gen(std::uint64_t seed) : m_rng(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(m_rng); }
    double logUniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(m_rng); }
    bool coin() { return uniform(0.0, 1.0) < 0.5; }

    /// Valid network with densities and heights spread over realistic ranges.
    NetworkParams network()
    {
        NetworkParams p;
        p.lambda_b = logUniform(0.01, 0.3);
        p.lambda_v = logUniform(0.02, 1.0);
        p.lambda_r = logUniform(0.01, 0.3);
        p.h_b = uniform(5.0, 20.0);
        p.h_s = p.h_b + uniform(5.0, 60.0);
        p.h_v = uniform(1.0, 4.0);
        return p;
    }

  private:
    std::mt19937_64 m_rng;
};

} // namespace oracle
