#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace risnet
{

struct IntegrationSpec
{
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    /// Maximum number of bisections applied to any initial segment.
    int max_depth = 48;
    /// Envelope tail mass below which semi-infinite ranges are cut off.
    double truncation_epsilon = 1e-10;

    void validate() const;

    static IntegrationSpec precise() { return {1e-12, 1e-15, 60, 1e-14}; }
    static IntegrationSpec standard() { return {1e-6, 1e-10, 40, 1e-10}; }
    static IntegrationSpec coarse() { return {1e-3, 1e-7, 30, 1e-7}; }
};

/// Thrown when an adaptive rule hits max_depth before meeting its tolerance.
class QuadratureError : public std::runtime_error
{
  public:
    QuadratureError(const std::string& what, double best, double err)
        : std::runtime_error(what),
          best_estimate(best),
          error_estimate(err)
    {
    }

    double best_estimate;
    double error_estimate;
};

struct QuadResult
{
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
};

namespace detail
{

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment
{
    double a;
    double b;
    double value;
    double error;
    double abs_value;
    int depth;
};

template <class F>
Segment
kronrod15(F& f, double a, double b, int depth)
{
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    double resabs = std::abs(resk);
    std::array<double, 7> f1{};
    std::array<double, 7> f2{};
    for (int j = 0; j < 7; ++j)
    {
        const double dx = half * kXgk[j];
        f1[j] = f(center - dx);
        f2[j] = f(center + dx);
        const double sum = f1[j] + f2[j];
        resk += kWgk[j] * sum;
        resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1)
        {
            resg += kWg[j / 2] * sum;
        }
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j)
    {
        resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
    }
    const double scale = std::abs(half);
    resasc *= scale;
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
    {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    const double absval = resabs * scale;
    const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * absval;
    if (absval > std::numeric_limits<double>::min() / roundoff)
    {
        err = std::max(roundoff, err);
    }
    return {a, b, resk * half, err, absval, depth};
}

inline bool
errorLess(const Segment& lhs, const Segment& rhs)
{
    return lhs.error < rhs.error;
}

// Budget that stops noise-dominated integrands from splitting forever.
inline constexpr int kMaxEvaluations = 2'000'000;

template <class F>
QuadResult
adaptiveFinite(F& f,
               double a,
               double b,
               const IntegrationSpec& spec,
               std::span<const double> breakpoints)
{
    if (!(b > a))
    {
        return {};
    }

    std::vector<double> nodes{a};
    for (double x : breakpoints)
    {
        if (x > a && x < b)
        {
            nodes.push_back(x);
        }
    }
    nodes.push_back(b);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    std::vector<detail::Segment> heap;
    heap.reserve(64);
    double total = 0.0;
    double totalErr = 0.0;
    int evals = 0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    {
        heap.push_back(detail::kronrod15(f, nodes[i], nodes[i + 1], 0));
        evals += 15;
        total += heap.back().value;
        totalErr += heap.back().error;
    }
    std::make_heap(heap.begin(), heap.end(), detail::errorLess);

    while (totalErr > std::max(spec.abs_tol, spec.rel_tol * std::abs(total)))
    {
        std::pop_heap(heap.begin(), heap.end(), detail::errorLess);
        const detail::Segment worst = heap.back();
        heap.pop_back();
        if (worst.depth >= spec.max_depth || evals > kMaxEvaluations)
        {
            throw QuadratureError("adaptive quadrature did not converge", total, totalErr);
        }
        const double mid = 0.5 * (worst.a + worst.b);
        const auto left = detail::kronrod15(f, worst.a, mid, worst.depth + 1);
        const auto right = detail::kronrod15(f, mid, worst.b, worst.depth + 1);
        evals += 30;
        total += left.value + right.value - worst.value;
        totalErr += left.error + right.error - worst.error;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), detail::errorLess);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), detail::errorLess);
        if (totalErr < 0.0)
        {
            // Accumulated cancellation; recompute from the segments.
            totalErr = 0.0;
            for (const auto& s : heap)
            {
                totalErr += s.error;
            }
        }
    }
    return {total, totalErr, evals};
}

} // namespace detail

/**
 * Globally adaptive Gauss-Kronrod (7/15) quadrature on [a, b]. Finite
 * `breakpoints` strictly inside (a, b) split the initial partition, which
 * matters for piecewise integrands. An infinite `b` is mapped onto [0, 1).
 */
template <class F>
QuadResult
integrate_detailed(F&& f,
                   double a,
                   double b,
                   const IntegrationSpec& spec,
                   std::span<const double> breakpoints = {})
{
    if (std::isinf(b) && b > 0.0)
    {
        auto mapped = [&f, a](double t) {
            const double u = 1.0 - t;
            return u > 0.0 ? f(a + t / u) / (u * u) : 0.0;
        };
        std::vector<double> tbreaks;
        for (double x : breakpoints)
        {
            if (x > a && std::isfinite(x))
            {
                tbreaks.push_back((x - a) / (1.0 + x - a));
            }
        }
        return detail::adaptiveFinite(mapped, 0.0, 1.0, spec, tbreaks);
    }
    return detail::adaptiveFinite(f, a, b, spec, breakpoints);
}

template <class F>
double
integrate(F&& f,
          double a,
          double b,
          const IntegrationSpec& spec,
          std::span<const double> breakpoints = {})
{
    return integrate_detailed(f, a, b, spec, breakpoints).value;
}

/// Upper limit at which an Exp(rate) envelope starting at `a` has tail mass
/// spec.truncation_epsilon.
inline double
exp_tail_cutoff(double a, double rate, const IntegrationSpec& spec)
{
    return a + std::log(1.0 / spec.truncation_epsilon) / rate;
}

/// Integral over [a, inf) of an integrand dominated by exp(-rate (x - a)),
/// truncated where that envelope's tail drops below truncation_epsilon.
template <class F>
double
integrate_exp_tail(F&& f,
                   double a,
                   double rate,
                   const IntegrationSpec& spec,
                   std::span<const double> breakpoints = {})
{
    if (!(rate > 0.0) || !std::isfinite(rate))
    {
        throw std::invalid_argument("integrate_exp_tail needs a positive finite rate");
    }
    return integrate(f, a, exp_tail_cutoff(a, rate, spec), spec, breakpoints);
}

/// F_n(x) = P(X > x) for X ~ Gamma(n, 1).
double gamma_ccdf(int n, double x);

/// P(g > x) for unit-mean Gamma fading with integer shape n0.
inline double
fading_ccdf(int n0, double x)
{
    return gamma_ccdf(n0, n0 * x);
}

/// Laplace transform E[exp(-t g)] of unit-mean Gamma fading with shape n0.
inline double
fading_laplace(int n0, double t)
{
    return std::pow(1.0 + t / n0, -static_cast<double>(n0));
}

/// 1 - fading_laplace(n0, t) without cancellation for small t.
inline double
fading_laplace_complement(int n0, double t)
{
    return -std::expm1(-n0 * std::log1p(t / n0));
}

struct AlzerTerm
{
    int n;           ///< exponent multiplier
    int sign;        ///< (-1)^(n+1)
    double binomial; ///< C(n0, n)
    double eta;      ///< n0 (n0!)^(-1/n0)

    double weight() const { return sign * binomial; }
};

std::vector<AlzerTerm> alzer_weights(int n0);

/// sum_n (-1)^(n+1) C(n0,n) exp(-n eta x): upper bound on fading_ccdf(n0, x).
double alzer_sum(int n0, double x);

double binomial(int n, int k);
double factorial(int n);

/// Scaled complementary error function exp(z^2) erfc(z).
double erfcx(double z);

} // namespace risnet
