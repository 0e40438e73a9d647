#include "risnet/coverage.hpp"

#include "risnet/blockage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace risnet
{

CoverageMode
parse_mode(const std::string& name)
{
    if (name == "exact")
    {
        return CoverageMode::Exact;
    }
    if (name == "alzer")
    {
        return CoverageMode::Alzer;
    }
    throw std::invalid_argument("unknown coverage mode '" + name + "' (expected exact|alzer)");
}

std::string
to_string(CoverageMode mode)
{
    return mode == CoverageMode::Exact ? "exact" : "alzer";
}

LinkSuccess::LinkSuccess(const NetworkParams& p, double gamma, CoverageMode mode)
    : m_n0(p.n0),
      m_scale(gamma * p.sigma2() / (p.u_m * p.v_m)),
      m_mode(mode)
{
}

double
LinkSuccess::operator()(double ell) const
{
    const double x = m_scale / ell;
    return m_mode == CoverageMode::Exact ? fading_ccdf(m_n0, x) : alzer_sum(m_n0, x);
}

namespace
{

double
clamp01(double x)
{
    return std::clamp(x, 0.0, 1.0);
}

void
requirePositiveGamma(double gamma)
{
    if (!(gamma > 0.0))
    {
        throw std::invalid_argument("coverage threshold gamma must be positive");
    }
}

void
requireAlpha2(const NetworkParams& p)
{
    if (p.alpha != 2.0)
    {
        throw std::invalid_argument("closed-form coverage requires alpha = 2");
    }
}

// E over the serving distance of the direct-link term (1 - p_b) S(l_ub).
double
directTerm(const LinkSuccess& ok, const NetworkParams& p, const IntegrationSpec& spec)
{
    const auto pl = p.path_loss();
    auto integrand = [&](double r) {
        return serving_distance_pdf(r, p) * (1.0 - p_block_direct(r, p)) * ok(pl.ell_ub(r));
    };
    return integrate_exp_tail(integrand, 0.0, 2.0 * p.lambda_b, spec);
}

// E over the serving distance of (p_b - p_joint) S(l_r) for a fixed r_s.
template <class Success>
double
viaRisTermFixed(const Success& ok, double r_s, const NetworkParams& p, const IntegrationSpec& spec)
{
    const auto pl = p.path_loss();
    auto integrand = [&](double r) {
        const double weight = p_block_direct(r, p) - p_joint_block_given_rub(r, r_s, p);
        if (weight <= 0.0)
        {
            return 0.0;
        }
        return serving_distance_pdf(r, p) * weight * ok(ell_r(r, r_s, pl, p.N));
    };
    const double breaks[] = {r_s};
    return integrate_exp_tail(integrand, 0.0, 2.0 * p.lambda_b, spec, breaks);
}

} // namespace

double
snr_coverage_fixed(double gamma,
                   double r_s,
                   const NetworkParams& p,
                   CoverageMode mode,
                   const IntegrationSpec& spec)
{
    requirePositiveGamma(gamma);
    const LinkSuccess ok(p, gamma, mode);
    return clamp01(directTerm(ok, p, spec) + viaRisTermFixed(ok, r_s, p, spec));
}

double
snr_coverage_fixed_closed_alpha2(double gamma,
                                 double r_s,
                                 const NetworkParams& p,
                                 const IntegrationSpec& spec)
{
    requirePositiveGamma(gamma);
    requireAlpha2(p);
    const double gammaPrime =
        alzer_weights(p.n0).front().eta * gamma * p.sigma2() / (p.u_m * p.v_m);
    const double lambdaEff = p.lambda_b * (1.0 + 0.5 * p.ratios().rho_b);
    const double K = p.K();
    double total = 0.0;
    for (const auto& term : alzer_weights(p.n0))
    {
        const double c = term.n * gammaPrime / K;
        const double direct = p.lambda_b * std::sqrt(kPi / c) * std::exp(-c * p.h_b * p.h_b) *
                              erfcx(lambdaEff / std::sqrt(c));
        const double ng = term.n * gammaPrime;
        auto success = [ng](double ell) { return std::exp(-ng / ell); };
        total += term.weight() * (direct + viaRisTermFixed(success, r_s, p, spec));
    }
    return clamp01(total);
}

double
snr_coverage_no_blockage_alpha2(double gamma, const NetworkParams& p)
{
    requirePositiveGamma(gamma);
    requireAlpha2(p);
    const double gammaPrime =
        alzer_weights(p.n0).front().eta * gamma * p.sigma2() / (p.u_m * p.v_m);
    const double K = p.K();
    double total = 0.0;
    for (const auto& term : alzer_weights(p.n0))
    {
        const double c = term.n * gammaPrime / K;
        total += term.weight() * p.lambda_b * std::sqrt(kPi / c) * std::exp(-c * p.h_b * p.h_b) *
                 erfcx(p.lambda_b / std::sqrt(c));
    }
    return clamp01(total);
}

double
snr_coverage_cell(double gamma,
                  double f,
                  const NetworkParams& p,
                  CoverageMode mode,
                  const IntegrationSpec& spec)
{
    requirePositiveGamma(gamma);
    Deployment::cell(f).validate();
    const LinkSuccess ok(p, gamma, mode);
    const auto pl = p.path_loss();

    auto viaRis = [&](double r) {
        const double pb = p_block_direct(r, p);
        if (pb <= 0.0)
        {
            return 0.0;
        }
        auto inner = [&](double y) {
            const double rho = 0.5 * f * y;
            const double weight = pb - p_joint_block_given_rub(r, rho, p);
            if (weight <= 0.0)
            {
                return 0.0;
            }
            return nn_dist_pdf(y, r, p) * weight * ok(ell_r(r, rho, pl, p.N));
        };
        const double breaks[] = {2.0 * r / f};
        const double near = integrate(inner, 0.0, 2.0 * r, spec, breaks);
        const double far = integrate_exp_tail(inner, 2.0 * r, 2.0 * p.lambda_b, spec, breaks);
        return serving_distance_pdf(r, p) * (near + far);
    };
    const double via = integrate_exp_tail(viaRis, 0.0, 2.0 * p.lambda_b, spec);
    return clamp01(directTerm(ok, p, spec) + via);
}

double
snr_coverage_intersection(double gamma,
                          double r_s,
                          const NetworkParams& p,
                          CoverageMode mode,
                          const IntegrationSpec& spec)
{
    requirePositiveGamma(gamma);
    const LinkSuccess ok(p, gamma, mode);
    const auto pl = p.path_loss();
    const double base = directTerm(ok, p, spec) + viaRisTermFixed(ok, r_s, p, spec);

    const double losRate = p.lambda_v * p.h_v / p.h_s;
    if (!(losRate > 0.0))
    {
        return clamp01(base);
    }
    // Fallback probability averaged over the serving distance, given r_ux.
    auto fallback = [&](double r_ux) {
        auto integrand = [&](double r) {
            return serving_distance_pdf(r, p) * intersection_assoc_prob(r, r_ux, r_s, p);
        };
        const double breaks[] = {r_s, r_s - r_ux};
        return integrate_exp_tail(integrand, 0.0, 2.0 * p.lambda_b, spec, breaks);
    };
    auto overIntersection = [&](double r_ux) {
        auto overBs = [&](double r_xb) {
            return serving_distance_pdf(r_xb, p) * ok(ell_x(r_ux, r_xb, pl, p.N));
        };
        const double inner = integrate_exp_tail(overBs, 0.0, 2.0 * p.lambda_b, spec);
        return 2.0 * p.lambda_r * std::exp(-2.0 * p.lambda_r * r_ux) * fallback(r_ux) * inner;
    };
    const double extra =
        integrate_exp_tail(overIntersection, 0.0, 2.0 * p.lambda_r + losRate, spec);
    return clamp01(base + extra);
}

double
snr_coverage_intersection_user(double gamma,
                               double r_s,
                               const NetworkParams& p,
                               CoverageMode mode,
                               const IntegrationSpec& spec)
{
    requirePositiveGamma(gamma);
    const LinkSuccess ok(p, gamma, mode);
    const auto pl = p.path_loss();
    auto integrand = [&](double r) {
        const double pb = p_block_direct(r, p);
        const double pj = p_joint_block_given_rub(r, r_s, p);
        double value = (1.0 - pb) * ok(pl.ell_ub(r));
        if (pb - pj > 0.0)
        {
            value += (pb - pj) * ok(ell_r(r, r_s, pl, p.N));
        }
        if (pj > 0.0)
        {
            value += pj * ok(ell_x(0.0, r, pl, p.N));
        }
        return 4.0 * p.lambda_b * std::exp(-4.0 * p.lambda_b * r) * value;
    };
    const double breaks[] = {r_s};
    return clamp01(integrate_exp_tail(integrand, 0.0, 4.0 * p.lambda_b, spec, breaks));
}

double
snr_coverage(double gamma,
             const Deployment& d,
             const NetworkParams& p,
             CoverageMode mode,
             const IntegrationSpec& spec)
{
    if (d.is_fixed())
    {
        return d.with_intersection_ris ? snr_coverage_intersection(gamma, d.r_s(), p, mode, spec)
                                       : snr_coverage_fixed(gamma, d.r_s(), p, mode, spec);
    }
    if (d.with_intersection_ris)
    {
        throw std::invalid_argument("intersection RISs are only modeled with fixed r_s");
    }
    return snr_coverage_cell(gamma, d.f(), p, mode, spec);
}

CoverageCurve
make_curve(const std::vector<double>& gammas,
           const std::function<double(double)>& fn,
           std::string meta,
           unsigned threads)
{
    CoverageCurve curve;
    curve.gammas = gammas;
    curve.values.assign(gammas.size(), 0.0);
    curve.meta = std::move(meta);
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(gammas.size())));
    if (threads <= 1)
    {
        for (std::size_t i = 0; i < gammas.size(); ++i)
        {
            curve.values[i] = fn(gammas[i]);
        }
        return curve;
    }
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> workers;
    for (unsigned t = 0; t < threads; ++t)
    {
        workers.emplace_back([&, t] {
            try
            {
                for (std::size_t i = t; i < gammas.size(); i += threads)
                {
                    curve.values[i] = fn(gammas[i]);
                }
            }
            catch (...)
            {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& w : workers)
    {
        w.join();
    }
    for (const auto& e : errors)
    {
        if (e)
        {
            std::rethrow_exception(e);
        }
    }
    return curve;
}

} // namespace risnet
