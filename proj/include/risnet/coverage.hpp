#pragma once

#include "risnet/model.hpp"
#include "risnet/quadrature.hpp"

#include <functional>
#include <string>
#include <vector>

namespace risnet
{

enum class CoverageMode
{
    Exact, ///< Gamma CCDF of the fading
    Alzer, ///< exponential-sum upper bound
};

CoverageMode parse_mode(const std::string& name);
std::string to_string(CoverageMode mode);

/// P(g l u_m v_m / sigma^2 > gamma) as a function of the link gain l.
class LinkSuccess
{
  public:
    LinkSuccess(const NetworkParams& p, double gamma, CoverageMode mode);

    double operator()(double ell) const;

  private:
    int m_n0;
    double m_scale; // gamma sigma^2 / (u_m v_m)
    CoverageMode m_mode;
};

double snr_coverage_fixed(double gamma,
                          double r_s,
                          const NetworkParams& p,
                          CoverageMode mode = CoverageMode::Exact,
                          const IntegrationSpec& spec = {});

/// Direct-link term in erfc form plus the via-RIS term by quadrature, both
/// with exponential-sum fading weights. Requires alpha = 2.
double snr_coverage_fixed_closed_alpha2(double gamma,
                                        double r_s,
                                        const NetworkParams& p,
                                        const IntegrationSpec& spec = {});

/// Closed form without blockages (lambda_v ignored). Requires alpha = 2.
double snr_coverage_no_blockage_alpha2(double gamma, const NetworkParams& p);

double snr_coverage_cell(double gamma,
                         double f,
                         const NetworkParams& p,
                         CoverageMode mode = CoverageMode::Exact,
                         const IntegrationSpec& spec = {});

/// General user that falls back on the nearest intersection RIS when both
/// the direct and the associated RIS links are blocked.
double snr_coverage_intersection(double gamma,
                                 double r_s,
                                 const NetworkParams& p,
                                 CoverageMode mode = CoverageMode::Exact,
                                 const IntegrationSpec& spec = {});

/// User standing at an intersection, served by the nearest BS on either
/// street, with the overhead intersection RIS as last resort.
double snr_coverage_intersection_user(double gamma,
                                      double r_s,
                                      const NetworkParams& p,
                                      CoverageMode mode = CoverageMode::Exact,
                                      const IntegrationSpec& spec = {});

/// Dispatches on the deployment mode and intersection flag.
double snr_coverage(double gamma,
                    const Deployment& d,
                    const NetworkParams& p,
                    CoverageMode mode = CoverageMode::Exact,
                    const IntegrationSpec& spec = {});

struct CoverageCurve
{
    std::vector<double> gammas; ///< linear thresholds
    std::vector<double> values;
    std::string meta;
};

/// Evaluates `fn` on every threshold, split across `threads` workers.
CoverageCurve make_curve(const std::vector<double>& gammas,
                         const std::function<double(double)>& fn,
                         std::string meta = {},
                         unsigned threads = 1);

} // namespace risnet
