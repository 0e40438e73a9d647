#pragma once

#include "risnet/coverage.hpp"
#include "risnet/model.hpp"
#include "risnet/quadrature.hpp"

#include <limits>
#include <string>

namespace risnet
{

/// Serving regime of the typical user.
enum class Regime
{
    Ab,      ///< direct LOS link to the nearest BS
    As,      ///< via the RIS associated with the nearest BS
    Ax1,     ///< via the intersection RIS, associated RIS between user and BS
    Ax2,     ///< via the intersection RIS, associated RIS behind the user
    Failure, ///< no usable link
};

std::string to_string(Regime r);

/**
 * Geometry that the interference conditions on. The serving BS is on the
 * positive side at r_ub; d_1 and d_2 are the distances to the nearest
 * blockage on the serving side and on the opposite side (infinite when
 * there is none).
 */
struct InterferenceContext
{
    static constexpr double kNone = std::numeric_limits<double>::infinity();

    double r_ub = 0.0;
    double d_1 = kNone;
    double d_2 = kNone;
    double r_bn = 0.0; ///< cell mode: serving BS to its nearest neighbor
    double r_ux = 0.0; ///< intersection mode: user to the intersection
    double r_xb = 0.0; ///< intersection mode: intersection to its nearest BS
    Regime regime = Regime::Ab;
};

/// Switches used to isolate interference contributions.
struct InterferenceToggles
{
    bool bs = true;      ///< BSs received directly
    bool via_ris = true; ///< BSs reflected by a RIS towards the user

    static InterferenceToggles none() { return {false, false}; }
};

/// Reflection window length around a RIS that sits r_sb horizontally from
/// its BS.
double ris_window(double r_sb, const NetworkParams& p);

/// Laplace transform of direct-link interference, evaluated by quadrature
/// of the shape-n0 kernel.
double laplace_direct(double s,
                      const InterferenceContext& ctx,
                      const NetworkParams& p,
                      const IntegrationSpec& spec = IntegrationSpec::precise());

/// Same transform through the n0 = 1 kernel s l U v / (1 + s l U v); closed
/// form when alpha = 2. Requires n0 = 1.
double laplace_direct_rayleigh(double s,
                               const InterferenceContext& ctx,
                               const NetworkParams& p,
                               const IntegrationSpec& spec = IntegrationSpec::precise());

double laplace_via_ris(double s,
                       const InterferenceContext& ctx,
                       const NetworkParams& p,
                       double r_s,
                       const IntegrationSpec& spec = IntegrationSpec::precise(),
                       InterferenceToggles toggles = {});

double laplace_cell(double s,
                    const InterferenceContext& ctx,
                    const NetworkParams& p,
                    double f,
                    const IntegrationSpec& spec = IntegrationSpec::precise(),
                    InterferenceToggles toggles = {});

double laplace_intersection(double s,
                            const InterferenceContext& ctx,
                            const NetworkParams& p,
                            const IntegrationSpec& spec = IntegrationSpec::precise(),
                            InterferenceToggles toggles = {});

/// SINR coverage with fixed r_s. Fading enters through exponential-sum
/// weights, exact for n0 = 1.
double sinr_coverage_fixed(double gamma,
                           double r_s,
                           const NetworkParams& p,
                           const IntegrationSpec& spec = IntegrationSpec::standard(),
                           InterferenceToggles toggles = {});

double sinr_coverage_cell(double gamma,
                          double f,
                          const NetworkParams& p,
                          const IntegrationSpec& spec = IntegrationSpec::standard(),
                          InterferenceToggles toggles = {});

/// Fixed-r_s SINR coverage plus the intersection-RIS fallback.
double sinr_coverage_intersection(double gamma,
                                  double r_s,
                                  const NetworkParams& p,
                                  const IntegrationSpec& spec = IntegrationSpec::coarse(),
                                  InterferenceToggles toggles = {});

double sinr_coverage(double gamma,
                     const Deployment& d,
                     const NetworkParams& p,
                     const IntegrationSpec& spec = IntegrationSpec::standard(),
                     InterferenceToggles toggles = {});

} // namespace risnet
