#pragma once

#include "risnet/model.hpp"

#include <stdexcept>
#include <string>

namespace risnet
{

/// Density of the horizontal distance to the nearest BS on the user's street.
double serving_distance_pdf(double r, const NetworkParams& p);

/// Probability that the user-BS link at horizontal distance r_ub is blocked.
double p_block_direct(double r_ub, const NetworkParams& p);

/// Probability that both the direct link and the link to the BS's RIS,
/// placed r_s from the BS towards the user, are blocked.
double p_joint_block_given_rub(double r_ub, double r_s, const NetworkParams& p);

/// Connection failure probability averaged over the serving distance, for
/// RISs at a fixed distance r_s from their BS.
double connection_failure_fixed(double r_s, const NetworkParams& p);

struct FailureBounds
{
    double lower = 0.0;
    double upper = 0.0;
};

/// Bracket from splitting the serving distance at r_s: users whose BS lies
/// beyond the RIS fail iff the RIS is blocked, which gives
/// e^{-2 f_s} / (1 + 2 R_s); users with a closer BS add at most 1 - e^{-2 f_s}.
FailureBounds connection_failure_bounds(double r_s, const NetworkParams& p);

/// Thrown by optimal_rs when its root bracket shows no sign change.
class PlacementError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

struct PlacementSolution
{
    double r_s_opt = 0.0;
    double x_root = 0.0;
    double r_s_approx = 0.0;
    /// Large-blockage-density limit |ln a'| / ((1 - a') lambda_b rho_b),
    /// a' = rho_s / rho_b. Diagnostic only.
    double r_s_asymptotic = 0.0;
    double a = 0.0;
    double c = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

/// Failure-minimizing RIS distance. Requires lambda_v > 0.
PlacementSolution optimal_rs(const NetworkParams& p);

struct AssociationProbs
{
    double direct = 0.0;  ///< P(A_b)
    double via_ris = 0.0; ///< P(A_s)
    double failure = 0.0;
};

AssociationProbs association_probs(const Deployment& d, const NetworkParams& p);

/// Density of the distance from the serving BS to its nearest neighbor BS,
/// given the user-BS distance r_ub.
double nn_dist_pdf(double y, double r_ub, const NetworkParams& p);

/// Joint blockage probability when the RIS sits at f r_bn / 2 from its BS.
double p_joint_block_cell(double r_ub, double r_bn, double f, const NetworkParams& p);

double connection_failure_cell(double f, const NetworkParams& p);

/// Probability that the user falls back on the nearest intersection RIS,
/// r_ux away on the side opposite the serving BS.
double intersection_assoc_prob(double r_ub, double r_ux, double r_s, const NetworkParams& p);

} // namespace risnet
