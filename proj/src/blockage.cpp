#include "risnet/blockage.hpp"

#include <cmath>
#include <sstream>

namespace risnet
{

namespace
{

constexpr double kPoleTolerance = 1e-9;

// expm1(-f d) / d, continuous at d = 0.
double
expm1Ratio(double f, double d)
{
    if (std::abs(d) < kPoleTolerance)
    {
        return -f;
    }
    return std::expm1(-f * d) / d;
}

} // namespace

double
serving_distance_pdf(double r, const NetworkParams& p)
{
    if (r < 0.0)
    {
        return 0.0;
    }
    return 2.0 * p.lambda_b * std::exp(-2.0 * p.lambda_b * r);
}

double
p_block_direct(double r_ub, const NetworkParams& p)
{
    return -std::expm1(-p.lambda_v * r_ub * p.h_v / p.h_b);
}

double
p_joint_block_given_rub(double r_ub, double r_s, const NetworkParams& p)
{
    if (r_ub <= r_s)
    {
        return p_block_direct(r_ub, p) * -std::expm1(-p.lambda_v * (r_s - r_ub) * p.h_v / p.h_s);
    }
    return -std::expm1(-p.lambda_v * (r_ub - r_s) * p.h_v / p.h_s);
}

double
connection_failure_fixed(double r_s, const NetworkParams& p)
{
    if (p.lambda_v == 0.0)
    {
        return 0.0;
    }
    const auto ratios = p.ratios(r_s);
    const double f = ratios.f_s;
    const double rb = ratios.rho_b;
    const double rs = ratios.rho_s;

    const double t1 = std::exp(-f * rs) * expm1Ratio(f, 2.0 + rb - rs);
    const double t2 = std::exp(-2.0 * f) / (rs + 2.0);
    const double t3 = -std::expm1(-f * (rb + 2.0)) / (rb + 2.0);
    const double t4 = -std::exp(-2.0 * f) * expm1Ratio(f, rs - 2.0);
    return 1.0 - 2.0 * (t1 + t2 + t3 + t4);
}

FailureBounds
connection_failure_bounds(double r_s, const NetworkParams& p)
{
    const auto ratios = p.ratios(r_s);
    const double decay = std::exp(-2.0 * ratios.f_s);
    // R_s, not R_b: with R_b the bound exceeds the exact value near r_s = 0.
    const double lower = decay * ratios.rho_s / (ratios.rho_s + 2.0);
    return {lower, -std::expm1(-2.0 * ratios.f_s) + lower};
}

PlacementSolution
optimal_rs(const NetworkParams& p)
{
    if (!(p.lambda_v > 0.0))
    {
        throw PlacementError("optimal RIS distance is undefined without blockages");
    }
    const auto ratios = p.ratios();
    const double rb = ratios.rho_b;
    const double rs = ratios.rho_s;

    PlacementSolution sol;
    sol.a = (rs - 2.0) / rb;
    sol.c = 4.0 * (1.0 - sol.a) / (rs + 2.0);

    // x^a = a x + c divided by a, written so that a = 0 stays regular.
    const double shift = (rb + 4.0) / (rs + 2.0);
    const double a = sol.a;
    auto h = [a, shift](double x) {
        const double lx = std::log(x);
        const double power = std::abs(a * lx) < 1e-12 ? lx : std::expm1(a * lx) / a;
        return power - x + shift;
    };

    double lo = 1e-15;
    double hi = 1.0 - 1e-15;
    sol.bracket_lo = lo;
    sol.bracket_hi = hi;
    double hlo = h(lo);
    const double hhi = h(hi);
    if (!(hlo < 0.0 && hhi > 0.0))
    {
        std::ostringstream os;
        os << "no sign change for placement root on [" << lo << ", " << hi << "]: h(lo)=" << hlo
           << " h(hi)=" << hhi << " (a=" << sol.a << ", c=" << sol.c << ")";
        throw PlacementError(os.str());
    }
    int it = 0;
    while (it < 200 && hi - lo > 1e-16 * hi)
    {
        const double mid = 0.5 * (lo + hi);
        const double hm = h(mid);
        ++it;
        if (hm == 0.0)
        {
            lo = hi = mid;
            break;
        }
        if (hm < 0.0)
        {
            lo = mid;
            hlo = hm;
        }
        else
        {
            hi = mid;
        }
    }
    sol.iterations = it;
    sol.x_root = 0.5 * (lo + hi);
    sol.residual = std::pow(sol.x_root, sol.a) - sol.a * sol.x_root - sol.c;
    sol.r_s_opt = std::log(1.0 / sol.x_root) / (p.lambda_b * rb);
    sol.r_s_approx = std::sqrt(2.0 / (rb * p.lambda_b * p.lambda_b * (rs + 2.0)));
    const double ratio = rs / rb;
    sol.r_s_asymptotic = std::abs(std::log(ratio)) / ((1.0 - ratio) * p.lambda_b * rb);
    return sol;
}

AssociationProbs
association_probs(const Deployment& d, const NetworkParams& p)
{
    const auto ratios = p.ratios();
    AssociationProbs out;
    out.direct = 2.0 / (2.0 + ratios.rho_b);
    out.failure = d.is_fixed() ? connection_failure_fixed(d.r_s(), p)
                               : connection_failure_cell(d.f(), p);
    out.via_ris = ratios.rho_b / (ratios.rho_b + 2.0) - out.failure;
    return out;
}

double
nn_dist_pdf(double y, double r_ub, const NetworkParams& p)
{
    if (y < 0.0)
    {
        return 0.0;
    }
    const double lb = p.lambda_b;
    if (y < 2.0 * r_ub)
    {
        return lb * std::exp(-lb * y);
    }
    return 2.0 * lb * std::exp(-2.0 * lb * (y - r_ub));
}

double
p_joint_block_cell(double r_ub, double r_bn, double f, const NetworkParams& p)
{
    return p_joint_block_given_rub(r_ub, 0.5 * f * r_bn, p);
}

double
connection_failure_cell(double f, const NetworkParams& p)
{
    if (p.lambda_v == 0.0)
    {
        return 0.0;
    }
    const auto ratios = p.ratios();
    const double Rb = ratios.R_b;
    const double Rs = ratios.R_s;
    const double first = (f - 1.0) * (f - 2.0) / (2.0 * (4.0 * Rs + 1.0 - f));
    const double second = f * f * f / (2.0 * (4.0 * Rb + f) * (4.0 * Rs + f));
    const double third = 2.0 * Rs / ((4.0 * Rs + 1.0 - f) * (2.0 * Rs + 1.0));
    return first + second + third;
}

double
intersection_assoc_prob(double r_ub, double r_ux, double r_s, const NetworkParams& p)
{
    const double rate = p.lambda_v * p.h_v / p.h_s;
    const double los = std::exp(-rate * r_ux);
    if (r_ub >= r_s)
    {
        // Associated RIS on the serving side: its blockage and the
        // intersection LOS depend on different blockages.
        return los * -std::expm1(-rate * (r_ub - r_s));
    }
    // Both RISs lie on the far side, so one blockage decides both links:
    // the intersection RIS must be the nearer one.
    const double window = los - std::exp(-rate * (r_s - r_ub));
    return window > 0.0 ? p_block_direct(r_ub, p) * window : 0.0;
}

} // namespace risnet
