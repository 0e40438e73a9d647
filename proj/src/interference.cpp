#include "risnet/interference.hpp"

#include "risnet/blockage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace risnet
{

std::string
to_string(Regime r)
{
    switch (r)
    {
    case Regime::Ab:
        return "direct";
    case Regime::As:
        return "via_ris";
    case Regime::Ax1:
        return "intersection_far";
    case Regime::Ax2:
        return "intersection_near";
    case Regime::Failure:
        return "failure";
    }
    return "unknown";
}

double
ris_window(double r_sb, const NetworkParams& p)
{
    const double dh = p.h_s - p.h_b;
    return std::sqrt(dh * dh + r_sb * r_sb) * p.theta_s;
}

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1 - E_U[ L_g(t U) ] with U uniform on {u_m, u_s}.
double
gainKernel(int n0, double t, const NetworkParams& p)
{
    return 0.5 * fading_laplace_complement(n0, t * p.u_m) +
           0.5 * fading_laplace_complement(n0, t * p.u_s);
}

// E_U[ L_g(t U) ] for a single interferer.
double
singleInterferer(int n0, double t, const NetworkParams& p)
{
    return 0.5 * fading_laplace(n0, t * p.u_m) + 0.5 * fading_laplace(n0, t * p.u_s);
}

enum class WindowPath
{
    Auto,       ///< closed form when available, quadrature otherwise
    Quadrature, ///< shape-n0 kernel by quadrature
    Rayleigh,   ///< n0 = 1 kernel t / (1 + t)
};

/**
 * Integral over a distance window of the PGFL kernel of BSs received
 * directly with receive gain v. With alpha = 2 and n0 = 1 the kernel is
 * (1/2) sum_U a_U / (x^2 + h_b^2 + a_U), integrated through arctan.
 */
class BsWindow
{
  public:
    BsWindow(const NetworkParams& p,
             double s,
             double v,
             const IntegrationSpec& spec,
             bool enabled,
             WindowPath path = WindowPath::Auto)
        : m_p(p),
          m_pl(p.path_loss()),
          m_s(s),
          m_v(v),
          m_spec(spec),
          m_enabled(enabled && s > 0.0)
    {
        if (path == WindowPath::Auto)
        {
            path = p.n0 == 1 ? WindowPath::Rayleigh : WindowPath::Quadrature;
        }
        m_path = path;
        m_closed = path == WindowPath::Rayleigh && p.alpha == 2.0;
        if (m_closed)
        {
            const double h2 = p.h_b * p.h_b;
            const double gains[2] = {p.u_m, p.u_s};
            for (int i = 0; i < 2; ++i)
            {
                const double a = s * p.K() * gains[i] * v;
                m_scale[i] = std::sqrt(h2 + a);
                m_coef[i] = 0.5 * a / m_scale[i];
            }
        }
    }

    double operator()(double lo, double hi) const
    {
        if (!m_enabled || !(hi > lo))
        {
            return 0.0;
        }
        if (m_closed)
        {
            double total = 0.0;
            for (int i = 0; i < 2; ++i)
            {
                total += m_coef[i] * (std::atan(hi / m_scale[i]) - std::atan(lo / m_scale[i]));
            }
            return total;
        }
        if (m_path == WindowPath::Rayleigh)
        {
            auto kernel = [this](double x) {
                const double t = m_s * m_pl.ell_ub(x) * m_v;
                const double tm = t * m_p.u_m;
                const double ts = t * m_p.u_s;
                return 0.5 * (tm / (1.0 + tm) + ts / (1.0 + ts));
            };
            return integrate(kernel, lo, hi, m_spec);
        }
        auto kernel = [this](double x) {
            return gainKernel(m_p.n0, m_s * m_pl.ell_ub(x) * m_v, m_p);
        };
        return integrate(kernel, lo, hi, m_spec);
    }

  private:
    const NetworkParams& m_p;
    PathLossModel m_pl;
    double m_s;
    double m_v;
    const IntegrationSpec& m_spec;
    bool m_enabled;
    WindowPath m_path = WindowPath::Quadrature;
    bool m_closed = false;
    double m_scale[2] = {1.0, 1.0};
    double m_coef[2] = {0.0, 0.0};
};

// Upper end of the LOS window behind a blockage at distance d.
double
shadowEnd(double d, const NetworkParams& p)
{
    return std::isinf(d) ? kInf : d * p.h_b / p.h_v;
}

// Integral of the PGFL kernel of BSs reflected by a RIS over [lo, hi];
// `gain(x)` is the end-to-end path gain of an interferer at x.
template <class Gain>
double
risWindowIntegral(double s,
                  double lo,
                  double hi,
                  Gain gain,
                  const NetworkParams& p,
                  const IntegrationSpec& spec)
{
    if (!(hi > lo) || !(s > 0.0))
    {
        return 0.0;
    }
    auto kernel = [&](double x) { return gainKernel(p.n0, s * gain(x) * p.v_m, p); };
    return integrate(kernel, lo, hi, spec);
}

// Gain through the serving BS's RIS for a same-street BS at distance x
// beyond the serving BS; the RIS sits r_sb from the serving BS.
struct SameStreetRisGain
{
    PathLossModel pl;
    double r_ub;
    double r_sb;
    int N;

    double operator()(double x) const
    {
        const double elements = static_cast<double>(N - 1);
        return kPi * elements * elements * pl.ell_sb(x - r_ub + r_sb) *
               pl.ell_us(std::abs(r_ub - r_sb));
    }
};

// Gain through the intersection RIS for an adjacent-street BS x from the
// intersection.
struct IntersectionRisGain
{
    PathLossModel pl;
    double r_ux;
    int N;

    double operator()(double x) const { return ell_x(r_ux, x, pl, N); }
};

/**
 * Average of exp(-lambda_b W(lo, max(lo, Y))) over the nearest-blockage
 * distance, expressed as Y = d h_b / h_v and restricted to Y in [y0, y1].
 * Without blockages Y is infinite.
 */
double
shadowAverage(const BsWindow& window,
              double lo,
              double y0,
              double y1,
              const NetworkParams& p,
              const IntegrationSpec& spec)
{
    const double mu = p.lambda_v * p.h_v / p.h_b;
    if (!(mu > 0.0))
    {
        return std::isinf(y1) ? std::exp(-p.lambda_b * window(lo, kInf)) : 0.0;
    }
    if (!(y1 > y0))
    {
        return 0.0;
    }
    double total = 0.0;
    if (y0 < lo)
    {
        total += std::exp(-mu * y0) - std::exp(-mu * std::min(lo, y1));
    }
    const double start = std::max(y0, lo);
    if (y1 > start)
    {
        auto integrand = [&](double y) {
            return mu * std::exp(-mu * y - p.lambda_b * window(lo, y));
        };
        if (std::isinf(y1))
        {
            total += integrate_exp_tail(integrand, start, mu, spec);
        }
        else
        {
            total += integrate(integrand, start, y1, spec);
        }
    }
    return total;
}

void
requireNonNegative(double s)
{
    if (!(s >= 0.0))
    {
        throw std::invalid_argument("Laplace argument s must be non-negative");
    }
}

double
laplaceDirectImpl(double s,
                  const InterferenceContext& ctx,
                  const NetworkParams& p,
                  const IntegrationSpec& spec,
                  WindowPath path)
{
    requireNonNegative(s);
    const double r = ctx.r_ub;
    const BsWindow serving(p, s, p.v_m, spec, true, path);
    const BsWindow far(p, s, p.v_s, spec, true, path);
    const double w1 = serving(r, std::max(r, shadowEnd(ctx.d_1, p)));
    const double w2 = far(r, std::max(r, shadowEnd(ctx.d_2, p)));
    return std::exp(-p.lambda_b * (w1 + w2));
}

} // namespace

double
laplace_direct(double s,
               const InterferenceContext& ctx,
               const NetworkParams& p,
               const IntegrationSpec& spec)
{
    return laplaceDirectImpl(s, ctx, p, spec, WindowPath::Quadrature);
}

double
laplace_direct_rayleigh(double s,
                        const InterferenceContext& ctx,
                        const NetworkParams& p,
                        const IntegrationSpec& spec)
{
    if (p.n0 != 1)
    {
        throw std::invalid_argument("Rayleigh interference transform requires n0 = 1");
    }
    return laplaceDirectImpl(s, ctx, p, spec, WindowPath::Rayleigh);
}

double
laplace_via_ris(double s,
                const InterferenceContext& ctx,
                const NetworkParams& p,
                double r_s,
                const IntegrationSpec& spec,
                InterferenceToggles toggles)
{
    requireNonNegative(s);
    const double r = ctx.r_ub;
    const double v = r < r_s ? p.v_m : p.v_s;
    const BsWindow left(p, s, v, spec, toggles.bs);
    double exponent = left(r, std::max(r, shadowEnd(ctx.d_2, p)));
    if (toggles.via_ris)
    {
        const SameStreetRisGain gain{p.path_loss(), r, r_s, p.N};
        exponent += risWindowIntegral(s, r, r + ris_window(r_s, p), gain, p, spec);
    }
    return std::exp(-p.lambda_b * exponent);
}

double
laplace_cell(double s,
             const InterferenceContext& ctx,
             const NetworkParams& p,
             double f,
             const IntegrationSpec& spec,
             InterferenceToggles toggles)
{
    requireNonNegative(s);
    const double r = ctx.r_ub;
    const double y = ctx.r_bn;
    const double rho = 0.5 * f * y;
    const double v = r < rho ? p.v_m : p.v_s;
    const double z = ris_window(rho, p);
    const auto pl = p.path_loss();
    const SameStreetRisGain gain{pl, r, rho, p.N};

    const double lo = std::max(r, y - r);
    const BsWindow left(p, s, v, spec, toggles.bs);
    double exponent = left(lo, std::max(lo, shadowEnd(ctx.d_2, p)));
    if (toggles.via_ris && z > y)
    {
        exponent += risWindowIntegral(s, r + y, r + z, gain, p, spec);
    }
    const double ppp = std::exp(-p.lambda_b * exponent);

    // The nearest neighbor of the serving BS is a single interferer: on the
    // serving side it can only leak through the RIS; on the far side it is
    // received directly when in LOS.
    const double rightTerm =
        toggles.via_ris && y <= z ? singleInterferer(p.n0, s * gain(r + y) * p.v_m, p) : 1.0;
    if (y < 2.0 * r)
    {
        return ppp * rightTerm;
    }
    const double leftDist = y - r;
    const bool leftLos = leftDist < shadowEnd(ctx.d_2, p);
    const double leftTerm =
        toggles.bs && leftLos ? singleInterferer(p.n0, s * pl.ell_ub(leftDist) * v, p) : 1.0;
    return ppp * 0.5 * (rightTerm + leftTerm);
}

double
laplace_intersection(double s,
                     const InterferenceContext& ctx,
                     const NetworkParams& p,
                     const IntegrationSpec& spec,
                     InterferenceToggles toggles)
{
    requireNonNegative(s);
    if (ctx.regime != Regime::Ax1 && ctx.regime != Regime::Ax2)
    {
        throw std::invalid_argument("laplace_intersection needs an intersection regime");
    }
    const double r = ctx.r_ub;
    // The user beam points away from the serving BS, towards the far side.
    const BsWindow left(p, s, p.v_m, spec, toggles.bs);
    double exponent = left(r, std::max(r, shadowEnd(ctx.d_2, p)));
    if (toggles.via_ris)
    {
        const IntersectionRisGain gain{p.path_loss(), ctx.r_ux, p.N};
        exponent +=
            risWindowIntegral(s, ctx.r_xb, ctx.r_xb + ris_window(ctx.r_xb, p), gain, p, spec);
    }
    return std::exp(-p.lambda_b * exponent);
}

namespace
{

struct SinrSetup
{
    std::vector<AlzerTerm> terms;
    double base; // eta / (u_m v_m)
    double sigma2;
    double mu_b; // blockage rate in BS-shadow units
    double mu_s; // blockage rate for RIS links, per meter
};

SinrSetup
makeSetup(double gamma, const NetworkParams& p)
{
    if (!(gamma > 0.0))
    {
        throw std::invalid_argument("coverage threshold gamma must be positive");
    }
    SinrSetup out;
    out.terms = alzer_weights(p.n0);
    out.base = out.terms.front().eta * gamma / (p.u_m * p.v_m);
    out.sigma2 = p.sigma2();
    out.mu_b = p.lambda_v * p.h_v / p.h_b;
    out.mu_s = p.lambda_v * p.h_v / p.h_s;
    return out;
}

// Direct-link branch at serving distance r, summed over fading terms.
double
directBranch(double r,
             const SinrSetup& st,
             const NetworkParams& p,
             const IntegrationSpec& spec,
             InterferenceToggles toggles)
{
    const double ell = p.path_loss().ell_ub(r);
    double acc = 0.0;
    for (const auto& t : st.terms)
    {
        const double s = t.n * st.base / ell;
        const BsWindow serving(p, s, p.v_m, spec, toggles.bs);
        const BsWindow far(p, s, p.v_s, spec, toggles.bs);
        const double a1 = shadowAverage(serving, r, r, kInf, p, spec);
        if (a1 <= 0.0)
        {
            continue;
        }
        const double a2 = shadowAverage(far, r, 0.0, kInf, p, spec);
        acc += t.weight() * std::exp(-s * st.sigma2) * a1 * a2;
    }
    return acc;
}

double
directPart(const SinrSetup& st,
           const NetworkParams& p,
           const IntegrationSpec& spec,
           InterferenceToggles toggles)
{
    auto integrand = [&](double r) {
        return serving_distance_pdf(r, p) * directBranch(r, st, p, spec, toggles);
    };
    return integrate_exp_tail(integrand, 0.0, 2.0 * p.lambda_b, spec);
}

double
clamp01(double x)
{
    return std::clamp(x, 0.0, 1.0);
}

} // namespace

double
sinr_coverage_fixed(double gamma,
                    double r_s,
                    const NetworkParams& p,
                    const IntegrationSpec& spec,
                    InterferenceToggles toggles)
{
    const SinrSetup st = makeSetup(gamma, p);
    const auto pl = p.path_loss();
    const double z = ris_window(r_s, p);

    auto viaRis = [&](double r) {
        // Probability that d_1 blocks the BS but not the RIS (serving side),
        // and the d_2 range that keeps the RIS visible (far side).
        double weight;
        double y0 = 0.0;
        double v;
        if (r < r_s)
        {
            weight = p_block_direct(r, p);
            y0 = (r_s - r) * p.h_b / p.h_s;
            v = p.v_m;
        }
        else
        {
            weight = std::exp(-st.mu_s * (r - r_s)) - std::exp(-st.mu_b * r);
            v = p.v_s;
        }
        if (!(weight > 0.0))
        {
            return 0.0;
        }
        const double ell = ell_r(r, r_s, pl, p.N);
        const SameStreetRisGain gain{pl, r, r_s, p.N};
        double acc = 0.0;
        for (const auto& t : st.terms)
        {
            const double s = t.n * st.base / ell;
            const BsWindow left(p, s, v, spec, toggles.bs);
            double risTerm = 1.0;
            if (toggles.via_ris)
            {
                risTerm = std::exp(-p.lambda_b * risWindowIntegral(s, r, r + z, gain, p, spec));
            }
            acc += t.weight() * std::exp(-s * st.sigma2) * risTerm *
                   shadowAverage(left, r, y0, kInf, p, spec);
        }
        return serving_distance_pdf(r, p) * weight * acc;
    };
    double via = 0.0;
    if (p.lambda_v > 0.0)
    {
        const double breaks[] = {r_s};
        via = integrate_exp_tail(viaRis, 0.0, 2.0 * p.lambda_b, spec, breaks);
    }
    return clamp01(directPart(st, p, spec, toggles) + via);
}

double
sinr_coverage_cell(double gamma,
                   double f,
                   const NetworkParams& p,
                   const IntegrationSpec& spec,
                   InterferenceToggles toggles)
{
    Deployment::cell(f).validate();
    const SinrSetup st = makeSetup(gamma, p);
    const auto pl = p.path_loss();
    const double dh = p.h_s - p.h_b;
    // Neighbor distance below which the neighbor falls inside the RIS
    // reflection window.
    const double windowCross =
        p.theta_s * dh / std::sqrt(std::max(1e-300, 1.0 - 0.25 * p.theta_s * p.theta_s * f * f));

    auto givenNeighbor = [&](double r, double y) {
        const double rho = 0.5 * f * y;
        double weight;
        double y0 = 0.0;
        double v;
        if (r < rho)
        {
            weight = p_block_direct(r, p);
            y0 = (rho - r) * p.h_b / p.h_s;
            v = p.v_m;
        }
        else
        {
            weight = std::exp(-st.mu_s * (r - rho)) - std::exp(-st.mu_b * r);
            v = p.v_s;
        }
        if (!(weight > 0.0))
        {
            return 0.0;
        }
        const double z = ris_window(rho, p);
        const double ell = ell_r(r, rho, pl, p.N);
        const SameStreetRisGain gain{pl, r, rho, p.N};
        const double lo = std::max(r, y - r);
        const bool neighborSplit = y >= 2.0 * r;
        double acc = 0.0;
        for (const auto& t : st.terms)
        {
            const double s = t.n * st.base / ell;
            double risTerm = 1.0;
            double rightTerm = 1.0;
            if (toggles.via_ris && z > y)
            {
                risTerm =
                    std::exp(-p.lambda_b * risWindowIntegral(s, r + y, r + z, gain, p, spec));
            }
            if (toggles.via_ris && y <= z)
            {
                rightTerm = singleInterferer(p.n0, s * gain(r + y) * p.v_m, p);
            }
            const BsWindow left(p, s, v, spec, toggles.bs);
            double dTerm;
            if (!neighborSplit)
            {
                dTerm = rightTerm * shadowAverage(left, lo, y0, kInf, p, spec);
            }
            else
            {
                // Neighbor on the far side at y - r = lo: in LOS exactly when
                // the far-side window is non-empty.
                const double leftTerm =
                    toggles.bs ? singleInterferer(p.n0, s * pl.ell_ub(y - r) * v, p) : 1.0;
                double below = 0.0;
                if (st.mu_b > 0.0 && y0 < lo)
                {
                    below = std::exp(-st.mu_b * y0) - std::exp(-st.mu_b * lo);
                }
                const double above = shadowAverage(left, lo, std::max(y0, lo), kInf, p, spec);
                dTerm = 0.5 * (rightTerm + 1.0) * below + 0.5 * (rightTerm + leftTerm) * above;
            }
            acc += t.weight() * std::exp(-s * st.sigma2) * risTerm * dTerm;
        }
        return weight * acc;
    };

    auto viaRis = [&](double r) {
        auto inner = [&](double y) { return nn_dist_pdf(y, r, p) * givenNeighbor(r, y); };
        const double breaks[] = {2.0 * r / f, windowCross};
        const double near = integrate(inner, 0.0, 2.0 * r, spec, breaks);
        const double far = integrate_exp_tail(inner, 2.0 * r, 2.0 * p.lambda_b, spec, breaks);
        return serving_distance_pdf(r, p) * (near + far);
    };
    double via = 0.0;
    if (p.lambda_v > 0.0)
    {
        via = integrate_exp_tail(viaRis, 0.0, 2.0 * p.lambda_b, spec);
    }
    return clamp01(directPart(st, p, spec, toggles) + via);
}

double
sinr_coverage_intersection(double gamma,
                           double r_s,
                           const NetworkParams& p,
                           const IntegrationSpec& spec,
                           InterferenceToggles toggles)
{
    const double base = sinr_coverage_fixed(gamma, r_s, p, spec, toggles);
    if (!(p.lambda_v > 0.0))
    {
        return base;
    }
    const SinrSetup st = makeSetup(gamma, p);
    const auto pl = p.path_loss();
    const double losRate = st.mu_s;

    // Coverage through the intersection RIS given (r_ux, r_xb).
    auto given = [&](double r_ux, double r_xb) {
        const double ell = ell_x(r_ux, r_xb, pl, p.N);
        const IntersectionRisGain gain{pl, r_ux, p.N};
        const double y0 = r_ux * p.h_b / p.h_s;
        double acc = 0.0;
        for (const auto& t : st.terms)
        {
            const double s = t.n * st.base / ell;
            double adjacent = 1.0;
            if (toggles.via_ris)
            {
                adjacent = std::exp(
                    -p.lambda_b *
                    risWindowIntegral(s, r_xb, r_xb + ris_window(r_xb, p), gain, p, spec));
            }
            const BsWindow left(p, s, p.v_m, spec, toggles.bs);
            auto overServing = [&](double r) {
                if (r >= r_s)
                {
                    const double blocked = -std::expm1(-losRate * (r - r_s));
                    return serving_distance_pdf(r, p) * blocked *
                           shadowAverage(left, r, y0, kInf, p, spec);
                }
                const double y1 = (r_s - r) * p.h_b / p.h_s;
                if (!(y1 > y0))
                {
                    return 0.0;
                }
                return serving_distance_pdf(r, p) * p_block_direct(r, p) *
                       shadowAverage(left, r, y0, y1, p, spec);
            };
            const double breaks[] = {r_s, r_s - r_ux};
            const double served = integrate_exp_tail(overServing, 0.0, 2.0 * p.lambda_b, spec,
                                                     breaks);
            acc += t.weight() * std::exp(-s * st.sigma2) * adjacent * served;
        }
        return acc;
    };
    auto overIntersection = [&](double r_ux) {
        auto overBs = [&](double r_xb) { return serving_distance_pdf(r_xb, p) * given(r_ux, r_xb); };
        return 2.0 * p.lambda_r * std::exp(-2.0 * p.lambda_r * r_ux) *
               integrate_exp_tail(overBs, 0.0, 2.0 * p.lambda_b, spec);
    };
    const double extra =
        integrate_exp_tail(overIntersection, 0.0, 2.0 * p.lambda_r + losRate, spec);
    return clamp01(base + extra);
}

double
sinr_coverage(double gamma,
              const Deployment& d,
              const NetworkParams& p,
              const IntegrationSpec& spec,
              InterferenceToggles toggles)
{
    if (d.is_fixed())
    {
        return d.with_intersection_ris ? sinr_coverage_intersection(gamma, d.r_s(), p, spec, toggles)
                                       : sinr_coverage_fixed(gamma, d.r_s(), p, spec, toggles);
    }
    if (d.with_intersection_ris)
    {
        throw std::invalid_argument("intersection RISs are only modeled with fixed r_s");
    }
    return sinr_coverage_cell(gamma, d.f(), p, spec, toggles);
}

} // namespace risnet
