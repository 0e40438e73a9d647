#include "risnet/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace risnet
{

PathLossModel::PathLossModel(double K, double alpha, double h_b, double h_s)
    : m_K(K),
      m_alpha(alpha),
      m_hb2(h_b * h_b),
      m_hs2(h_s * h_s),
      m_dh2((h_s - h_b) * (h_s - h_b))
{
}

double
PathLossModel::ell(double d) const
{
    return m_K * std::pow(d, -m_alpha);
}

double
PathLossModel::fromSquared(double d2) const
{
    if (m_alpha == 2.0)
    {
        return m_K / d2;
    }
    return m_K * std::pow(d2, -0.5 * m_alpha);
}

double
NetworkParams::K() const
{
    const double ratio = wavelength() / (4.0 * kPi);
    return ratio * ratio;
}

BlockageRatios
NetworkParams::ratios(double r_s) const
{
    BlockageRatios out;
    out.rho_b = lambda_v * h_v / (lambda_b * h_b);
    out.rho_s = lambda_v * h_v / (lambda_b * h_s);
    const double inf = std::numeric_limits<double>::infinity();
    out.R_b = out.rho_b > 0.0 ? 1.0 / out.rho_b : inf;
    out.R_s = out.rho_s > 0.0 ? 1.0 / out.rho_s : inf;
    out.f_s = lambda_b * r_s;
    return out;
}

namespace
{

void
require(bool ok, const std::string& what)
{
    if (!ok)
    {
        throw ConfigError(what);
    }
}

bool
positiveFinite(double x)
{
    return std::isfinite(x) && x > 0.0;
}

} // namespace

void
NetworkParams::validate() const
{
    require(positiveFinite(lambda_b), "lambda_b must be positive");
    require(std::isfinite(lambda_v) && lambda_v >= 0.0, "lambda_v must be non-negative");
    require(positiveFinite(lambda_r), "lambda_r must be positive");
    require(positiveFinite(h_b), "h_b must be positive");
    require(positiveFinite(h_s), "h_s must be positive");
    require(positiveFinite(h_v), "h_v must be positive");
    require(h_s > h_b, "h_s must be greater than h_b");
    require(n0 >= 1, "n0 must be a positive integer");
    require(N >= 2, "N must be at least 2");
    require(positiveFinite(u_s) && std::isfinite(u_m) && u_m >= u_s, "require u_m >= u_s > 0");
    require(positiveFinite(v_s) && std::isfinite(v_m) && v_m >= v_s, "require v_m >= v_s > 0");
    require(positiveFinite(p_t), "p_t must be positive");
    require(positiveFinite(noise_psd), "noise_psd must be positive");
    require(positiveFinite(bandwidth), "bandwidth must be positive");
    require(positiveFinite(noise_figure), "noise_figure must be positive");
    require(positiveFinite(f_c), "f_c must be positive");
    require(positiveFinite(alpha), "alpha must be positive");
    require(std::isfinite(theta_s) && theta_s >= 0.0, "theta_s must be non-negative");
    require(positiveFinite(sigma2()), "normalized noise power must be positive");
}

double
dbm_to_watt(double dbm)
{
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

double
db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

double
linear_to_db(double x)
{
    return 10.0 * std::log10(x);
}

NetworkParams
normalize(const RawConfig& raw)
{
    for (double x : {raw.p_t, raw.noise_psd, raw.noise_figure})
    {
        require(std::isfinite(x), "power and noise fields must be finite");
    }

    NetworkParams p;
    p.lambda_b = raw.lambda_b;
    p.lambda_v = raw.lambda_v;
    p.lambda_r = raw.lambda_r;
    p.h_b = raw.h_b;
    p.h_s = raw.h_s;
    p.h_v = raw.h_v;
    p.n0 = raw.n0;
    p.N = raw.N;
    p.u_m = raw.u_m;
    p.u_s = raw.u_s;
    p.v_m = raw.v_m;
    p.v_s = raw.v_s;
    p.p_t = raw.p_t_unit == PowerUnit::dBm ? dbm_to_watt(raw.p_t) : raw.p_t;
    p.noise_psd =
        raw.noise_psd_unit == PowerUnit::dBm ? dbm_to_watt(raw.noise_psd) : raw.noise_psd;
    p.bandwidth = raw.bandwidth;
    p.noise_figure = raw.noise_figure_unit == RatioUnit::dB ? db_to_linear(raw.noise_figure)
                                                            : raw.noise_figure;
    p.f_c = raw.f_c;
    p.alpha = raw.alpha;
    p.theta_s = raw.theta_s;
    p.validate();
    return p;
}

RawConfig
to_raw(const NetworkParams& params)
{
    RawConfig raw;
    raw.lambda_b = params.lambda_b;
    raw.lambda_v = params.lambda_v;
    raw.lambda_r = params.lambda_r;
    raw.h_b = params.h_b;
    raw.h_s = params.h_s;
    raw.h_v = params.h_v;
    raw.n0 = params.n0;
    raw.N = params.N;
    raw.u_m = params.u_m;
    raw.u_s = params.u_s;
    raw.v_m = params.v_m;
    raw.v_s = params.v_s;
    raw.p_t = params.p_t;
    raw.p_t_unit = PowerUnit::Watt;
    raw.noise_psd = params.noise_psd;
    raw.noise_psd_unit = PowerUnit::Watt;
    raw.bandwidth = params.bandwidth;
    raw.noise_figure = params.noise_figure;
    raw.noise_figure_unit = RatioUnit::Linear;
    raw.f_c = params.f_c;
    raw.alpha = params.alpha;
    raw.theta_s = params.theta_s;
    return raw;
}

Deployment
Deployment::fixed(double r_s, bool intersection)
{
    Deployment d;
    d.mode = FixedDistance{r_s};
    d.with_intersection_ris = intersection;
    return d;
}

Deployment
Deployment::cell(double f, bool intersection)
{
    Deployment d;
    d.mode = CellFraction{f};
    d.with_intersection_ris = intersection;
    return d;
}

double
Deployment::r_s() const
{
    if (const auto* fixed = std::get_if<FixedDistance>(&mode))
    {
        return fixed->r_s;
    }
    throw ConfigError("deployment is cell-fraction; r_s is not fixed");
}

double
Deployment::f() const
{
    if (const auto* cell = std::get_if<CellFraction>(&mode))
    {
        return cell->f;
    }
    throw ConfigError("deployment is fixed-distance; no cell fraction");
}

void
Deployment::validate() const
{
    if (is_fixed())
    {
        const double rs = r_s();
        require(std::isfinite(rs) && rs >= 0.0, "r_s must be non-negative");
    }
    else
    {
        const double frac = f();
        require(frac > 0.0 && frac <= 1.0, "f must lie in (0, 1]");
    }
}

std::string
Deployment::describe() const
{
    std::ostringstream os;
    if (is_fixed())
    {
        os << "fixed(r_s=" << r_s() << ")";
    }
    else
    {
        os << "cell(f=" << f() << ")";
    }
    if (with_intersection_ris)
    {
        os << "+intersection";
    }
    return os.str();
}

double
ell_r(double r_ub, double r_s, const PathLossModel& pl, int N)
{
    const double elements = static_cast<double>(N - 1);
    return kPi * elements * elements * pl.ell_sb(r_s) * pl.ell_us(std::abs(r_ub - r_s));
}

double
ell_x(double r_ux, double r_xb, const PathLossModel& pl, int N)
{
    const double elements = static_cast<double>(N - 1);
    return kPi * elements * elements * pl.ell_sb(r_xb) * pl.ell_us(r_ux);
}

} // namespace risnet
