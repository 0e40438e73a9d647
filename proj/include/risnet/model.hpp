#pragma once

#include <stdexcept>
#include <string>
#include <variant>

namespace risnet
{

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;

/// Raised when a configuration violates a model invariant.
class ConfigError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

struct BlockageRatios
{
    double rho_b = 0.0; ///< lambda_v h_v / (lambda_b h_b)
    double rho_s = 0.0; ///< lambda_v h_v / (lambda_b h_s)
    double R_b = 0.0;   ///< 1 / rho_b, +inf without blockages
    double R_s = 0.0;   ///< 1 / rho_s, +inf without blockages
    double f_s = 0.0;   ///< lambda_b r_s
};

/**
 * Power-law path gain l(d) = K d^-alpha evaluated for the three link types
 * of a street deployment. All arguments are horizontal distances; the
 * vertical offsets h_b, h_s and h_s - h_b are added internally.
 */
class PathLossModel
{
  public:
    PathLossModel(double K, double alpha, double h_b, double h_s);

    double K() const { return m_K; }
    double alpha() const { return m_alpha; }

    double ell(double d) const;
    /// user <-> BS
    double ell_ub(double r) const { return fromSquared(r * r + m_hb2); }
    /// user <-> RIS
    double ell_us(double r) const { return fromSquared(r * r + m_hs2); }
    /// RIS <-> BS
    double ell_sb(double r) const { return fromSquared(r * r + m_dh2); }

  private:
    double fromSquared(double d2) const;

    double m_K;
    double m_alpha;
    double m_hb2;
    double m_hs2;
    double m_dh2;
};

/**
 * Every scalar of the street network model, in linear SI units. Densities
 * are per meter of street, gains are linear, powers are watts.
 *
 * Defaults reproduce the numerical setup of the reference evaluation:
 * 28 GHz carrier, 1 GHz bandwidth, 20 dBm transmit power, -174 dBm/Hz noise
 * with a 10 dB noise figure, 100-element RISs, u_m v_m = 4 and
 * u_s v_s = 0.77 split evenly between transmitter and receiver.
 */
struct NetworkParams
{
    double lambda_b = 0.05;
    double lambda_v = 0.1;
    double lambda_r = 0.1;
    double h_b = 10.0;
    double h_s = 50.0;
    double h_v = 3.0;
    int n0 = 1;
    int N = 100;
    double u_m = 2.0;
    double u_s = 0.8774964387392122;
    double v_m = 2.0;
    double v_s = 0.8774964387392122;
    double p_t = 0.1;
    double noise_psd = 3.9810717055349565e-21; // -174 dBm/Hz in W/Hz
    double bandwidth = 1e9;
    double noise_figure = 10.0;
    double f_c = 28e9;
    double alpha = 2.0;
    double theta_s = 0.01;

    /// Noise power normalized by the transmit power.
    double sigma2() const { return noise_psd * bandwidth * noise_figure / p_t; }
    double wavelength() const { return kSpeedOfLight / f_c; }
    /// (lambda / 4 pi)^2
    double K() const;
    PathLossModel path_loss() const { return {K(), alpha, h_b, h_s}; }
    BlockageRatios ratios(double r_s = 0.0) const;

    /// Throws ConfigError on the first violated invariant.
    void validate() const;

    bool operator==(const NetworkParams&) const = default;
};

enum class PowerUnit
{
    dBm,
    Watt,
};

enum class RatioUnit
{
    dB,
    Linear,
};

/// Configuration as written by a user: powers and the noise figure may be
/// logarithmic. normalize() maps it onto NetworkParams.
struct RawConfig
{
    double lambda_b = 0.05;
    double lambda_v = 0.1;
    double lambda_r = 0.1;
    double h_b = 10.0;
    double h_s = 50.0;
    double h_v = 3.0;
    int n0 = 1;
    int N = 100;
    double u_m = 2.0;
    double u_s = 0.8774964387392122;
    double v_m = 2.0;
    double v_s = 0.8774964387392122;
    double p_t = 20.0;
    PowerUnit p_t_unit = PowerUnit::dBm;
    double noise_psd = -174.0; ///< per Hz
    PowerUnit noise_psd_unit = PowerUnit::dBm;
    double bandwidth = 1e9;
    double noise_figure = 10.0;
    RatioUnit noise_figure_unit = RatioUnit::dB;
    double f_c = 28e9;
    double alpha = 2.0;
    double theta_s = 0.01;
};

double dbm_to_watt(double dbm);
double db_to_linear(double db);
double linear_to_db(double x);

NetworkParams normalize(const RawConfig& raw);
/// Linear-unit RawConfig describing the same network; normalize() maps it
/// back to exactly `params`.
RawConfig to_raw(const NetworkParams& params);

struct FixedDistance
{
    double r_s = 20.0;
};

struct CellFraction
{
    double f = 1.0;
};

struct Deployment
{
    std::variant<FixedDistance, CellFraction> mode = FixedDistance{};
    bool with_intersection_ris = false;

    static Deployment fixed(double r_s, bool intersection = false);
    static Deployment cell(double f, bool intersection = false);

    bool is_fixed() const { return std::holds_alternative<FixedDistance>(mode); }
    double r_s() const;
    double f() const;
    void validate() const;
    std::string describe() const;
};

/// End-to-end gain of the BS -> RIS -> user path for the RIS coupled to
/// the serving BS: pi (N-1)^2 l_sb(r_s) l_us(|r_ub - r_s|).
double ell_r(double r_ub, double r_s, const PathLossModel& pl, int N);

/// End-to-end gain through an intersection-mounted RIS: the user is r_ux
/// from the intersection and the BS is r_xb from it along the crossing
/// street.
double ell_x(double r_ux, double r_xb, const PathLossModel& pl, int N);

} // namespace risnet
