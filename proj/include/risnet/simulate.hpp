#pragma once

#include "risnet/interference.hpp"
#include "risnet/model.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace risnet
{

struct SimConfig
{
    std::uint64_t trials = 100000;
    /// Street truncation L; 0 picks 50 / lambda_b.
    double window_half_length = 0.0;
    std::uint64_t seed = 1;
    unsigned parallel_chunks = 1;

    /// Window actually used for `p`.
    double window(const NetworkParams& p) const;
    void validate(const NetworkParams& p) const;
};

/// Street crossing at the nearest intersection on the far side of the
/// serving BS. Links from its BSs to the intersection RIS are always LOS, so
/// its blockages are not sampled.
struct CrossStreet
{
    double distance = 0.0;            ///< user to the intersection, ~ Exp(2 lambda_r)
    std::vector<double> bs_positions; ///< signed, from the intersection
};

/// Points of one realization, as sorted signed offsets from the user.
struct StreetRealization
{
    std::vector<double> bs_positions;
    std::vector<double> blockage_positions;
    std::optional<CrossStreet> cross;
};

using Rng = std::mt19937_64;

/// Independent stream for trial `index`; identical for any chunking.
Rng trial_rng(std::uint64_t seed, std::uint64_t index);

/// Sorted signed points of a PPP with `density` on [-half_length, half_length].
std::vector<double> sample_ppp(double density, double half_length, Rng& rng);

StreetRealization sample_street(const NetworkParams& p, const SimConfig& cfg, Rng& rng);

/// True iff no blockage lies strictly between the user and
/// |tx_offset| h_v / tx_height on the transmitter's side.
bool is_los(double tx_offset, double tx_height, const StreetRealization& s, const NetworkParams& p);

struct TrialOutcome
{
    Regime regime = Regime::Failure;
    double signal = 0.0;       ///< received power over p_t, fading included
    double interference = 0.0; ///< same units; 0 unless requested

    bool snr_pass(double gamma, double sigma2) const;
    bool sinr_pass(double gamma, double sigma2) const;
};

/**
 * Association decision tree for the user at the origin: direct link, else
 * the serving BS's RIS, else (intersection deployments) the RIS at the
 * nearest intersection on the far side. For intersection deployments the
 * realization must carry a cross street.
 */
TrialOutcome run_trial(const NetworkParams& p,
                       const Deployment& d,
                       const StreetRealization& s,
                       Rng& rng,
                       bool with_interference);

enum class Metric
{
    ConnectionFailure,
    SnrCoverage,
    SinrCoverage,
    IntersectionUserSnr, ///< user at an intersection of two streets
};

Metric parse_metric(const std::string& name);
std::string to_string(Metric m);

struct SimReport
{
    double estimate = 0.0;
    double half_width_95 = 0.0;
    std::uint64_t trials_used = 0;
};

SimReport make_report(std::uint64_t successes, std::uint64_t trials);

/// One report per gamma (linear), or a single report for ConnectionFailure.
std::vector<SimReport> estimate(const NetworkParams& p,
                                const Deployment& d,
                                Metric metric,
                                const std::vector<double>& gammas,
                                const SimConfig& cfg);

/// Association frequencies of the direct, via-RIS and failure regimes.
struct AssociationReport
{
    SimReport direct;
    SimReport via_ris;
    SimReport failure;
};

AssociationReport association_frequencies(const NetworkParams& p,
                                          const Deployment& d,
                                          const SimConfig& cfg);

struct LaplaceEstimate
{
    double mean = 0.0;
    double std_error = 0.0;
};

/**
 * Monte Carlo E[exp(-s I)] for the interference geometry fixed by `ctx`:
 * blockages at d_1 and -d_2 and interfering BSs drawn from the PPP
 * conditioned on the context. Uses the same interference routine as
 * run_trial.
 */
LaplaceEstimate empirical_laplace(double s,
                                  const InterferenceContext& ctx,
                                  const Deployment& d,
                                  const NetworkParams& p,
                                  std::uint64_t draws,
                                  std::uint64_t seed,
                                  InterferenceToggles toggles = {});

struct OutageReport
{
    SimReport selection; ///< best of direct, associated RIS and intersection RIS
    SimReport baseline;  ///< direct, else associated RIS
};

/**
 * Outage of a user placed uniformly on [0, r_bn / 2] from its serving BS
 * towards an intersection d_bi away from that BS. A link is out when no
 * candidate is in LOS or, for gamma > 0, when its SNR falls below gamma.
 */
OutageReport outage_comparison(const NetworkParams& p,
                               const Deployment& d,
                               double d_bi,
                               double gamma,
                               const SimConfig& cfg);

} // namespace risnet
