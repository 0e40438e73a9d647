#include "risnet/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

namespace risnet
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t
splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Ascending distances of a PPP on (lo, hi] along one direction.
std::vector<double>
sampleSide(double density, double lo, double hi, Rng& rng)
{
    std::vector<double> out;
    if (!(density > 0.0) || !(hi > lo))
    {
        return out;
    }
    std::exponential_distribution<double> gap(density);
    double x = lo + gap(rng);
    while (x <= hi)
    {
        out.push_back(x);
        x += gap(rng);
    }
    return out;
}

// Distance to the first point of a PPP within `limit`, else infinity.
double
nearestPoint(double density, double limit, Rng& rng)
{
    if (!(density > 0.0))
    {
        return kInf;
    }
    const double x = std::exponential_distribution<double>(density)(rng);
    return x <= limit ? x : kInf;
}

double
nearest(const std::vector<double>& ascending)
{
    return ascending.empty() ? kInf : ascending.front();
}

// Points of a realization split into distances per side (0: positive).
struct Sides
{
    std::vector<double> bs[2];
    std::vector<double> blockages[2];
};

void
splitInto(const std::vector<double>& signedPts, std::vector<double> (&out)[2])
{
    const auto mid = std::lower_bound(signedPts.begin(), signedPts.end(), 0.0);
    out[0].assign(mid, signedPts.end());
    out[1].clear();
    for (auto it = std::make_reverse_iterator(mid); it != signedPts.rend(); ++it)
    {
        out[1].push_back(-*it);
    }
}

Sides
split(const StreetRealization& s)
{
    Sides out;
    splitInto(s.bs_positions, out.bs);
    splitInto(s.blockage_positions, out.blockages);
    return out;
}

std::vector<double>
mergeSides(const std::vector<double>& positive, const std::vector<double>& negative)
{
    std::vector<double> out;
    out.reserve(positive.size() + negative.size());
    for (auto it = negative.rbegin(); it != negative.rend(); ++it)
    {
        out.push_back(-*it);
    }
    out.insert(out.end(), positive.begin(), positive.end());
    return out;
}

/// Draws per-link fading and interferer transmit gains.
class LinkDraws
{
  public:
    LinkDraws(const NetworkParams& p, Rng& rng)
        : m_p(p),
          m_rng(rng),
          m_fading(static_cast<double>(p.n0), 1.0 / p.n0)
    {
    }

    double fading() { return m_fading(m_rng); }
    double txGain() { return m_coin(m_rng) ? m_p.u_m : m_p.u_s; }
    /// Received interference from one BS with path gain `ell` and user gain v.
    double interferer(double ell, double v) { return ell * txGain() * v * fading(); }

  private:
    const NetworkParams& m_p;
    Rng& m_rng;
    std::gamma_distribution<double> m_fading;
    std::bernoulli_distribution m_coin{0.5};
};

// Directly received BSs at the given ascending distances that fall short of
// the shadow of a blockage at distance `blockage`.
double
directSum(const std::vector<double>& distances,
          std::size_t first,
          double blockage,
          double v,
          const NetworkParams& p,
          const PathLossModel& pl,
          LinkDraws& draws)
{
    const double reach = std::isinf(blockage) ? kInf : blockage * p.h_b / p.h_v;
    double total = 0.0;
    for (std::size_t i = first; i < distances.size() && distances[i] < reach; ++i)
    {
        total += draws.interferer(pl.ell_ub(distances[i]), v);
    }
    return total;
}

// Same-street BSs reflected by a RIS that sits rho from the serving BS at r.
double
risSum(const std::vector<double>& distances,
       std::size_t first,
       double r,
       double rho,
       const NetworkParams& p,
       const PathLossModel& pl,
       LinkDraws& draws)
{
    const double hi = r + ris_window(rho, p);
    const double elements = static_cast<double>(p.N - 1);
    const double tail = kPi * elements * elements * pl.ell_us(std::abs(r - rho));
    double total = 0.0;
    for (std::size_t i = first; i < distances.size() && distances[i] <= hi; ++i)
    {
        if (distances[i] > r)
        {
            total += draws.interferer(tail * pl.ell_sb(distances[i] - r + rho), p.v_m);
        }
    }
    return total;
}

// Cross-street BSs beyond the serving one, reflected by the intersection RIS.
double
crossSum(const std::vector<double>& distances,
         std::size_t first,
         double r_ux,
         double r_xb,
         const NetworkParams& p,
         const PathLossModel& pl,
         LinkDraws& draws)
{
    const double hi = r_xb + ris_window(r_xb, p);
    double total = 0.0;
    for (std::size_t i = first; i < distances.size() && distances[i] <= hi; ++i)
    {
        if (distances[i] > r_xb)
        {
            total += draws.interferer(ell_x(r_ux, distances[i], pl, p.N), p.v_m);
        }
    }
    return total;
}

bool
losWith(double blockage, double distance, double height, const NetworkParams& p)
{
    return !(blockage < distance * p.h_v / height);
}

double
risOffset(const Deployment& d, double r_bn)
{
    return d.is_fixed() ? d.r_s() : 0.5 * d.f() * r_bn;
}

// Parallel loop over trial indices with per-chunk accumulators merged in
// chunk order.
template <class Acc, class Body>
Acc
runChunks(std::uint64_t trials, unsigned chunks, Acc zero, Body body)
{
    chunks = std::max(1u, chunks);
    if (static_cast<std::uint64_t>(chunks) > trials)
    {
        chunks = static_cast<unsigned>(std::max<std::uint64_t>(1, trials));
    }
    std::vector<Acc> partial(chunks, zero);
    std::vector<std::exception_ptr> errors(chunks);
    auto work = [&](unsigned c) {
        try
        {
            const std::uint64_t begin = trials * c / chunks;
            const std::uint64_t end = trials * (c + 1) / chunks;
            for (std::uint64_t i = begin; i < end; ++i)
            {
                body(i, partial[c]);
            }
        }
        catch (...)
        {
            errors[c] = std::current_exception();
        }
    };
    if (chunks == 1)
    {
        work(0);
    }
    else
    {
        std::vector<std::thread> threads;
        for (unsigned c = 0; c < chunks; ++c)
        {
            threads.emplace_back(work, c);
        }
        for (auto& t : threads)
        {
            t.join();
        }
    }
    for (const auto& e : errors)
    {
        if (e)
        {
            std::rethrow_exception(e);
        }
    }
    Acc total = zero;
    for (const auto& acc : partial)
    {
        for (std::size_t i = 0; i < total.size(); ++i)
        {
            total[i] += acc[i];
        }
    }
    return total;
}

} // namespace

double
SimConfig::window(const NetworkParams& p) const
{
    return window_half_length > 0.0 ? window_half_length : 50.0 / p.lambda_b;
}

void
SimConfig::validate(const NetworkParams& p) const
{
    if (trials < 1)
    {
        throw ConfigError("simulation needs at least one trial");
    }
    if (window(p) < 50.0 / p.lambda_b * (1.0 - 1e-12))
    {
        throw ConfigError("window_half_length must be at least 50 / lambda_b");
    }
    if (parallel_chunks < 1)
    {
        throw ConfigError("parallel_chunks must be at least 1");
    }
}

Rng
trial_rng(std::uint64_t seed, std::uint64_t index)
{
    return Rng(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL)));
}

std::vector<double>
sample_ppp(double density, double half_length, Rng& rng)
{
    // Each side draws from its own substream, so a longer window only
    // appends points.
    Rng right(rng());
    Rng left(rng());
    const auto positive = sampleSide(density, 0.0, half_length, right);
    const auto negative = sampleSide(density, 0.0, half_length, left);
    return mergeSides(positive, negative);
}

StreetRealization
sample_street(const NetworkParams& p, const SimConfig& cfg, Rng& rng)
{
    const double L = cfg.window(p);
    StreetRealization s;
    s.bs_positions = sample_ppp(p.lambda_b, L, rng);
    s.blockage_positions = sample_ppp(p.lambda_v, L, rng);
    return s;
}

bool
is_los(double tx_offset, double tx_height, const StreetRealization& s, const NetworkParams& p)
{
    const double reach = std::abs(tx_offset) * p.h_v / tx_height;
    for (double b : s.blockage_positions)
    {
        const bool sameSide = tx_offset >= 0.0 ? b >= 0.0 : b <= 0.0;
        if (sameSide && std::abs(b) < reach)
        {
            return false;
        }
    }
    return true;
}

bool
TrialOutcome::snr_pass(double gamma, double sigma2) const
{
    return regime != Regime::Failure && signal > gamma * sigma2;
}

bool
TrialOutcome::sinr_pass(double gamma, double sigma2) const
{
    return regime != Regime::Failure && signal > gamma * (sigma2 + interference);
}

TrialOutcome
run_trial(const NetworkParams& p,
          const Deployment& d,
          const StreetRealization& s,
          Rng& rng,
          bool with_interference)
{
    const Sides sd = split(s);
    TrialOutcome out;
    if (sd.bs[0].empty() && sd.bs[1].empty())
    {
        return out;
    }
    const int srv = !sd.bs[0].empty() && (sd.bs[1].empty() || sd.bs[0][0] <= sd.bs[1][0]) ? 0 : 1;
    const auto& near = sd.bs[srv];
    const auto& far = sd.bs[1 - srv];
    const double r = near.front();
    const double d1 = nearest(sd.blockages[srv]);
    const double d2 = nearest(sd.blockages[1 - srv]);
    const auto pl = p.path_loss();
    LinkDraws draws(p, rng);

    if (losWith(d1, r, p.h_b, p))
    {
        out.regime = Regime::Ab;
        out.signal = pl.ell_ub(r) * p.u_m * p.v_m * draws.fading();
        if (with_interference)
        {
            out.interference = directSum(near, 1, d1, p.v_m, p, pl, draws) +
                               directSum(far, 0, d2, p.v_s, p, pl, draws);
        }
        return out;
    }

    double r_bn = kInf;
    if (near.size() > 1)
    {
        r_bn = near[1] - r;
    }
    if (!far.empty())
    {
        r_bn = std::min(r_bn, far.front() + r);
    }
    const double rho = risOffset(d, r_bn);
    const bool risServingSide = r >= rho;
    if (losWith(risServingSide ? d1 : d2, std::abs(r - rho), p.h_s, p))
    {
        out.regime = Regime::As;
        out.signal = ell_r(r, rho, pl, p.N) * p.u_m * p.v_m * draws.fading();
        if (with_interference)
        {
            const double v = risServingSide ? p.v_s : p.v_m;
            out.interference =
                directSum(far, 0, d2, v, p, pl, draws) + risSum(near, 1, r, rho, p, pl, draws);
        }
        return out;
    }

    if (!d.with_intersection_ris)
    {
        return out;
    }
    if (!s.cross)
    {
        throw std::invalid_argument("intersection deployment needs a cross street realization");
    }
    const double r_ux = s.cross->distance;
    if (!losWith(d2, r_ux, p.h_s, p))
    {
        return out;
    }
    Sides cross;
    splitInto(s.cross->bs_positions, cross.bs);
    if (cross.bs[0].empty() && cross.bs[1].empty())
    {
        return out;
    }
    const int side =
        !cross.bs[0].empty() && (cross.bs[1].empty() || cross.bs[0][0] <= cross.bs[1][0]) ? 0 : 1;
    const double r_xb = cross.bs[side].front();
    out.regime = risServingSide ? Regime::Ax1 : Regime::Ax2;
    out.signal = ell_x(r_ux, r_xb, pl, p.N) * p.u_m * p.v_m * draws.fading();
    if (with_interference)
    {
        out.interference = directSum(far, 0, d2, p.v_m, p, pl, draws) +
                           crossSum(cross.bs[side], 1, r_ux, r_xb, p, pl, draws);
    }
    return out;
}

Metric
parse_metric(const std::string& name)
{
    if (name == "failure")
    {
        return Metric::ConnectionFailure;
    }
    if (name == "snr")
    {
        return Metric::SnrCoverage;
    }
    if (name == "sinr")
    {
        return Metric::SinrCoverage;
    }
    if (name == "intersection-user")
    {
        return Metric::IntersectionUserSnr;
    }
    throw std::invalid_argument("unknown metric '" + name +
                                "' (expected failure|snr|sinr|intersection-user)");
}

std::string
to_string(Metric m)
{
    switch (m)
    {
    case Metric::ConnectionFailure:
        return "failure";
    case Metric::SnrCoverage:
        return "snr";
    case Metric::SinrCoverage:
        return "sinr";
    case Metric::IntersectionUserSnr:
        return "intersection-user";
    }
    return "unknown";
}

SimReport
make_report(std::uint64_t successes, std::uint64_t trials)
{
    SimReport r;
    r.trials_used = trials;
    if (trials == 0)
    {
        return r;
    }
    const double n = static_cast<double>(trials);
    r.estimate = static_cast<double>(successes) / n;
    r.half_width_95 = 1.959963984540054 * std::sqrt(r.estimate * (1.0 - r.estimate) / n);
    return r;
}

namespace
{

StreetRealization
sampleFor(const NetworkParams& p, const Deployment& d, const SimConfig& cfg, Rng& rng)
{
    StreetRealization s = sample_street(p, cfg, rng);
    if (d.with_intersection_ris)
    {
        CrossStreet c;
        c.distance = std::exponential_distribution<double>(2.0 * p.lambda_r)(rng);
        c.bs_positions = sample_ppp(p.lambda_b, cfg.window(p), rng);
        s.cross = std::move(c);
    }
    return s;
}

// Received power at a user standing at an intersection of two streets; arms
// 0/1 and 2/3 are the two halves of each street. Zero when no BS exists.
double
intersectionUserSignal(const NetworkParams& p, double r_s, const SimConfig& cfg, Rng& rng)
{
    const double L = cfg.window(p);
    std::vector<double> bs[4];
    double blk[4];
    for (int a = 0; a < 4; ++a)
    {
        Rng bsStream(rng());
        Rng blockageStream(rng());
        bs[a] = sampleSide(p.lambda_b, 0.0, L, bsStream);
        blk[a] = nearest(sampleSide(p.lambda_v, 0.0, L, blockageStream));
    }
    int arm = -1;
    double r = kInf;
    for (int a = 0; a < 4; ++a)
    {
        if (!bs[a].empty() && bs[a].front() < r)
        {
            r = bs[a].front();
            arm = a;
        }
    }
    if (arm < 0)
    {
        return 0.0;
    }
    const auto pl = p.path_loss();
    LinkDraws draws(p, rng);
    const double g = draws.fading() * p.u_m * p.v_m;
    if (losWith(blk[arm], r, p.h_b, p))
    {
        return pl.ell_ub(r) * g;
    }
    const int risArm = r >= r_s ? arm : (arm ^ 1);
    if (losWith(blk[risArm], std::abs(r - r_s), p.h_s, p))
    {
        return ell_r(r, r_s, pl, p.N) * g;
    }
    return ell_x(0.0, r, pl, p.N) * g;
}

} // namespace

std::vector<SimReport>
estimate(const NetworkParams& p,
         const Deployment& d,
         Metric metric,
         const std::vector<double>& gammas,
         const SimConfig& cfg)
{
    p.validate();
    d.validate();
    cfg.validate(p);
    const double sigma2 = p.sigma2();
    const bool failure = metric == Metric::ConnectionFailure;
    if (!failure && gammas.empty())
    {
        throw std::invalid_argument("coverage estimate needs at least one threshold");
    }
    if (metric == Metric::IntersectionUserSnr && !d.is_fixed())
    {
        throw std::invalid_argument("intersection user is only modeled with fixed r_s");
    }
    const std::size_t slots = failure ? 1 : gammas.size();
    auto body = [&](std::uint64_t i, std::vector<std::uint64_t>& acc) {
        Rng rng = trial_rng(cfg.seed, i);
        if (metric == Metric::IntersectionUserSnr)
        {
            const double signal = intersectionUserSignal(p, d.r_s(), cfg, rng);
            for (std::size_t k = 0; k < slots; ++k)
            {
                acc[k] += signal > gammas[k] * sigma2;
            }
            return;
        }
        const StreetRealization s = sampleFor(p, d, cfg, rng);
        const TrialOutcome o = run_trial(p, d, s, rng, metric == Metric::SinrCoverage);
        if (failure)
        {
            acc[0] += o.regime == Regime::Failure;
            return;
        }
        for (std::size_t k = 0; k < slots; ++k)
        {
            acc[k] += metric == Metric::SinrCoverage ? o.sinr_pass(gammas[k], sigma2)
                                                     : o.snr_pass(gammas[k], sigma2);
        }
    };
    const auto counts =
        runChunks(cfg.trials, cfg.parallel_chunks, std::vector<std::uint64_t>(slots, 0), body);
    std::vector<SimReport> out;
    for (auto c : counts)
    {
        out.push_back(make_report(c, cfg.trials));
    }
    return out;
}

AssociationReport
association_frequencies(const NetworkParams& p, const Deployment& d, const SimConfig& cfg)
{
    p.validate();
    d.validate();
    cfg.validate(p);
    auto body = [&](std::uint64_t i, std::vector<std::uint64_t>& acc) {
        Rng rng = trial_rng(cfg.seed, i);
        const StreetRealization s = sampleFor(p, d, cfg, rng);
        const TrialOutcome o = run_trial(p, d, s, rng, false);
        acc[0] += o.regime == Regime::Ab;
        acc[1] += o.regime == Regime::As;
        acc[2] += o.regime == Regime::Failure;
    };
    const auto c = runChunks(cfg.trials, cfg.parallel_chunks, std::vector<std::uint64_t>(3, 0), body);
    return {make_report(c[0], cfg.trials), make_report(c[1], cfg.trials),
            make_report(c[2], cfg.trials)};
}

LaplaceEstimate
empirical_laplace(double s,
                  const InterferenceContext& ctx,
                  const Deployment& d,
                  const NetworkParams& p,
                  std::uint64_t draws,
                  std::uint64_t seed,
                  InterferenceToggles toggles)
{
    if (draws < 2)
    {
        throw std::invalid_argument("empirical_laplace needs at least two draws");
    }
    if (ctx.regime == Regime::Failure)
    {
        throw std::invalid_argument("no interference is defined for a failed link");
    }
    const double L = SimConfig{}.window(p) + ctx.r_ub + ctx.r_bn + ctx.r_xb;
    const double r = ctx.r_ub;
    const auto pl = p.path_loss();
    double sum = 0.0;
    double sumSq = 0.0;
    for (std::uint64_t i = 0; i < draws; ++i)
    {
        Rng rng = trial_rng(seed, i);
        LinkDraws link(p, rng);
        double I = 0.0;
        switch (ctx.regime)
        {
        case Regime::Ab: {
            const auto near = sampleSide(p.lambda_b, r, L, rng);
            const auto far = sampleSide(p.lambda_b, r, L, rng);
            if (toggles.bs)
            {
                I = directSum(near, 0, ctx.d_1, p.v_m, p, pl, link) +
                    directSum(far, 0, ctx.d_2, p.v_s, p, pl, link);
            }
            break;
        }
        case Regime::As: {
            if (d.is_fixed())
            {
                const double rho = d.r_s();
                const auto near = sampleSide(p.lambda_b, r, L, rng);
                const auto far = sampleSide(p.lambda_b, r, L, rng);
                const double v = r >= rho ? p.v_s : p.v_m;
                I = (toggles.bs ? directSum(far, 0, ctx.d_2, v, p, pl, link) : 0.0) +
                    (toggles.via_ris ? risSum(near, 0, r, rho, p, pl, link) : 0.0);
                break;
            }
            // Serving BS with its nearest neighbor exactly r_bn away.
            const double y = ctx.r_bn;
            const double rho = risOffset(d, y);
            auto near = sampleSide(p.lambda_b, r + y, L, rng);
            auto far = sampleSide(p.lambda_b, std::max(r, y - r), L, rng);
            const bool neighborRight =
                y < 2.0 * r || std::bernoulli_distribution(0.5)(rng);
            if (neighborRight)
            {
                near.insert(near.begin(), r + y);
            }
            else
            {
                far.insert(far.begin(), y - r);
            }
            const double v = r >= rho ? p.v_s : p.v_m;
            I = (toggles.bs ? directSum(far, 0, ctx.d_2, v, p, pl, link) : 0.0) +
                (toggles.via_ris ? risSum(near, 0, r, rho, p, pl, link) : 0.0);
            break;
        }
        case Regime::Ax1:
        case Regime::Ax2: {
            const auto far = sampleSide(p.lambda_b, r, L, rng);
            auto cross = sampleSide(p.lambda_b, ctx.r_xb, L, rng);
            I = (toggles.bs ? directSum(far, 0, ctx.d_2, p.v_m, p, pl, link) : 0.0) +
                (toggles.via_ris ? crossSum(cross, 0, ctx.r_ux, ctx.r_xb, p, pl, link) : 0.0);
            break;
        }
        case Regime::Failure:
            break;
        }
        const double v = std::exp(-s * I);
        sum += v;
        sumSq += v * v;
    }
    const double n = static_cast<double>(draws);
    LaplaceEstimate out;
    out.mean = sum / n;
    const double var = std::max(0.0, (sumSq / n - out.mean * out.mean) * n / (n - 1.0));
    out.std_error = std::sqrt(var / n);
    return out;
}

OutageReport
outage_comparison(const NetworkParams& p,
                  const Deployment& d,
                  double d_bi,
                  double gamma,
                  const SimConfig& cfg)
{
    p.validate();
    d.validate();
    cfg.validate(p);
    if (!(d_bi >= 0.0))
    {
        throw std::invalid_argument("d_bi must be non-negative");
    }
    const double L = cfg.window(p);
    const double sigma2 = p.sigma2();
    const auto pl = p.path_loss();
    auto body = [&](std::uint64_t i, std::vector<std::uint64_t>& acc) {
        Rng rng = trial_rng(cfg.seed, i);
        // Coordinates along the street centered on the serving BS; the
        // intersection and the user lie on the negative side.
        // Only nearest points matter here, so they are drawn directly.
        const double r_bn = std::min(nearestPoint(2.0 * p.lambda_b, L, rng), L);
        const double t = std::uniform_real_distribution<double>(0.0, 0.5 * r_bn)(rng);
        const double rho = risOffset(d, r_bn);
        // Nearest blockage on each side of the user; side 0 faces the BS.
        const double blk[2] = {nearestPoint(p.lambda_v, L, rng), nearestPoint(p.lambda_v, L, rng)};
        const double r_xb = nearestPoint(2.0 * p.lambda_b, L, rng);
        const double g = std::gamma_distribution<double>(p.n0, 1.0 / p.n0)(rng);

        auto visible = [&](double offset, double height) {
            return losWith(blk[offset >= 0.0 ? 0 : 1], std::abs(offset), height, p);
        };
        const bool directOk = visible(t, p.h_b);
        const bool risOk = visible(t - rho, p.h_s);
        const bool crossOk = std::isfinite(r_xb) && visible(t - d_bi, p.h_s);
        const double direct = directOk ? pl.ell_ub(t) : 0.0;
        const double ris = risOk ? ell_r(t, rho, pl, p.N) : 0.0;
        const double viaCross = crossOk ? ell_x(std::abs(t - d_bi), r_xb, pl, p.N) : 0.0;

        const double baseline = directOk ? direct : ris;
        const double selected = std::max({direct, ris, viaCross});
        auto out = [&](double ell) {
            if (!(ell > 0.0))
            {
                return true;
            }
            return gamma > 0.0 && !(ell * p.u_m * p.v_m * g > gamma * sigma2);
        };
        acc[0] += out(selected);
        acc[1] += out(baseline);
    };
    const auto c = runChunks(cfg.trials, cfg.parallel_chunks, std::vector<std::uint64_t>(2, 0), body);
    return {make_report(c[0], cfg.trials), make_report(c[1], cfg.trials)};
}

} // namespace risnet
