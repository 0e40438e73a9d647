#include "oracles.hpp"

#include "risnet/blockage.hpp"
#include "risnet/coverage.hpp"
#include "risnet/simulate.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace risnet;

TEST_SUITE("simulate")
{
    TEST_CASE("point processes")
    {
        Rng rng = trial_rng(1, 0);
        CHECK(sample_ppp(0.0, 100.0, rng).empty());

        // Count over [-L, L] is Poisson(2 lambda L).
        const double density = 0.05;
        const double L = 200.0;
        const int n = 4000;
        double sum = 0.0;
        for (int i = 0; i < n; ++i)
        {
            Rng r = trial_rng(2, i);
            const auto pts = sample_ppp(density, L, r);
            CHECK(std::is_sorted(pts.begin(), pts.end()));
            CHECK((pts.empty() || (pts.front() >= -L && pts.back() <= L)));
            sum += static_cast<double>(pts.size());
        }
        const double mean = 2.0 * density * L;
        CHECK(std::abs(sum / n - mean) < 3.0 * std::sqrt(mean / n));
    }

    TEST_CASE("nearest base station distance")
    {
        NetworkParams p;
        SimConfig cfg;
        const std::vector<double> edges{0, 2, 5, 10, 15, 20, 30, 45, 70, 1e9};
        std::vector<double> counts(edges.size() - 1, 0.0);
        const int n = 20000;
        for (int i = 0; i < n; ++i)
        {
            Rng rng = trial_rng(3, i);
            const auto s = sample_street(p, cfg, rng);
            double r = 1e300;
            for (double x : s.bs_positions)
            {
                r = std::min(r, std::abs(x));
            }
            for (std::size_t k = 0; k + 1 < edges.size(); ++k)
            {
                if (r >= edges[k] && r < edges[k + 1])
                {
                    counts[k] += 1.0;
                }
            }
        }
        double chi2 = 0.0;
        for (std::size_t k = 0; k + 1 < edges.size(); ++k)
        {
            const double prob = std::exp(-2.0 * p.lambda_b * edges[k]) -
                                std::exp(-2.0 * p.lambda_b * edges[k + 1]);
            chi2 += (counts[k] - prob * n) * (counts[k] - prob * n) / (prob * n);
        }
        const boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
        CHECK(chi2 < boost::math::quantile(dist, 0.99));
    }

    TEST_CASE("line of sight follows the shadow rule")
    {
        NetworkParams p; // h_v = 3, h_b = 10, h_s = 50
        StreetRealization s;
        s.blockage_positions = {-3.0, 4.0};
        CHECK(is_los(13.0, p.h_b, s, p)); // reach 3.9
        CHECK_FALSE(is_los(14.0, p.h_b, s, p));
        CHECK(is_los(-10.0, p.h_b, s, p)); // reach 3.0, blockage exactly at the edge
        CHECK_FALSE(is_los(-11.0, p.h_b, s, p));
        CHECK(is_los(60.0, p.h_s, s, p)); // reach 3.6 for the RIS
        s.blockage_positions.clear();
        CHECK(is_los(1e4, p.h_b, s, p));

        // Empirical NLOS rate against 1 - exp(-lambda_v r h_v / h_b).
        p.lambda_v = 0.2;
        SimConfig cfg;
        const int n = 20000;
        int blocked = 0;
        for (int i = 0; i < n; ++i)
        {
            Rng rng = trial_rng(4, i);
            blocked += !is_los(30.0, p.h_b, sample_street(p, cfg, rng), p);
        }
        const double expect = 1.0 - std::exp(-p.lambda_v * 30.0 * p.h_v / p.h_b);
        CHECK(std::abs(static_cast<double>(blocked) / n - expect) <
              3.0 * std::sqrt(expect * (1 - expect) / n));
    }

    TEST_CASE("results do not depend on chunking")
    {
        NetworkParams p;
        p.lambda_v = 0.3;
        SimConfig cfg;
        cfg.trials = 3000;
        cfg.seed = 5;
        const std::vector<double> gammas{1e-6, 1.0};
        const auto one = estimate(p, Deployment::fixed(15.0), Metric::SinrCoverage, gammas, cfg);
        cfg.parallel_chunks = 4;
        const auto four = estimate(p, Deployment::fixed(15.0), Metric::SinrCoverage, gammas, cfg);
        for (std::size_t i = 0; i < gammas.size(); ++i)
        {
            CHECK(one[i].estimate == four[i].estimate);
            CHECK(one[i].half_width_95 == four[i].half_width_95);
        }
    }

    TEST_CASE("confidence interval halves with four times the trials")
    {
        const auto a = make_report(2500, 10000);
        const auto b = make_report(10000, 40000);
        CHECK(a.half_width_95 / b.half_width_95 == doctest::Approx(2.0).epsilon(0.2));
        CHECK(a.half_width_95 == doctest::Approx(1.96 * std::sqrt(0.25 * 0.75 / 10000)).epsilon(1e-3));
        CHECK(parse_metric("intersection-user") == Metric::IntersectionUserSnr);
        CHECK(to_string(Metric::ConnectionFailure) == "failure");
        CHECK_THROWS(parse_metric("rate"));
    }

    TEST_CASE("association frequencies match the analytic partition")
    {
        NetworkParams p;
        p.lambda_v = 0.5;
        SimConfig cfg;
        cfg.trials = 20000;
        cfg.seed = 6;
        for (const auto& d : {Deployment::fixed(10.0), Deployment::cell(0.6)})
        {
            const auto a = association_probs(d, p);
            const auto mc = association_frequencies(p, d, cfg);
            const double n = static_cast<double>(cfg.trials);
            auto within = [&](double prob, double est) {
                return std::abs(prob - est) < 3.0 * std::sqrt(prob * (1 - prob) / n) + 1e-4;
            };
            CHECK(within(a.direct, mc.direct.estimate));
            CHECK(within(a.via_ris, mc.via_ris.estimate));
            CHECK(within(a.failure, mc.failure.estimate));
        }
    }

    TEST_CASE("cell-edge placement failure")
    {
        NetworkParams p;
        p.lambda_v = 0.5;
        SimConfig cfg;
        cfg.trials = 40000;
        cfg.seed = 7;
        const auto mc = estimate(p, Deployment::cell(1.0), Metric::ConnectionFailure, {}, cfg);
        CHECK(std::abs(mc.front().estimate - connection_failure_cell(1.0, p)) < 0.01);
    }

    TEST_CASE("a wider street window changes nothing beyond noise")
    {
        NetworkParams p;
        p.lambda_v = 0.3;
        SimConfig cfg;
        cfg.trials = 20000;
        cfg.seed = 8;
        const Deployment d = Deployment::fixed(15.0);
        const std::vector<double> gammas{1e-6};
        const auto f1 = estimate(p, d, Metric::ConnectionFailure, {}, cfg);
        const auto c1 = estimate(p, d, Metric::SnrCoverage, gammas, cfg);
        cfg.window_half_length = 2.0 * SimConfig{}.window(p);
        const auto f2 = estimate(p, d, Metric::ConnectionFailure, {}, cfg);
        const auto c2 = estimate(p, d, Metric::SnrCoverage, gammas, cfg);
        CHECK(std::abs(f1.front().estimate - f2.front().estimate) <= f1.front().half_width_95);
        CHECK(std::abs(c1.front().estimate - c2.front().estimate) <= c1.front().half_width_95);

        cfg.window_half_length = 10.0;
        CHECK_THROWS(estimate(p, d, Metric::ConnectionFailure, {}, cfg));
    }

    TEST_CASE("intersection selection against the direct-then-RIS baseline")
    {
        NetworkParams clear;
        clear.lambda_v = 0.0;
        SimConfig cfg;
        cfg.trials = 2000;
        cfg.seed = 9;
        const auto none = outage_comparison(clear, Deployment::fixed(20.0), 10.0, 0.0, cfg);
        CHECK(none.selection.estimate == 0.0);
        CHECK(none.baseline.estimate == 0.0);

        // Low threshold so that any LOS link suffices and geometry dominates.
        NetworkParams p;
        p.lambda_b = 0.02;
        p.lambda_v = 0.5;
        cfg.trials = 20000;
        const double gamma = 1e-6;
        const Deployment d = Deployment::fixed(1.0 / p.lambda_b);
        std::vector<OutageReport> sparse;
        for (double d_bi : {0.0, 25.0, 50.0, 100.0})
        {
            sparse.push_back(outage_comparison(p, d, d_bi, gamma, cfg));
            CHECK(sparse.back().selection.estimate <= sparse.back().baseline.estimate + 1e-12);
        }
        // Far intersections stop helping.
        CHECK(sparse[1].selection.estimate < sparse[2].selection.estimate);
        CHECK(sparse[2].selection.estimate < sparse[3].selection.estimate + 0.01);
        CHECK(sparse[3].baseline.estimate - sparse[3].selection.estimate < 0.01);
        CHECK(sparse[0].selection.estimate < sparse[0].baseline.estimate - 0.05);

        // Dense BSs: the intersection adds less.
        NetworkParams dense = p;
        dense.lambda_b = 0.1;
        const auto rd = outage_comparison(dense, Deployment::fixed(1.0 / dense.lambda_b), 25.0, gamma, cfg);
        const double gainSparse = sparse[1].baseline.estimate - sparse[1].selection.estimate;
        const double gainDense = rd.baseline.estimate - rd.selection.estimate;
        CHECK(gainDense < gainSparse);
    }
}
