#include "oracles.hpp"

#include "risnet/blockage.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace risnet;

namespace
{

std::vector<NetworkParams>
parameterSets()
{
    std::vector<NetworkParams> out;
    for (auto [lb, lv, hs] : {std::tuple{0.05, 0.1, 50.0}, std::tuple{0.02, 0.5, 30.0},
                              std::tuple{0.1, 1.0, 20.0}, std::tuple{0.2, 0.05, 80.0},
                              std::tuple{0.05, 0.5, 50.0}})
    {
        NetworkParams p;
        p.lambda_b = lb;
        p.lambda_v = lv;
        p.h_s = hs;
        out.push_back(p);
    }
    return out;
}

} // namespace

TEST_SUITE("blockage")
{
    TEST_CASE("direct link blockage")
    {
        NetworkParams p;
        CHECK(p_block_direct(0.0, p) == 0.0);
        CHECK(p_block_direct(20.0, p) ==
              doctest::Approx(1.0 - std::exp(-p.lambda_v * 20.0 * p.h_v / p.h_b)).epsilon(1e-14));
        p.lambda_v = 0.0;
        CHECK(p_block_direct(50.0, p) == 0.0);
    }

    TEST_CASE("closed-form failure matches integration over the serving distance")
    {
        for (const auto& p : parameterSets())
        {
            for (const double r_s : oracle::logGrid(0.01 / p.lambda_b, 20.0 / p.lambda_b, 20))
            {
                CHECK(std::abs(connection_failure_fixed(r_s, p) - oracle::failureFixed(r_s, p)) <=
                      1e-10);
            }
        }
    }

    TEST_CASE("failure stays finite where the closed form has removable poles")
    {
        // 2 + rho_b - rho_s = 0 cannot happen for h_s > h_b, but rho_s = 2 can.
        NetworkParams p;
        p.h_v = 2.0 * p.lambda_b * p.h_s / p.lambda_v;
        CHECK(p.ratios().rho_s == doctest::Approx(2.0).epsilon(1e-14));
        for (double r_s : {1.0, 10.0, 40.0})
        {
            const double v = connection_failure_fixed(r_s, p);
            CHECK(std::abs(v - oracle::failureFixed(r_s, p)) <= 1e-10);
        }
    }

    TEST_CASE("failure bounds sandwich the exact value")
    {
        oracle::Gen gen(21);
        for (int i = 0; i < 200; ++i)
        {
            const NetworkParams p = gen.network();
            const double r_s = gen.logUniform(1e-3, 100.0) / p.lambda_b;
            const auto b = connection_failure_bounds(r_s, p);
            const double v = connection_failure_fixed(r_s, p);
            CHECK(b.lower <= v + 1e-14);
            CHECK(v <= b.upper + 1e-14);
        }
        NetworkParams p;
        const double r_s = 0.05 / p.lambda_b;
        CHECK(connection_failure_fixed(r_s, p) - connection_failure_bounds(r_s, p).lower < 0.02);

        // The bracket closes on the exact value at r_s = 0.
        const auto b0 = connection_failure_bounds(0.0, p);
        CHECK(b0.lower == doctest::Approx(1.0 / (1.0 + 2.0 * p.ratios().R_s)).epsilon(1e-14));
        CHECK(b0.upper == doctest::Approx(b0.lower).epsilon(1e-14));
        CHECK(connection_failure_fixed(0.0, p) == doctest::Approx(b0.lower).epsilon(1e-12));
    }

    TEST_CASE("limits")
    {
        NetworkParams p;
        p.lambda_v = 0.0;
        CHECK(connection_failure_fixed(20.0, p) == 0.0);
        CHECK(connection_failure_cell(0.5, p) == 0.0);

        oracle::Gen gen(22);
        for (int i = 0; i < 50; ++i)
        {
            const NetworkParams q = gen.network();
            const double target = 1.0 / (2.0 * q.ratios().R_s + 1.0);
            CHECK(connection_failure_fixed(1e-12, q) == doctest::Approx(target).epsilon(1e-9));
            CHECK(std::abs(connection_failure_cell(1e-9, q) - target) < 1e-6);
        }
    }

    TEST_CASE("cell-fraction failure matches nested integration")
    {
        for (const auto& p : parameterSets())
        {
            for (double f : {0.1, 0.5, 0.8, 1.0})
            {
                CHECK(std::abs(connection_failure_cell(f, p) - oracle::failureCell(f, p)) < 1e-8);
            }
        }
    }

    TEST_CASE("optimal distance matches the failure grid")
    {
        for (double lv : {0.05, 0.1, 0.5, 1.0})
        {
            NetworkParams p;
            p.lambda_v = lv;
            const auto sol = optimal_rs(p);
            const auto grid = oracle::logGrid(1e-3 / p.lambda_b, 1e2 / p.lambda_b, 2000);
            std::vector<double> fail;
            for (double x : grid)
            {
                fail.push_back(oracle::failureFixed(x, p));
            }
            const std::size_t i = oracle::argmin(fail);
            REQUIRE(i > 0);
            REQUIRE(i + 1 < grid.size());
            CHECK(sol.r_s_opt >= grid[i - 1]);
            CHECK(sol.r_s_opt <= grid[i + 1]);
            CHECK(std::abs(sol.residual) < 1e-12);
            CHECK(sol.r_s_approx > 0.0);
            CHECK(sol.r_s_asymptotic > 0.0);
        }
        NetworkParams clear;
        clear.lambda_v = 0.0;
        CHECK_THROWS_AS(optimal_rs(clear), PlacementError);
    }

    TEST_CASE("association probabilities partition the outcomes")
    {
        oracle::Gen gen(23);
        for (int i = 0; i < 50; ++i)
        {
            const NetworkParams p = gen.network();
            const auto d = gen.coin() ? Deployment::fixed(gen.uniform(0.0, 60.0))
                                      : Deployment::cell(gen.uniform(0.05, 1.0));
            const auto a = association_probs(d, p);
            CHECK(a.direct + a.via_ris + a.failure == doctest::Approx(1.0).epsilon(1e-13));
            CHECK(a.via_ris >= -1e-14);
            const double direct = oracle::integrate(
                [&](double r) {
                    return 2.0 * p.lambda_b * std::exp(-2.0 * p.lambda_b * r) *
                           std::exp(-p.lambda_v * r * p.h_v / p.h_b);
                },
                0.0, std::numeric_limits<double>::infinity());
            CHECK(a.direct == doctest::Approx(direct).epsilon(1e-10));
        }
    }

    TEST_CASE("neighbor distance density")
    {
        NetworkParams p;
        for (double r : {0.0, 3.0, 15.0, 60.0})
        {
            const double mass = oracle::integrate([&](double y) { return nn_dist_pdf(y, r, p); }, 0.0,
                                                  2.0 * r) +
                                oracle::integrate([&](double y) { return nn_dist_pdf(y, r, p); },
                                                  2.0 * r, std::numeric_limits<double>::infinity());
            CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
        }

        // Histogram of simulated neighbor distances for a serving BS at r.
        const double r = 12.0;
        std::mt19937_64 rng(24);
        std::exponential_distribution<double> gap(p.lambda_b);
        const std::vector<double> edges{0, 5, 10, 15, 20, 24, 30, 40, 55, 80, 1e300};
        std::vector<double> counts(edges.size() - 1, 0.0);
        const int draws = 200000;
        for (int i = 0; i < draws; ++i)
        {
            // Other BSs lie beyond r on both sides of the user.
            const double right = r + gap(rng);
            const double left = r + gap(rng);
            const double y = std::min(right - r, left + r);
            for (std::size_t k = 0; k + 1 < edges.size(); ++k)
            {
                if (y >= edges[k] && y < edges[k + 1])
                {
                    counts[k] += 1.0;
                }
            }
        }
        double chi2 = 0.0;
        for (std::size_t k = 0; k + 1 < edges.size(); ++k)
        {
            const double hi = std::min(edges[k + 1], 1e4);
            const double prob =
                oracle::integrate([&](double y) { return nn_dist_pdf(y, r, p); }, edges[k], hi);
            const double expected = prob * draws;
            chi2 += (counts[k] - expected) * (counts[k] - expected) / expected;
        }
        const boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
        CHECK(chi2 < boost::math::quantile(dist, 0.95));
    }

    TEST_CASE("intersection fallback probability")
    {
        NetworkParams p;
        p.lambda_v = 0.3;
        std::mt19937_64 rng(25);
        std::exponential_distribution<double> blockage(p.lambda_v);
        const int draws = 400000;
        for (auto [r, r_ux, r_s] : {std::tuple{30.0, 5.0, 20.0}, std::tuple{10.0, 4.0, 20.0},
                                    std::tuple{10.0, 15.0, 20.0}, std::tuple{25.0, 0.5, 20.0}})
        {
            int hits = 0;
            for (int i = 0; i < draws; ++i)
            {
                const double d1 = blockage(rng);
                const double d2 = blockage(rng);
                const bool bsBlocked = d1 < r * p.h_v / p.h_b;
                const double risDist = std::abs(r - r_s);
                const bool risBlocked = (r >= r_s ? d1 : d2) < risDist * p.h_v / p.h_s;
                const bool crossLos = d2 >= r_ux * p.h_v / p.h_s;
                hits += bsBlocked && risBlocked && crossLos;
            }
            const double mc = static_cast<double>(hits) / draws;
            const double sd = std::sqrt(mc * (1 - mc) / draws);
            CHECK(std::abs(intersection_assoc_prob(r, r_ux, r_s, p) - mc) < 4 * sd + 1e-6);
        }
    }
}
