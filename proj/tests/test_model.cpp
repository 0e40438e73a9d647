#include "oracles.hpp"

#include "risnet/model.hpp"

#include <doctest.h>

#include <cmath>

using namespace risnet;

TEST_SUITE("model")
{
    TEST_CASE("dBm and dB conversions")
    {
        CHECK(dbm_to_watt(20.0) == doctest::Approx(0.1).epsilon(1e-15));
        CHECK(dbm_to_watt(-174.0) == doctest::Approx(std::pow(10.0, -20.4)).epsilon(1e-13));
        CHECK(db_to_linear(10.0) == doctest::Approx(10.0).epsilon(1e-15));
        CHECK(linear_to_db(db_to_linear(-37.5)) == doctest::Approx(-37.5).epsilon(1e-13));
    }

    TEST_CASE("noise power of the default radio setup")
    {
        // -174 dBm/Hz over 1 GHz with a 10 dB noise figure, normalized by 20 dBm.
        const NetworkParams p = normalize(RawConfig{});
        const double expected = std::pow(10.0, -20.4) * 1e9 * 10.0 / 0.1;
        CHECK(p.sigma2() == doctest::Approx(expected).epsilon(1e-12));
        CHECK(p.p_t == doctest::Approx(0.1).epsilon(1e-15));
        CHECK(p.noise_figure == doctest::Approx(10.0).epsilon(1e-15));
        CHECK(NetworkParams{}.sigma2() == doctest::Approx(expected).epsilon(1e-12));
    }

    TEST_CASE("free-space constant at 28 GHz")
    {
        const double lambda = kSpeedOfLight / 28e9;
        const double K = std::pow(lambda / (4.0 * kPi), 2.0);
        CHECK(NetworkParams{}.K() == doctest::Approx(K).epsilon(1e-14));
        CHECK(K == doctest::Approx(7.2595e-7).epsilon(1e-4));
    }

    TEST_CASE("validation rejects broken geometry")
    {
        RawConfig raw;
        raw.h_s = 9.0;
        raw.h_b = 10.0;
        CHECK_THROWS_AS(normalize(raw), ConfigError);

        NetworkParams p;
        p.lambda_b = 0.0;
        CHECK_THROWS_AS(p.validate(), ConfigError);
        p = NetworkParams{};
        p.lambda_v = -0.1;
        CHECK_THROWS_AS(p.validate(), ConfigError);
        p = NetworkParams{};
        p.u_s = 3.0;
        CHECK_THROWS_AS(p.validate(), ConfigError);
        p = NetworkParams{};
        p.N = 1;
        CHECK_THROWS_AS(p.validate(), ConfigError);
        p = NetworkParams{};
        p.lambda_v = 0.0;
        CHECK_NOTHROW(p.validate());
    }

    TEST_CASE("normalize is a fixed point on its own output")
    {
        oracle::Gen gen(11);
        for (int i = 0; i < 50; ++i)
        {
            NetworkParams p = gen.network();
            p.n0 = gen.integer(1, 5);
            const NetworkParams once = normalize(to_raw(p));
            CHECK(once == p);
            CHECK(normalize(to_raw(once)) == once);
        }
    }

    TEST_CASE("blockage ratios keep the height ratio")
    {
        oracle::Gen gen(12);
        for (int i = 0; i < 100; ++i)
        {
            const NetworkParams p = gen.network();
            const auto r = p.ratios(gen.uniform(0.0, 50.0));
            CHECK(r.rho_b / r.rho_s == doctest::Approx(p.h_s / p.h_b).epsilon(1e-14));
            CHECK(r.rho_b > r.rho_s);
            CHECK(r.R_b * r.rho_b == doctest::Approx(1.0).epsilon(1e-15));
        }
        NetworkParams clear;
        clear.lambda_v = 0.0;
        CHECK(std::isinf(clear.ratios().R_s));
    }

    TEST_CASE("path gains are positive and decreasing")
    {
        for (double alpha : {2.0, 2.5, 3.7})
        {
            NetworkParams p;
            p.alpha = alpha;
            const auto pl = p.path_loss();
            CHECK(pl.ell_ub(0.0) == doctest::Approx(p.K() * std::pow(p.h_b, -alpha)).epsilon(1e-14));
            double prev[3] = {pl.ell_ub(0.0), pl.ell_us(0.0), pl.ell_sb(0.0)};
            for (int i = 1; i <= 400; ++i)
            {
                const double r = 0.5 * i;
                const double cur[3] = {pl.ell_ub(r), pl.ell_us(r), pl.ell_sb(r)};
                for (int k = 0; k < 3; ++k)
                {
                    CHECK(cur[k] > 0.0);
                    CHECK(cur[k] < prev[k]);
                    prev[k] = cur[k];
                }
            }
            CHECK(pl.ell(7.0) == doctest::Approx(p.K() * std::pow(7.0, -alpha)).epsilon(1e-14));
        }
    }

    TEST_CASE("end-to-end RIS gain")
    {
        NetworkParams p;
        const auto pl = p.path_loss();
        const double K = p.K();
        const double dh = p.h_s - p.h_b;
        // N = 2 with the user under the RIS.
        const double rs = 17.0;
        const double expect = kPi * K * K / ((rs * rs + dh * dh) * p.h_s * p.h_s);
        CHECK(ell_r(rs, rs, pl, 2) == doctest::Approx(expect).epsilon(1e-13));

        oracle::Gen gen(13);
        for (int i = 0; i < 100; ++i)
        {
            NetworkParams q = gen.network();
            q.alpha = gen.uniform(2.0, 4.0);
            q.N = gen.integer(2, 400);
            const double r_ub = gen.uniform(0.0, 100.0);
            const double r_s = gen.uniform(0.0, 100.0);
            const double dsb = std::hypot(r_s, q.h_s - q.h_b);
            const double dus = std::hypot(r_ub - r_s, q.h_s);
            const double e = kPi * (q.N - 1.0) * (q.N - 1.0) * q.K() * std::pow(dsb, -q.alpha) *
                             q.K() * std::pow(dus, -q.alpha);
            CHECK(ell_r(r_ub, r_s, q.path_loss(), q.N) == doctest::Approx(e).epsilon(1e-12));
        }
    }

    TEST_CASE("deployment invariants")
    {
        CHECK_NOTHROW(Deployment::cell(1.0).validate());
        CHECK_THROWS_AS(Deployment::cell(0.0).validate(), ConfigError);
        CHECK_THROWS_AS(Deployment::cell(1.2).validate(), ConfigError);
        CHECK_THROWS_AS(Deployment::fixed(-1.0).validate(), ConfigError);
        CHECK_THROWS_AS(Deployment::fixed(3.0).f(), ConfigError);
        CHECK(Deployment::fixed(3.0, true).describe() == "fixed(r_s=3)+intersection");
    }
}
