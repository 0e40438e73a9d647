#include "oracles.hpp"

#include "risnet/coverage.hpp"
#include "risnet/interference.hpp"
#include "risnet/simulate.hpp"

#include <doctest.h>

#include <cmath>

using namespace risnet;

namespace
{

// Laplace argument that puts exp(-s I) in its informative range: the
// inverse mean power of a LOS interferer at distance r.
double
scaleAt(double r, const NetworkParams& p)
{
    return 1.0 / (p.path_loss().ell_ub(r) * p.u_m * p.v_m);
}

InterferenceContext
directContext(double r_ub, double d_1, double d_2)
{
    InterferenceContext c;
    c.r_ub = r_ub;
    c.d_1 = d_1;
    c.d_2 = d_2;
    c.regime = Regime::Ab;
    return c;
}

} // namespace

TEST_SUITE("interference")
{
    TEST_CASE("reflection window")
    {
        NetworkParams p;
        CHECK(ris_window(0.0, p) == doctest::Approx((p.h_s - p.h_b) * p.theta_s).epsilon(1e-14));
        CHECK(ris_window(30.0, p) ==
              doctest::Approx(std::hypot(30.0, p.h_s - p.h_b) * p.theta_s).epsilon(1e-14));
        CHECK(to_string(Regime::Ax2) == "intersection_near");
    }

    TEST_CASE("exponential kernel and general kernel agree for n0 = 1")
    {
        oracle::Gen gen(41);
        for (int i = 0; i < 30; ++i)
        {
            NetworkParams p = gen.network();
            p.alpha = gen.coin() ? 2.0 : gen.uniform(2.1, 4.0);
            const double r = gen.uniform(0.5, 60.0);
            const auto ctx = directContext(r, gen.coin() ? InterferenceContext::kNone : gen.uniform(0.0, 80.0),
                                           gen.coin() ? InterferenceContext::kNone : gen.uniform(0.0, 80.0));
            const double s = scaleAt(r, p) * gen.logUniform(0.01, 100.0);
            CHECK(std::abs(laplace_direct(s, ctx, p) - laplace_direct_rayleigh(s, ctx, p)) < 1e-10);
        }
        NetworkParams p;
        p.n0 = 2;
        CHECK_THROWS(laplace_direct_rayleigh(1.0, directContext(5.0, 1.0, 1.0), p));
    }

    TEST_CASE("transform is one at s = 0 and decreasing in s")
    {
        oracle::Gen gen(42);
        for (int i = 0; i < 15; ++i)
        {
            NetworkParams p = gen.network();
            p.n0 = gen.integer(1, 3);
            const double r = gen.uniform(1.0, 40.0);
            const double r_s = gen.uniform(1.0, 40.0);
            auto ctx = directContext(r, gen.uniform(0.0, 50.0), gen.uniform(0.0, 50.0));
            CHECK(laplace_direct(0.0, ctx, p) == doctest::Approx(1.0).epsilon(1e-12));
            ctx.regime = Regime::As;
            CHECK(laplace_via_ris(0.0, ctx, p, r_s) == doctest::Approx(1.0).epsilon(1e-12));
            double prevA = 1.0 + 1e-12;
            double prevB = 1.0 + 1e-12;
            for (int k = -3; k <= 3; ++k)
            {
                const double s = scaleAt(r, p) * std::pow(10.0, k);
                const double a = laplace_direct(s, directContext(r, ctx.d_1, ctx.d_2), p);
                const double b = laplace_via_ris(s, ctx, p, r_s);
                CHECK(a <= prevA + 1e-12);
                CHECK(b <= prevB + 1e-12);
                CHECK(a >= 0.0);
                CHECK(b >= 0.0);
                prevA = a;
                prevB = b;
            }
            CHECK_THROWS(laplace_direct(-1.0, ctx, p));
        }
    }

    TEST_CASE("disabled contributions give a unit transform")
    {
        NetworkParams p;
        p.lambda_v = 0.2;
        InterferenceContext c = directContext(12.0, 4.0, 9.0);
        c.regime = Regime::As;
        c.r_bn = 30.0;
        const double s = scaleAt(10.0, p);
        const auto off = InterferenceToggles::none();
        CHECK(laplace_via_ris(s, c, p, 20.0, IntegrationSpec::precise(), off) == 1.0);
        CHECK(laplace_cell(s, c, p, 0.6, IntegrationSpec::precise(), off) == 1.0);
        c.regime = Regime::Ax1;
        c.r_ux = 6.0;
        c.r_xb = 15.0;
        CHECK(laplace_intersection(s, c, p, IntegrationSpec::precise(), off) == 1.0);
        c.regime = Regime::As;
        CHECK_THROWS(laplace_intersection(s, c, p));
    }

    TEST_CASE("transforms match simulated interference")
    {
        NetworkParams p;
        p.lambda_v = 0.3;
        const std::uint64_t draws = 40000;
        struct Case
        {
            InterferenceContext ctx;
            Deployment d;
        };
        InterferenceContext ab = directContext(8.0, 2.0, 30.0);
        InterferenceContext as = directContext(25.0, 3.0, 12.0);
        as.regime = Regime::As;
        InterferenceContext asCell = as;
        asCell.r_ub = 10.0;
        asCell.r_bn = 35.0;
        InterferenceContext ax = directContext(30.0, 2.0, 40.0);
        ax.regime = Regime::Ax1;
        ax.r_ux = 4.0;
        ax.r_xb = 10.0;
        const Case cases[] = {{ab, Deployment::fixed(20.0)},
                              {as, Deployment::fixed(20.0)},
                              {asCell, Deployment::cell(0.5)},
                              {ax, Deployment::fixed(20.0, true)}};
        int seed = 43;
        for (const auto& c : cases)
        {
            const double s = scaleAt(15.0, p);
            double analytic = 0.0;
            switch (c.ctx.regime)
            {
            case Regime::Ab:
                analytic = laplace_direct(s, c.ctx, p);
                break;
            case Regime::As:
                analytic = c.d.is_fixed() ? laplace_via_ris(s, c.ctx, p, c.d.r_s())
                                          : laplace_cell(s, c.ctx, p, c.d.f());
                break;
            default:
                analytic = laplace_intersection(s, c.ctx, p);
            }
            const auto mc = empirical_laplace(s, c.ctx, c.d, p, draws, seed++);
            CHECK(std::abs(analytic - mc.mean) <= 3.0 * mc.std_error + 1e-4);
        }
    }

    TEST_CASE("interference never raises coverage")
    {
        oracle::Gen gen(44);
        for (int i = 0; i < 6; ++i)
        {
            NetworkParams p = gen.network();
            const double g = gen.logUniform(1e-2, 1e2);
            const double r_s = gen.uniform(5.0, 40.0);
            const double f = gen.uniform(0.2, 1.0);
            CHECK(sinr_coverage_fixed(g, r_s, p) <= snr_coverage_fixed(g, r_s, p) + 1e-6);
            CHECK(sinr_coverage_cell(g, f, p) <= snr_coverage_cell(g, f, p) + 1e-6);
        }
    }

    TEST_CASE("without interference the SINR coverage reduces to SNR coverage")
    {
        NetworkParams p;
        p.lambda_v = 0.4;
        const auto off = InterferenceToggles::none();
        for (double g : {1e-6, 1.0, 10.0})
        {
            CHECK(std::abs(sinr_coverage_fixed(g, 20.0, p, IntegrationSpec::standard(), off) -
                           snr_coverage_fixed(g, 20.0, p)) < 1e-6);
            CHECK(std::abs(sinr_coverage_cell(g, 0.7, p, IntegrationSpec::standard(), off) -
                           snr_coverage_cell(g, 0.7, p)) < 1e-6);
            CHECK(std::abs(sinr_coverage_intersection(g, 20.0, p, IntegrationSpec::standard(), off) -
                           snr_coverage_intersection(g, 20.0, p)) < 1e-6);
        }
        p.n0 = 3;
        CHECK(std::abs(sinr_coverage_fixed(1.0, 20.0, p, IntegrationSpec::standard(), off) -
                       snr_coverage_fixed(1.0, 20.0, p, CoverageMode::Alzer)) < 1e-6);
    }
}
