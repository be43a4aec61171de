#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "retrobeam/analysis.hpp"
#include "retrobeam/harvest.hpp"
#include "retrobeam/montecarlo.hpp"
#include "retrobeam/network.hpp"
#include "retrobeam/policies.hpp"
#include "retrobeam/rng.hpp"

using namespace retrobeam;

namespace {

oracle::RetroCcdfT t_route(const SystemParams& p)
{
    return {p.zeta, p.pt_w, static_cast<double>(p.antennas), p.pathloss_exp, p.noise_w, p.tau_s, p.radius_m};
}

// Tagged ER at d, FB everywhere: samples of its total power.
std::vector<double> tagged_fb_samples(const SystemParams& p, double d, int trials, std::uint64_t seed)
{
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(trials));
    for (int t = 0; t < trials; ++t) {
        Rng nr = make_stream(seed, static_cast<std::uint64_t>(t), StreamPurpose::network);
        Rng cr = make_stream(seed, static_cast<std::uint64_t>(t), StreamPurpose::channels);
        auto net = sample_network(p, nr);
        insert_tagged(net, d);
        const auto ch = draw_channels(p, net, ChannelMode::reduced, cr);
        out.push_back(harvested_energy_asymptotic(p, net, ch, fb_profile(net)).q_total[0]);
    }
    return out;
}

ExperimentResult population(const SystemParams& p, Policy policy, std::size_t trials, std::uint64_t seed)
{
    ExperimentConfig c;
    c.params = p;
    c.policy = policy;
    c.trials = trials;
    c.seed = seed;
    return run_policy_experiment(c);
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("omnidirectional average")
{
    SystemParams p;
    const double lam = lambda_term({2.0, 30.0}, p);
    CHECK(lam == doctest::Approx(1.0 / 960.0).epsilon(1e-13));
    CHECK(lam == doctest::Approx(oracle::annulus_mean_pow(2.0, 30.0, 3.0, 1000000, 17)).epsilon(0.01));
    p.pt_w = 2.0;
    CHECK(lambda_term({2.0, 30.0}, p) == doctest::Approx(2.0 * lam).epsilon(1e-14));
    p.pt_w = 1.0;
    for (double delta : {2.5, 8.0, 20.0, 29.0}) {
        CHECK(lambda_term({delta, 30.0}, p) < lam);
    }
    p.pathloss_exp = 3.7;
    CHECK(lambda_term({2.0, 30.0}, p) ==
          doctest::Approx(oracle::annulus_mean_pow(2.0, 30.0, 3.7, 1000000, 18)).epsilon(0.01));
}

TEST_CASE("distance-inverse average")
{
    SystemParams p;
    CHECK(q_dib(p) == doctest::Approx(1.9545e-2).epsilon(1e-4));
    CHECK(q_dib(p) == doctest::Approx((1.0 / 960.0) * (1.0 + 500.0 / p.mean_count())).epsilon(1e-12));
    p.density = 1e9;
    CHECK(q_dib(p) == doctest::Approx(1.0 / 960.0).epsilon(1e-6));
}

TEST_CASE("CCDF boundary values")
{
    SystemParams p;
    const double d = 15.0;
    const double omni = p.omni_power(d);
    CHECK(ccdf_total({omni, d, 2.0, 0.01}, p) == doctest::Approx(1.0));
    CHECK_THROWS_AS(ccdf_total({0.5 * omni, d, 2.0, 0.01}, p), ParamError);
    CHECK_THROWS_AS(ccdf_total({502.0 * omni, d, 2.0, 0.01}, p), ParamError);

    SystemParams quiet = p;
    quiet.noise_w = 0.0;
    const double top = 501.0 * omni * (1.0 - 1e-9);
    for (double inner : {2.0, 10.0}) {
        const double void_prob = std::exp(-0.01 * std::numbers::pi * (900.0 - inner * inner));
        CHECK(ccdf_total({top, d, inner, 0.01}, quiet) == doctest::Approx(void_prob).epsilon(1e-3));
    }
}

TEST_CASE("CCDF matches the empirical distribution of a tagged ER")
{
    SystemParams p;
    const double d = 15.0;
    auto q = tagged_fb_samples(p, d, 100000, 5);
    std::sort(q.begin(), q.end());
    const double omni = p.omni_power(d);
    for (int k = 1; k <= 10; ++k) {
        // support points spread over where the distribution actually lives
        const double x = omni * (1.0 + 0.5 * std::pow(1.8, k));
        const auto above = q.end() - std::upper_bound(q.begin(), q.end(), x);
        const double empirical = static_cast<double>(above) / static_cast<double>(q.size());
        CAPTURE(x);
        CHECK(std::abs(ccdf_total({x, d, 2.0, 0.01}, p) - empirical) < 0.02);
    }
}

TEST_CASE("expected retro power agrees with the t-variable integral")
{
    SystemParams p;
    const auto o = t_route(p);
    for (double d : {2.0, 8.0, 15.0, 30.0}) {
        for (double inner : {2.0, 12.0}) {
            CAPTURE(d);
            CAPTURE(inner);
            const double ref = o.qbar(d, inner, 0.01, 200);
            CHECK(qbar_re(d, inner, 0.01, p) == doctest::Approx(ref).epsilon(1e-5));
        }
    }
    SystemParams loud = p;
    loud.pt_w = 10.0;
    loud.density = 0.05;
    CHECK(qbar_re(25.0, 8.0, 0.05, loud) == doctest::Approx(t_route(loud).qbar(25.0, 8.0, 0.05, 200)).epsilon(1e-5));
}

TEST_CASE("expected retro power: limits and bounds")
{
    SystemParams p;
    p.noise_w = 0.0;
    const double bound = 500.0 * p.omni_power(10.0);
    CHECK(qbar_re(10.0, 2.0, 0.0, p) == doctest::Approx(bound).epsilon(1e-8));
    SystemParams q;
    for (double lam : {1e-4, 1e-2, 1.0}) {
        const double v = qbar_re(10.0, 2.0, lam, q);
        CHECK(v >= 0.0);
        CHECK(v <= bound);
    }
    CHECK(qbar_re(10.0, 2.0, 1e-2, q) > qbar_re(10.0, 2.0, 2e-2, q));
}

TEST_CASE("expected retro power of the edge ER vs Monte Carlo")
{
    SystemParams p;
    const auto q = tagged_fb_samples(p, 30.0, 100000, 6);
    double acc = 0.0;
    for (double v : q) {
        acc += v - p.omni_power(30.0);
    }
    CHECK(acc / static_cast<double>(q.size()) == doctest::Approx(qbar_re(30.0, 2.0, 0.01, p)).epsilon(0.03));
}

TEST_CASE("full-backscatter average vs Monte Carlo and limits")
{
    SystemParams p;
    const auto mc = population(p, FbPolicy{}, 40000, 3);
    CHECK(mc.estimate.mean == doctest::Approx(q_fb_total(p)).epsilon(0.03));

    SystemParams quiet = p;
    quiet.noise_w = 0.0;
    quiet.density = 1e-8;
    const double lam = 1.0 / 960.0;
    const double sparse = q_fb_total(quiet);
    CHECK(sparse >= 500.0 * lam);
    CHECK(sparse <= 501.0 * lam);
    quiet.density = 1e4;
    CHECK(q_fb_total(quiet) == doctest::Approx(lam).epsilon(0.01));
    CHECK(q_fb_retro(2.0, 1e4, quiet) < 0.01 * lam);

    const auto lim = asymptotic_limits(p);
    CHECK(lim.dense == doctest::Approx(1.04167e-3).epsilon(1e-5));
    CHECK(lim.sparse == 500.0 * lim.dense);
}

TEST_CASE("distance-based binary average")
{
    SystemParams p;
    const double lam = lambda_term({2.0, 30.0}, p);
    CHECK(q_dbb(2.0, p) == doctest::Approx(lam + q_fb_retro(2.0, 0.01, p)).epsilon(1e-12));
    CHECK(q_dbb(30.0, p) == doctest::Approx(lam).epsilon(1e-12));
    const double eps = 96.0 / 896.0;
    const double expect = eps * lambda_term({2.0, 10.0}, p) +
                          (1.0 - eps) * (lambda_term({10.0, 30.0}, p) + q_fb_retro(10.0, 0.01, p));
    CHECK(q_dbb(10.0, p) == doctest::Approx(expect).epsilon(1e-12));
    // omni part alone must still be the full-annulus average
    CHECK(eps * lambda_term({2.0, 10.0}, p) + (1.0 - eps) * lambda_term({10.0, 30.0}, p) ==
          doctest::Approx(lam).epsilon(1e-12));

    const auto mc = population(p, DbbPolicy{10.0}, 40000, 4);
    CHECK(mc.estimate.mean == doctest::Approx(q_dbb(10.0, p)).epsilon(0.03));
}

TEST_CASE("probabilistic binary average")
{
    SystemParams p;
    CHECK(q_pbb(0.0, p) == doctest::Approx(1.0 / 960.0).epsilon(1e-12));
    CHECK(q_pbb(1.0, p) == doctest::Approx(q_fb_total(p)).epsilon(1e-12));
    const auto mc = population(p, PbbPolicy{0.5}, 40000, 5);
    CHECK(mc.estimate.mean == doctest::Approx(q_pbb(0.5, p)).epsilon(0.03));
}

TEST_CASE("tagged energies")
{
    SystemParams p;
    CHECK(tagged_dbb_energy(5.0, 10.0, p) == p.omni_power(5.0));
    CHECK(tagged_dbb_energy(20.0, 10.0, p) ==
          doctest::Approx(p.omni_power(20.0) + qbar_re(20.0, 10.0, 0.01, p)).epsilon(1e-12));
    CHECK(tagged_pbb_energy(20.0, 0.0, p) == p.omni_power(20.0));
    CHECK(tagged_pbb_energy(20.0, 1.0, p) == doctest::Approx(tagged_dbb_energy(20.0, 2.0, p)).epsilon(1e-12));
}

TEST_CASE("reflector arguments are checked")
{
    SystemParams p;
    CHECK_THROWS_AS(qbar_re(10.0, 2.0, -1.0, p), ParamError);
    CHECK_THROWS_AS(q_dbb(1.0, p), ParamError);
    CHECK_THROWS_AS(q_pbb(1.5, p), ParamError);
}

}
