#include <doctest.h>

#include <cmath>

#include "retrobeam/analysis.hpp"
#include "retrobeam/experiments.hpp"
#include "retrobeam/montecarlo.hpp"

using namespace retrobeam;

namespace {

ExperimentConfig config(Policy policy, std::size_t trials, std::uint64_t seed)
{
    ExperimentConfig c;
    c.policy = policy;
    c.trials = trials;
    c.seed = seed;
    return c;
}

}  // namespace

TEST_SUITE("montecarlo") {

TEST_CASE("ratio estimator")
{
    const std::vector<double> totals{1.0, 2.0, 3.0, 6.0};
    const std::vector<double> ones(4, 1.0);
    const auto e = estimate_ratio(totals, ones);
    CHECK(e.mean == doctest::Approx(3.0));
    // iid case: sample sd / sqrt(n)
    const double sd = std::sqrt((4.0 + 1.0 + 0.0 + 9.0) / 3.0);
    CHECK(e.std_error == doctest::Approx(sd / 2.0));
    CHECK(e.ci_low <= e.mean);
    CHECK(e.ci_high >= e.mean);
    CHECK(e.n == 4);

    const std::vector<double> pooled_totals{3.0, 7.0};
    const std::vector<double> counts{1.0, 3.0};
    CHECK(estimate_ratio(pooled_totals, counts).mean == doctest::Approx(2.5));
    CHECK(estimate_ratio({}, {}).n == 0);
}

TEST_CASE("no reflection: mean is the omnidirectional average")
{
    const auto r = run_policy_experiment(config(NonePolicy{}, 100000, 1));
    CHECK(r.estimator == "population_mean");
    CHECK(r.estimate.mean == doctest::Approx(1.0 / 960.0).epsilon(0.02));
    CHECK(std::abs(r.estimate.mean - 1.0 / 960.0) < 4.0 * r.estimate.std_error);
}

TEST_CASE("distance-inverse: mean matches the closed form")
{
    const auto r = run_policy_experiment(config(DibPolicy{}, 100000, 2));
    CHECK(r.estimate.mean == doctest::Approx(q_dib(SystemParams{})).epsilon(0.03));
}

TEST_CASE("same seed, any worker count: identical samples")
{
    auto c = config(FbPolicy{}, 300, 9);
    c.keep_samples = true;
    c.threads = 1;
    const auto a = run_policy_experiment(c);
    c.threads = 8;
    const auto b = run_policy_experiment(c);
    CHECK(a.samples == b.samples);
    CHECK(a.estimate.mean == b.estimate.mean);
    CHECK(a.estimate.std_error == b.estimate.std_error);

    c.channel_mode = ChannelMode::full;
    c.params.antennas = 64;
    c.trials = 40;
    c.threads = 1;
    const auto fa = run_policy_experiment(c);
    c.threads = 3;
    const auto fb = run_policy_experiment(c);
    CHECK(fa.samples == fb.samples);
}

TEST_CASE("different seeds differ")
{
    const auto a = run_policy_experiment(config(FbPolicy{}, 50, 1));
    const auto b = run_policy_experiment(config(FbPolicy{}, 50, 2));
    CHECK(a.estimate.mean != b.estimate.mean);
}

TEST_CASE("standard error shrinks like one over root trials")
{
    const auto a = run_policy_experiment(config(NonePolicy{}, 1000, 4));
    const auto b = run_policy_experiment(config(NonePolicy{}, 4000, 5));
    CHECK(a.estimate.std_error / b.estimate.std_error == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("tagged ER and empty trials")
{
    auto c = config(NonePolicy{}, 500, 3);
    c.params.density = 0.0;
    const auto empty = run_policy_experiment(c);
    CHECK(empty.empty_trials == 500);
    CHECK(empty.estimate.n == 0);

    c.tagged_distance = 10.0;
    const auto tagged = run_policy_experiment(c);
    CHECK(tagged.estimator == "tagged_er");
    CHECK(tagged.empty_trials == 0);
    CHECK(tagged.estimate.mean == doctest::Approx(1e-3));
    CHECK(tagged.estimate.n == 500);
}

TEST_CASE("perfect beamforming benchmark")
{
    auto c = config(PerfectBfPolicy{}, 200, 6);
    c.tagged_distance = 10.0;
    CHECK(run_policy_experiment(c).estimate.mean == doctest::Approx(500.0 * 1e-3));
    c.channel_mode = ChannelMode::full;
    c.params.antennas = 64;
    CHECK(run_policy_experiment(c).estimate.mean == doctest::Approx(64.0 * 1e-3).epsilon(0.02));
}

TEST_CASE("satisfaction fraction edge cases")
{
    auto c = config(HtbPolicy{0.0, 100}, 200, 7);
    CHECK(satisfaction_fraction(c).htb.mean == 1.0);
    const SystemParams p;
    c.policy = HtbPolicy{1.0001 * 500.0 * p.omni_power(p.exclusion_m), 100};
    const auto none = satisfaction_fraction(c);
    CHECK(none.htb.mean == 0.0);
    CHECK(none.fb.mean == 0.0);
    c.policy = FbPolicy{};
    CHECK_THROWS(satisfaction_fraction(c));
}

TEST_CASE("satisfaction falls with density and with the target")
{
    auto c = config(HtbPolicy{1e-3, 100}, 3000, 8);
    c.params.pt_w = dbm_to_watt(40.0);
    const auto base = satisfaction_fraction(c);
    CHECK(base.htb.mean >= base.fb.mean);
    CHECK(base.htb.mean > 0.0);
    CHECK(base.htb.mean < 1.0);

    auto dense = c;
    dense.params.density *= 2.0;
    const auto d = satisfaction_fraction(dense);
    CHECK(d.htb.mean <= base.htb.mean + 3.0 * std::hypot(d.htb.std_error, base.htb.std_error));

    auto harder = c;
    harder.policy = HtbPolicy{1e-2, 100};
    const auto h = satisfaction_fraction(harder);
    CHECK(h.htb.mean <= base.htb.mean);
}

TEST_CASE("parallel_trials covers every index and propagates errors")
{
    std::vector<int> hits(1000, 0);
    parallel_trials(hits.size(), 4, [&](std::size_t t) { hits[t] += 1; });
    for (int h : hits) {
        CHECK(h == 1);
    }
    CHECK_THROWS_AS(parallel_trials(100, 4,
                                    [](std::size_t t) {
                                        if (t == 57) {
                                            throw std::runtime_error("boom");
                                        }
                                    }),
                    std::runtime_error);
}

}

TEST_SUITE("experiments") {

TEST_CASE("CSV formatting")
{
    CsvTable t;
    t.header = {"a", "b"};
    t.rows = {{"1", "0.5"}, {"2", "1e-18"}};
    CHECK(t.to_csv() == "a,b\n1,0.5\n2,1e-18\n");
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1e-18) == "1e-18");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("figure tables have the documented headers")
{
    SweepSettings s;
    s.trials = 20;
    s.pt_grid_dbm = {30.0, 40.0};
    s.gamma_grid_w = {1e-3};
    s.p_grid = {0.5};
    s.delta_points = 3;
    SystemParams fig2;
    fig2.exclusion_m = 8.0;
    fig2.pt_w = 10.0;

    const auto f1 = fig1_table(SystemParams{}, s);
    CHECK(f1.header == std::vector<std::string>{"pt_dbm", "policy", "mean_w", "stderr_w", "n"});
    CHECK(f1.rows.size() == 8);

    Fig2Marker m;
    const auto f2a = fig2a_table(fig2, s, &m);
    CHECK(f2a.header ==
          std::vector<std::string>{"delta_m", "er_distance_m", "analytic_w", "mc_mean_w", "mc_stderr_w", "n"});
    CHECK(f2a.rows.size() == 9);
    CHECK(m.argument > 8.0);
    CHECK(m.branch == "inner_fixed");

    const auto f2b = fig2b_table(fig2, s, &m);
    CHECK(f2b.header == std::vector<std::string>{"p", "er_distance_m", "analytic_w", "mc_mean_w", "mc_stderr_w", "n"});
    CHECK(f2b.rows.size() == 2);
    CHECK(m.argument > 0.0);
    CHECK(m.argument < 1.0);

    const auto f3 = fig3_table(SystemParams{}, s);
    CHECK(f3.header == std::vector<std::string>{"pt_dbm", "gamma_w", "policy", "fraction", "stderr", "n"});
    CHECK(f3.rows.size() == 4);
}

TEST_CASE("figure tables are reproducible across worker counts")
{
    SweepSettings s;
    s.trials = 50;
    s.pt_grid_dbm = {36.0, 40.0};
    s.threads = 1;
    const std::string a = fig1_table(SystemParams{}, s).to_csv();
    s.threads = 8;
    CHECK(fig1_table(SystemParams{}, s).to_csv() == a);
}

}
