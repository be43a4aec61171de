#include "retrobeam/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

#include "retrobeam/harvest.hpp"
#include "retrobeam/network.hpp"
#include "retrobeam/policies.hpp"
#include "retrobeam/rng.hpp"
#include "retrobeam/simd/kernels.hpp"

namespace retrobeam {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Neumaier compensated sum; order is fixed by the caller.
class CompensatedSum {
public:
    void add(double v)
    {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    [[nodiscard]] double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct TrialOutcome {
    double total = 0.0;
    double count = 0.0;
    bool empty = false;
    std::vector<double> samples;
};

}  // namespace

std::string policy_name(const Policy& policy)
{
    return std::visit(overloaded{
                          [](const NonePolicy&) { return std::string("NONE"); },
                          [](const DibPolicy&) { return std::string("DIB"); },
                          [](const FbPolicy&) { return std::string("FB"); },
                          [](const DbbPolicy&) { return std::string("DBB"); },
                          [](const PbbPolicy&) { return std::string("PBB"); },
                          [](const HtbPolicy&) { return std::string("HTB"); },
                          [](const PerfectBfPolicy&) { return std::string("PERFECT_BF"); },
                      },
                      policy);
}

EstimateWithCI estimate_ratio(std::span<const double> totals, std::span<const double> counts)
{
    EstimateWithCI est;
    CompensatedSum total_sum;
    CompensatedSum count_sum;
    std::size_t clusters = 0;
    for (std::size_t t = 0; t < totals.size(); ++t) {
        total_sum.add(totals[t]);
        count_sum.add(counts[t]);
    }
    const double n = count_sum.value();
    est.n = static_cast<std::size_t>(std::llround(n));
    clusters = totals.size();
    if (n <= 0.0) {
        return est;
    }
    est.mean = total_sum.value() / n;
    if (clusters >= 2) {
        CompensatedSum resid;
        for (std::size_t t = 0; t < totals.size(); ++t) {
            const double e = totals[t] - est.mean * counts[t];
            resid.add(e * e);
        }
        const double mean_count = n / static_cast<double>(clusters);
        const double c = static_cast<double>(clusters);
        est.std_error = std::sqrt(resid.value() / (c * (c - 1.0))) / mean_count;
    }
    est.ci_low = est.mean - 1.959963984540054 * est.std_error;
    est.ci_high = est.mean + 1.959963984540054 * est.std_error;
    return est;
}

void parallel_trials(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn)
{
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    if (threads <= 1) {
        for (std::size_t t = 0; t < count; ++t) {
            fn(t);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> workers;
        workers.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) {
            workers.emplace_back([&] {
                for (;;) {
                    const std::size_t t = next.fetch_add(1);
                    if (t >= count || failed.load()) {
                        return;
                    }
                    try {
                        fn(t);
                    } catch (...) {
                        const std::lock_guard lock(error_mutex);
                        if (!error) {
                            error = std::current_exception();
                        }
                        failed = true;
                    }
                }
            });
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

namespace {

std::vector<double> perfect_beamforming(const SystemParams& params, const NetworkRealization& net,
                                        const ChannelRealization& channels)
{
    std::vector<double> q(net.size());
    for (std::size_t i = 0; i < net.size(); ++i) {
        const double array_gain = channels.mode() == ChannelMode::full ? simd::norm_sq(channels.vector(i))
                                                                       : static_cast<double>(params.antennas);
        q[i] = params.omni_power(net.distances[i]) * array_gain;
    }
    return q;
}

ReflectionProfile build_profile(const ExperimentConfig& config, const NetworkRealization& net,
                                const ChannelRealization& channels, std::size_t trial)
{
    const SystemParams& params = config.params;
    return std::visit(overloaded{
                          [&](const NonePolicy&) { return ReflectionProfile{std::vector<double>(net.size(), 0.0)}; },
                          [&](const DibPolicy&) { return dib_profile(params, net); },
                          [&](const FbPolicy&) { return fb_profile(net); },
                          [&](const DbbPolicy& p) { return dbb_profile(params, net, p.delta); },
                          [&](const PbbPolicy& p) {
                              Rng rng = make_stream(config.seed, trial, StreamPurpose::policy);
                              return pbb_profile(net, p.p, rng);
                          },
                          [&](const HtbPolicy& p) {
                              const auto targets = HtbTargets::common(net.size(), p.gamma);
                              return htb_iterate(params, net, channels, targets, p.max_iter).profile;
                          },
                          [&](const PerfectBfPolicy&) { return fb_profile(net); },
                      },
                      config.policy);
}

struct TrialDraw {
    NetworkRealization net;
    ChannelRealization channels;
};

TrialDraw draw_trial(const ExperimentConfig& config, std::size_t trial)
{
    TrialDraw draw;
    Rng net_rng = make_stream(config.seed, trial, StreamPurpose::network);
    draw.net = sample_network(config.params, net_rng);
    if (config.tagged_distance) {
        insert_tagged(draw.net, *config.tagged_distance);
    }
    Rng ch_rng = make_stream(config.seed, trial, StreamPurpose::channels);
    draw.channels = draw_channels(config.params, draw.net, config.channel_mode, ch_rng);
    return draw;
}

TrialOutcome run_trial(const ExperimentConfig& config, std::size_t trial)
{
    TrialOutcome out;
    TrialDraw draw = draw_trial(config, trial);
    if (draw.net.empty()) {
        out.empty = true;
        return out;
    }

    std::vector<double> q_total;
    if (std::holds_alternative<PerfectBfPolicy>(config.policy)) {
        q_total = perfect_beamforming(config.params, draw.net, draw.channels);
    } else {
        const ReflectionProfile profile = build_profile(config, draw.net, draw.channels, trial);
        if (config.channel_mode == ChannelMode::full) {
            Rng noise_rng = make_stream(config.seed, trial, StreamPurpose::noise);
            q_total = simulate_two_phase(config.params, draw.net, draw.channels, profile, noise_rng).q_total;
        } else {
            q_total = harvested_energy_asymptotic(config.params, draw.net, draw.channels, profile).q_total;
        }
    }

    if (config.tagged_distance) {
        out.total = q_total.front();
        out.count = 1.0;
        q_total.resize(1);
    } else {
        CompensatedSum s;
        for (double q : q_total) {
            s.add(q);
        }
        out.total = s.value();
        out.count = static_cast<double>(q_total.size());
    }
    if (config.keep_samples) {
        out.samples = std::move(q_total);
    }
    return out;
}

void check_config(const ExperimentConfig& config)
{
    if (config.trials < 1) {
        throw ParamError("an experiment needs at least one trial");
    }
    validate_params(config.params);
    if (config.tagged_distance &&
        !(*config.tagged_distance >= config.params.exclusion_m && *config.tagged_distance <= config.params.radius_m)) {
        throw ParamError("tagged ER distance must lie in [xi, rho]");
    }
}

}  // namespace

ExperimentResult run_policy_experiment(const ExperimentConfig& config)
{
    check_config(config);
    std::vector<TrialOutcome> outcomes(config.trials);
    parallel_trials(config.trials, config.threads,
                    [&](std::size_t t) { outcomes[t] = run_trial(config, t); });

    ExperimentResult result;
    result.estimator = config.tagged_distance ? "tagged_er" : "population_mean";
    std::vector<double> totals;
    std::vector<double> counts;
    totals.reserve(outcomes.size());
    counts.reserve(outcomes.size());
    for (auto& o : outcomes) {
        if (o.empty) {
            ++result.empty_trials;
            if (config.keep_samples) {
                result.samples.emplace_back();
            }
            continue;
        }
        totals.push_back(o.total);
        counts.push_back(o.count);
        if (config.keep_samples) {
            result.samples.push_back(std::move(o.samples));
        }
    }
    result.estimate = estimate_ratio(totals, counts);
    return result;
}

SatisfactionResult satisfaction_fraction(const ExperimentConfig& config)
{
    check_config(config);
    const auto* htb = std::get_if<HtbPolicy>(&config.policy);
    if (htb == nullptr) {
        throw ParamError("satisfaction fraction needs an HTB policy");
    }
    if (!(htb->gamma >= 0.0)) {
        throw ParamError("harvesting target must be >= 0");
    }

    struct Counts {
        double htb = 0.0;
        double fb = 0.0;
        double ers = 0.0;
    };
    std::vector<Counts> per_trial(config.trials);
    parallel_trials(config.trials, config.threads, [&](std::size_t t) {
        const TrialDraw draw = draw_trial(config, t);
        if (draw.net.empty()) {
            return;
        }
        const auto targets = HtbTargets::common(draw.net.size(), htb->gamma);
        const HtbOutcome tracked = htb_iterate(config.params, draw.net, draw.channels, targets, htb->max_iter);
        const HarvestReport full =
            harvested_energy_asymptotic(config.params, draw.net, draw.channels, fb_profile(draw.net));
        Counts c;
        c.ers = static_cast<double>(draw.net.size());
        c.htb = static_cast<double>(std::count(tracked.satisfied.begin(), tracked.satisfied.end(), true));
        for (double q : full.q_re) {
            if (q >= htb->gamma * (1.0 - kHtbSatisfiedRelTol)) {
                c.fb += 1.0;
            }
        }
        per_trial[t] = c;
    });

    SatisfactionResult out;
    std::vector<double> htb_hits;
    std::vector<double> fb_hits;
    std::vector<double> ers;
    for (const auto& c : per_trial) {
        if (c.ers == 0.0) {
            ++out.empty_trials;
            continue;
        }
        htb_hits.push_back(c.htb);
        fb_hits.push_back(c.fb);
        ers.push_back(c.ers);
    }
    out.htb = estimate_ratio(htb_hits, ers);
    out.fb = estimate_ratio(fb_hits, ers);
    return out;
}

}  // namespace retrobeam
