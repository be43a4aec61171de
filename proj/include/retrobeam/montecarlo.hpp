#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "retrobeam/channel.hpp"
#include "retrobeam/params.hpp"

namespace retrobeam {

struct NonePolicy {};
struct DibPolicy {};
struct FbPolicy {};
struct DbbPolicy {
    double delta = 0.0;
};
struct PbbPolicy {
    double p = 0.0;
};
struct HtbPolicy {
    double gamma = 0.0;
    std::size_t max_iter = 100;
};
/// Full-CSI benchmark: every ER gets zeta P_t d^-a ||f||^2, i.e. zeta P_t M d^-a
/// with reduced channels.
struct PerfectBfPolicy {};

using Policy = std::variant<NonePolicy, DibPolicy, FbPolicy, DbbPolicy, PbbPolicy, HtbPolicy, PerfectBfPolicy>;

/// "NONE", "DIB", "FB", "DBB", "PBB", "HTB" or "PERFECT_BF".
std::string policy_name(const Policy& policy);

struct ExperimentConfig {
    SystemParams params;
    Policy policy = FbPolicy{};
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    /// Full mode evaluates the exact two-phase simulation instead of the
    /// asymptotic expression.
    ChannelMode channel_mode = ChannelMode::reduced;
    /// When set, an ER is pinned at this distance in every trial and only its
    /// power is recorded. Otherwise all ERs of every trial are pooled.
    std::optional<double> tagged_distance;
    /// Worker threads; 0 means hardware concurrency. Results do not depend on it.
    unsigned threads = 1;
    /// Keep the per-ER samples of every trial.
    bool keep_samples = false;
};

/// Mean with a normal-approximation 95% interval.
struct EstimateWithCI {
    double mean = 0.0;
    double std_error = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::size_t n = 0;
};

/// Pooled ratio estimate sum(totals)/sum(counts) over independent trials.
/// The standard error treats each trial as a cluster (delta method), which is
/// the usual i.i.d. error when every count is 1.
EstimateWithCI estimate_ratio(std::span<const double> totals, std::span<const double> counts);

struct ExperimentResult {
    EstimateWithCI estimate;
    /// "population_mean" or "tagged_er".
    std::string estimator;
    std::size_t empty_trials = 0;
    /// Per-trial samples in trial order (only with keep_samples).
    std::vector<std::vector<double>> samples;
};

/// Runs `trials` independent network/channel/policy draws and averages the
/// total harvested power. Trial t draws from streams derived from
/// (seed, t, purpose), so the output is identical for any thread count.
/// Trials without ERs are skipped and counted.
ExperimentResult run_policy_experiment(const ExperimentConfig& config);

struct SatisfactionResult {
    EstimateWithCI htb;
    EstimateWithCI fb;
    std::size_t empty_trials = 0;
};

/// Fraction of ERs whose retrodirective power reaches a common target Gamma
/// after HTB tracking, and under full backscattering on the same draws.
/// Requires an HtbPolicy.
SatisfactionResult satisfaction_fraction(const ExperimentConfig& config);

/// Calls fn(t) for t in [0, count) on `threads` workers (0 = hardware concurrency).
/// The first exception thrown by any call is rethrown.
void parallel_trials(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace retrobeam
