#include "retrobeam/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "retrobeam/analysis.hpp"
#include "retrobeam/montecarlo.hpp"
#include "retrobeam/optimize.hpp"
#include "retrobeam/rng.hpp"

namespace retrobeam {

std::string CsvTable::to_csv() const
{
    std::string out;
    const auto put_row = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) {
                out += ',';
            }
            out += cells[i];
        }
        out += '\n';
    };
    put_row(header);
    for (const auto& r : rows) {
        put_row(r);
    }
    return out;
}

std::string format_number(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc()) {
        throw std::runtime_error("number formatting failed");
    }
    return {buf, res.ptr};
}

std::vector<double> SweepSettings::default_pt_grid_dbm()
{
    std::vector<double> grid;
    for (int dbm = 20; dbm <= 46; dbm += 2) {
        grid.push_back(dbm);
    }
    return grid;
}

std::vector<double> SweepSettings::default_p_grid()
{
    std::vector<double> grid;
    for (int k = 1; k <= 20; ++k) {
        grid.push_back(0.05 * k);
    }
    return grid;
}

namespace {

ExperimentConfig make_config(const SystemParams& params, Policy policy, const SweepSettings& s,
                             std::uint64_t stream_offset)
{
    ExperimentConfig c;
    c.params = params;
    c.policy = policy;
    c.trials = s.trials;
    // Each sweep point gets its own master seed so points are independent.
    c.seed = mix64(s.seed + 0x51ED27ULL * stream_offset);
    c.threads = s.threads;
    c.channel_mode = s.channel_mode;
    return c;
}

std::string count_cell(std::size_t n)
{
    return std::to_string(n);
}

}  // namespace

CsvTable fig1_table(const SystemParams& base, const SweepSettings& s)
{
    CsvTable table;
    table.header = {"pt_dbm", "policy", "mean_w", "stderr_w", "n"};
    const std::vector<Policy> policies{NonePolicy{}, DibPolicy{}, FbPolicy{}, PerfectBfPolicy{}};
    std::uint64_t point = 0;
    for (double dbm : s.pt_grid_dbm) {
        SystemParams params = base;
        params.pt_w = dbm_to_watt(dbm);
        validate_params(params);
        ++point;
        for (const Policy& policy : policies) {
            // Same draws for every policy at a given power.
            const ExperimentResult r = run_policy_experiment(make_config(params, policy, s, point));
            table.rows.push_back({format_number(dbm), policy_name(policy), format_number(r.estimate.mean),
                                  format_number(r.estimate.std_error), count_cell(r.estimate.n)});
        }
    }
    return table;
}

CsvTable fig2a_table(const SystemParams& params, const SweepSettings& s, Fig2Marker* marker)
{
    validate_params(params);
    const OptResult opt = delta_star(params);
    if (marker != nullptr) {
        *marker = {opt.argument, opt.objective, to_string(opt.branch)};
    }

    const double xi = params.exclusion_m;
    const double rho = params.radius_m;
    std::vector<double> deltas;
    const std::size_t n = std::max<std::size_t>(s.delta_points, 2);
    for (std::size_t k = 0; k < n; ++k) {
        deltas.push_back(xi + (rho - xi) * static_cast<double>(k) / static_cast<double>(n - 1));
    }

    CsvTable table;
    table.header = {"delta_m", "er_distance_m", "analytic_w", "mc_mean_w", "mc_stderr_w", "n"};
    std::uint64_t point = 0;
    for (double delta : deltas) {
        ++point;
        for (double d : {xi, opt.argument, rho}) {
            ExperimentConfig c = make_config(params, DbbPolicy{delta}, s, point);
            c.tagged_distance = d;
            const ExperimentResult r = run_policy_experiment(c);
            table.rows.push_back({format_number(delta), format_number(d),
                                  format_number(tagged_dbb_energy(d, delta, params)), format_number(r.estimate.mean),
                                  format_number(r.estimate.std_error), count_cell(r.estimate.n)});
        }
    }
    return table;
}

CsvTable fig2b_table(const SystemParams& params, const SweepSettings& s, Fig2Marker* marker)
{
    validate_params(params);
    if (marker != nullptr) {
        const OptResult opt = p_star(params);
        *marker = {opt.argument, opt.objective, "edge_retro_with_self"};
    }
    CsvTable table;
    table.header = {"p", "er_distance_m", "analytic_w", "mc_mean_w", "mc_stderr_w", "n"};
    std::uint64_t point = 0;
    for (double p : s.p_grid) {
        ++point;
        for (double d : {params.exclusion_m, params.radius_m}) {
            ExperimentConfig c = make_config(params, PbbPolicy{p}, s, point);
            c.tagged_distance = d;
            const ExperimentResult r = run_policy_experiment(c);
            table.rows.push_back({format_number(p), format_number(d), format_number(tagged_pbb_energy(d, p, params)),
                                  format_number(r.estimate.mean), format_number(r.estimate.std_error),
                                  count_cell(r.estimate.n)});
        }
    }
    return table;
}

CsvTable fig3_table(const SystemParams& base, const SweepSettings& s)
{
    CsvTable table;
    table.header = {"pt_dbm", "gamma_w", "policy", "fraction", "stderr", "n"};
    std::uint64_t point = 0;
    for (double dbm : s.pt_grid_dbm) {
        SystemParams params = base;
        params.pt_w = dbm_to_watt(dbm);
        validate_params(params);
        ++point;
        for (double gamma : s.gamma_grid_w) {
            ExperimentConfig c = make_config(params, HtbPolicy{gamma, 100}, s, point);
            c.channel_mode = ChannelMode::reduced;
            const SatisfactionResult r = satisfaction_fraction(c);
            table.rows.push_back({format_number(dbm), format_number(gamma), "HTB", format_number(r.htb.mean),
                                  format_number(r.htb.std_error), count_cell(r.htb.n)});
            table.rows.push_back({format_number(dbm), format_number(gamma), "FB", format_number(r.fb.mean),
                                  format_number(r.fb.std_error), count_cell(r.fb.n)});
        }
    }
    return table;
}

}  // namespace retrobeam
