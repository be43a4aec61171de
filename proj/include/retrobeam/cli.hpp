#pragma once

#include <optional>
#include <string>
#include <vector>

#include "retrobeam/experiments.hpp"
#include "retrobeam/params.hpp"

namespace retrobeam::cli {

/// Values read from a JSON config file. Unset fields fall back to the
/// built-in defaults (or the fig2a/fig2b overrides).
struct FileConfig {
    std::optional<unsigned> antennas;
    std::optional<double> density;
    std::optional<double> exclusion_m;
    std::optional<double> radius_m;
    std::optional<double> pathloss_exp;
    std::optional<double> pt_w;
    std::optional<double> noise_w;
    std::optional<double> tau_s;
    std::optional<double> zeta;
    std::optional<double> carrier_hz;

    std::optional<std::vector<double>> pt_grid_dbm;
    std::optional<std::vector<double>> gamma_grid_w;
    std::optional<std::vector<double>> p_grid;
    std::optional<std::size_t> delta_points;
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<std::string> channel_mode;

    std::optional<std::string> policy;
    std::optional<double> delta_m;
    std::optional<double> p;
    std::optional<double> gamma_w;
    std::optional<std::size_t> max_iter;
    std::optional<double> tagged_distance_m;
};

/// Parses a config document. Power fields accept `*_dbm` or `*_w` (not both);
/// unknown keys are rejected. Throws ParamError.
FileConfig parse_config(const std::string& json_text);

/// Built-in defaults overlaid with the file values. `fig2` switches the
/// defaults for xi and P_t to 8 m and 40 dBm.
SystemParams resolve_params(const FileConfig& file, bool fig2 = false);

/// Entry point: `retrobeam <simulate|analyze|optimize|reproduce> ...`.
/// Returns 0 on success, 1 for invalid configuration, 2 for runtime failures.
int run(int argc, const char* const* argv);

}  // namespace retrobeam::cli
