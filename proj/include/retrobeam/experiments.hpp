#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "retrobeam/channel.hpp"
#include "retrobeam/params.hpp"

namespace retrobeam {

/// In-memory CSV: header plus rows of already formatted cells.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// UTF-8, comma separated, '.' decimal separator, trailing newline.
    [[nodiscard]] std::string to_csv() const;
};

/// Shortest round-trip decimal form of a double.
std::string format_number(double v);

/// Knobs shared by the figure sweeps. Grid defaults are choices of this tool;
/// they are echoed in the run manifest.
struct SweepSettings {
    std::size_t trials = 2000;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    ChannelMode channel_mode = ChannelMode::reduced;
    std::vector<double> pt_grid_dbm = default_pt_grid_dbm();
    std::vector<double> gamma_grid_w = {1e-3, 1e-2, 1e-1};
    /// Points of the fig2a threshold grid, xi and rho included.
    std::size_t delta_points = 14;
    std::vector<double> p_grid = default_p_grid();

    static std::vector<double> default_pt_grid_dbm();  // 20, 22, ..., 46
    static std::vector<double> default_p_grid();       // 0.05, 0.10, ..., 1.00
};

/// Mean total power vs transmit power for NONE, DIB, FB and PERFECT_BF
/// (population mean). Columns: pt_dbm,policy,mean_w,stderr_w,n.
CsvTable fig1_table(const SystemParams& base, const SweepSettings& s);

struct Fig2Marker {
    double argument = 0.0;
    double objective_w = 0.0;
    std::string branch;
};

/// Tagged-ER power vs the DBB threshold for ERs at xi, delta* and rho,
/// analytic and Monte Carlo. Columns:
/// delta_m,er_distance_m,analytic_w,mc_mean_w,mc_stderr_w,n.
CsvTable fig2a_table(const SystemParams& params, const SweepSettings& s, Fig2Marker* marker = nullptr);

/// Tagged-ER power vs the PBB probability for ERs at xi and rho.
/// Columns: p,er_distance_m,analytic_w,mc_mean_w,mc_stderr_w,n.
CsvTable fig2b_table(const SystemParams& params, const SweepSettings& s, Fig2Marker* marker = nullptr);

/// Share of ERs meeting a common retrodirective target, HTB vs FB on the same
/// draws. Columns: pt_dbm,gamma_w,policy,fraction,stderr,n.
CsvTable fig3_table(const SystemParams& base, const SweepSettings& s);

}  // namespace retrobeam
