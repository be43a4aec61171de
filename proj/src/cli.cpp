#include "retrobeam/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "retrobeam/analysis.hpp"
#include "retrobeam/montecarlo.hpp"
#include "retrobeam/optimize.hpp"

#ifndef RETROBEAM_VERSION
#define RETROBEAM_VERSION "dev"
#endif

namespace retrobeam::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <class T>
std::optional<T> take(const json& doc, const char* key)
{
    if (!doc.contains(key)) {
        return std::nullopt;
    }
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ParamError(std::string("config key '") + key + "': " + e.what());
    }
}

std::optional<double> take_power(const json& doc, const char* dbm_key, const char* watt_key)
{
    const auto dbm = take<double>(doc, dbm_key);
    const auto watt = take<double>(doc, watt_key);
    if (dbm && watt) {
        throw ParamError(std::string("config sets both ") + dbm_key + " and " + watt_key);
    }
    if (dbm) {
        return dbm_to_watt(*dbm);
    }
    return watt;
}

ChannelMode parse_mode(const std::string& s)
{
    if (s == "full") {
        return ChannelMode::full;
    }
    if (s == "reduced") {
        return ChannelMode::reduced;
    }
    throw ParamError("channel mode must be 'full' or 'reduced', got '" + s + "'");
}

const char* mode_name(ChannelMode m)
{
    return m == ChannelMode::full ? "full" : "reduced";
}

Policy parse_policy(const std::string& name, const FileConfig& cfg)
{
    const auto need = [&](const std::optional<double>& v, const char* what) {
        if (!v) {
            throw ParamError("policy " + name + " needs " + what);
        }
        return *v;
    };
    if (name == "NONE") {
        return NonePolicy{};
    }
    if (name == "DIB") {
        return DibPolicy{};
    }
    if (name == "FB") {
        return FbPolicy{};
    }
    if (name == "PERFECT_BF") {
        return PerfectBfPolicy{};
    }
    if (name == "DBB") {
        return DbbPolicy{need(cfg.delta_m, "delta_m")};
    }
    if (name == "PBB") {
        return PbbPolicy{need(cfg.p, "p")};
    }
    if (name == "HTB") {
        return HtbPolicy{need(cfg.gamma_w, "gamma_w"), cfg.max_iter.value_or(100)};
    }
    throw ParamError("unknown policy '" + name + "'");
}

json params_json(const SystemParams& p)
{
    return {
        {"antennas", p.antennas},       {"density_per_m2", p.density}, {"exclusion_m", p.exclusion_m},
        {"radius_m", p.radius_m},       {"pathloss_exp", p.pathloss_exp}, {"pt_w", p.pt_w},
        {"noise_w", p.noise_w},         {"tau_s", p.tau_s},            {"zeta", p.zeta},
        {"carrier_hz", p.carrier_hz},
    };
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << text;
    if (!out) {
        throw std::runtime_error("failed writing " + path.string());
    }
}

// Flags shared by every subcommand.
struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<unsigned> threads;
    std::optional<std::string> channel_mode;
    std::string out_dir = ".";
};

void add_common(CLI::App* cmd, CommonFlags& f)
{
    cmd->add_option("--config", f.config_path, "JSON config file (dBm or W for powers)");
    cmd->add_option("--seed", f.seed, "master seed");
    cmd->add_option("--trials", f.trials, "Monte Carlo trials per point")->check(CLI::PositiveNumber);
    cmd->add_option("--threads", f.threads, "worker threads (0 = all cores)");
    cmd->add_option("--channel-mode", f.channel_mode, "full or reduced");
    cmd->add_option("--out", f.out_dir, "output directory");
}

FileConfig load(const CommonFlags& f)
{
    FileConfig cfg;
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in) {
            throw ParamError("cannot read config file " + f.config_path);
        }
        std::stringstream ss;
        ss << in.rdbuf();
        cfg = parse_config(ss.str());
    }
    if (f.seed) {
        cfg.seed = f.seed;
    }
    if (f.trials) {
        cfg.trials = f.trials;
    }
    if (f.threads) {
        cfg.threads = f.threads;
    }
    if (f.channel_mode) {
        cfg.channel_mode = f.channel_mode;
    }
    return cfg;
}

SweepSettings settings_from(const FileConfig& cfg)
{
    SweepSettings s;
    s.trials = cfg.trials.value_or(s.trials);
    s.seed = cfg.seed.value_or(s.seed);
    s.threads = cfg.threads.value_or(s.threads);
    if (cfg.channel_mode) {
        s.channel_mode = parse_mode(*cfg.channel_mode);
    }
    s.pt_grid_dbm = cfg.pt_grid_dbm.value_or(s.pt_grid_dbm);
    s.gamma_grid_w = cfg.gamma_grid_w.value_or(s.gamma_grid_w);
    s.p_grid = cfg.p_grid.value_or(s.p_grid);
    s.delta_points = cfg.delta_points.value_or(s.delta_points);
    return s;
}

json settings_json(const SweepSettings& s)
{
    return {{"trials", s.trials},           {"seed", s.seed},
            {"threads", s.threads},         {"channel_mode", mode_name(s.channel_mode)},
            {"pt_grid_dbm", s.pt_grid_dbm}, {"gamma_grid_w", s.gamma_grid_w},
            {"p_grid", s.p_grid},           {"delta_points", s.delta_points}};
}

class Manifest {
public:
    Manifest(std::string command, fs::path dir) : dir_(std::move(dir)), start_(std::chrono::steady_clock::now())
    {
        doc_["tool"] = "retrobeam";
        doc_["version"] = RETROBEAM_VERSION;
        doc_["command"] = std::move(command);
        doc_["outputs"] = json::array();
        doc_["notes"] = json::array();
    }

    json& doc() { return doc_; }

    void note(const std::string& text) { doc_["notes"].push_back(text); }

    fs::path emit(const std::string& name, const std::string& kind, const std::string& text)
    {
        const fs::path path = dir_ / name;
        write_text(path, text);
        doc_["outputs"].push_back({{"path", path.string()}, {"kind", kind}});
        return path;
    }

    void finish()
    {
        const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start_;
        doc_["wall_time_s"] = wall.count();
        write_text(dir_ / "manifest.json", doc_.dump(2) + "\n");
    }

private:
    fs::path dir_;
    std::chrono::steady_clock::time_point start_;
    json doc_;
};

fs::path prepare_dir(const std::string& dir)
{
    fs::path path(dir);
    fs::create_directories(path);
    return path;
}

std::vector<std::string> collect_warnings(const SystemParams& params)
{
    std::vector<std::string> warnings;
    validate_params(params, &warnings);
    for (const auto& w : warnings) {
        std::cerr << "warning: " << w << "\n";
    }
    return warnings;
}

int cmd_simulate(const CommonFlags& flags, const std::optional<std::string>& policy_flag,
                 const std::optional<double>& delta, const std::optional<double>& p,
                 const std::optional<double>& gamma, const std::optional<double>& tagged)
{
    FileConfig cfg = load(flags);
    if (delta) {
        cfg.delta_m = delta;
    }
    if (p) {
        cfg.p = p;
    }
    if (gamma) {
        cfg.gamma_w = gamma;
    }
    if (tagged) {
        cfg.tagged_distance_m = tagged;
    }
    const SystemParams params = resolve_params(cfg);
    const auto warnings = collect_warnings(params);
    const SweepSettings s = settings_from(cfg);

    ExperimentConfig ec;
    ec.params = params;
    ec.policy = parse_policy(policy_flag.value_or(cfg.policy.value_or("FB")), cfg);
    ec.trials = s.trials;
    ec.seed = s.seed;
    ec.threads = s.threads;
    ec.channel_mode = s.channel_mode;
    ec.tagged_distance = cfg.tagged_distance_m;
    const ExperimentResult r = run_policy_experiment(ec);

    CsvTable table;
    table.header = {"policy", "estimator", "mean_w", "stderr_w", "ci_low_w", "ci_high_w", "n", "empty_trials"};
    table.rows.push_back({policy_name(ec.policy), r.estimator, format_number(r.estimate.mean),
                          format_number(r.estimate.std_error), format_number(r.estimate.ci_low),
                          format_number(r.estimate.ci_high), std::to_string(r.estimate.n),
                          std::to_string(r.empty_trials)});

    Manifest manifest("simulate", prepare_dir(flags.out_dir));
    manifest.doc()["params"] = params_json(params);
    manifest.doc()["settings"] = settings_json(s);
    manifest.doc()["policy"] = policy_name(ec.policy);
    manifest.doc()["estimator"] = r.estimator;
    manifest.doc()["warnings"] = warnings;
    manifest.emit("simulate.csv", "csv", table.to_csv());
    manifest.finish();

    std::cout << policy_name(ec.policy) << " " << r.estimator << " mean_w=" << format_number(r.estimate.mean)
              << " stderr_w=" << format_number(r.estimate.std_error) << " n=" << r.estimate.n << "\n";
    return 0;
}

int cmd_analyze(const CommonFlags& flags, const std::string& sweep)
{
    const FileConfig cfg = load(flags);
    const SystemParams params = resolve_params(cfg);
    const auto warnings = collect_warnings(params);
    const SweepSettings s = settings_from(cfg);

    CsvTable table;
    if (sweep == "pt") {
        table.header = {"pt_dbm", "q_dib_w", "q_fb_w", "dense_limit_w", "sparse_limit_w"};
        for (double dbm : s.pt_grid_dbm) {
            SystemParams p = params;
            p.pt_w = dbm_to_watt(dbm);
            const auto limits = asymptotic_limits(p);
            table.rows.push_back({format_number(dbm), format_number(q_dib(p)),
                                  format_number(q_fb_total(p)), format_number(limits.dense),
                                  format_number(limits.sparse)});
        }
    } else if (sweep == "lambda") {
        table.header = {"density_per_m2", "q_fb_w", "dense_limit_w", "sparse_limit_w"};
        for (int e = -8; e <= 3; ++e) {
            SystemParams p = params;
            p.density = std::pow(10.0, e);
            const auto limits = asymptotic_limits(p);
            table.rows.push_back({format_number(p.density), format_number(q_fb_total(p)),
                                  format_number(limits.dense), format_number(limits.sparse)});
        }
    } else if (sweep == "delta") {
        table.header = {"delta_m", "q_dbb_w"};
        const std::size_t n = std::max<std::size_t>(s.delta_points, 2);
        for (std::size_t k = 0; k < n; ++k) {
            const double delta = params.exclusion_m + (params.radius_m - params.exclusion_m) *
                                                          static_cast<double>(k) / static_cast<double>(n - 1);
            table.rows.push_back({format_number(delta), format_number(q_dbb(delta, params))});
        }
    } else if (sweep == "p") {
        table.header = {"p", "q_pbb_w"};
        for (double pr : s.p_grid) {
            table.rows.push_back({format_number(pr), format_number(q_pbb(pr, params))});
        }
    } else {
        throw ParamError("unknown sweep '" + sweep + "' (pt, lambda, delta, p)");
    }

    Manifest manifest("analyze", prepare_dir(flags.out_dir));
    manifest.doc()["params"] = params_json(params);
    manifest.doc()["settings"] = settings_json(s);
    manifest.doc()["sweep"] = sweep;
    manifest.doc()["warnings"] = warnings;
    manifest.emit("analyze_" + sweep + ".csv", "csv", table.to_csv());
    manifest.finish();
    return 0;
}

int cmd_optimize(const CommonFlags& flags, const std::string& target, bool without_self)
{
    const FileConfig cfg = load(flags);
    const SystemParams params = resolve_params(cfg);
    collect_warnings(params);
    json result;
    if (target == "delta") {
        const OptResult r = delta_star(params);
        std::cout << "delta_star_m=" << format_number(r.argument) << " branch=" << to_string(r.branch)
                  << " objective_w=" << format_number(r.objective) << " bracketed=" << (r.bracketed ? 1 : 0)
                  << " residual_w=" << format_number(r.residual) << "\n";
        result = {{"delta_star_m", r.argument}, {"branch", to_string(r.branch)}, {"objective_w", r.objective},
                  {"bracketed", r.bracketed},   {"residual_w", r.residual}};
    } else if (target == "p") {
        const OptResult r = p_star(params, !without_self);
        std::cout << "p_star=" << format_number(r.argument) << " objective_w=" << format_number(r.objective)
                  << " include_self=" << (without_self ? 0 : 1) << "\n";
        result = {{"p_star", r.argument}, {"objective_w", r.objective}, {"include_self", !without_self}};
    } else {
        throw ParamError("optimize target must be 'delta' or 'p'");
    }
    if (!flags.out_dir.empty() && flags.out_dir != ".") {
        Manifest manifest("optimize", prepare_dir(flags.out_dir));
        manifest.doc()["params"] = params_json(params);
        manifest.emit("optimize_" + target + ".json", "json", result.dump(2) + "\n");
        manifest.finish();
    }
    return 0;
}

void emit_marker(Manifest& manifest, const std::string& name, const char* key, const Fig2Marker& m)
{
    const json marker{{key, m.argument}, {"objective_w", m.objective_w}, {"branch", m.branch}};
    manifest.emit(name, "marker", marker.dump(2) + "\n");
}

int cmd_reproduce(const CommonFlags& flags, const std::string& figure)
{
    const FileConfig cfg = load(flags);
    const bool fig2 = figure == "fig2a" || figure == "fig2b";
    const SystemParams params = resolve_params(cfg, fig2);
    const auto warnings = collect_warnings(params);
    const SweepSettings s = settings_from(cfg);

    Manifest manifest("reproduce", prepare_dir(flags.out_dir));
    manifest.doc()["figure"] = figure;
    manifest.doc()["params"] = params_json(params);
    manifest.doc()["settings"] = settings_json(s);
    manifest.doc()["warnings"] = warnings;

    const auto grid_note = [&](const char* name, bool from_config) {
        manifest.note(std::string(name) + (from_config ? ": from config" : ": built-in default"));
    };
    if (figure == "fig1") {
        manifest.doc()["estimator"] = "population_mean";
        grid_note("pt_grid_dbm", cfg.pt_grid_dbm.has_value());
        manifest.emit("fig1.csv", "csv", fig1_table(params, s).to_csv());
    } else if (figure == "fig2a") {
        Fig2Marker marker;
        manifest.doc()["estimator"] = "tagged_er";
        grid_note("delta_points", cfg.delta_points.has_value());
        const CsvTable table = fig2a_table(params, s, &marker);
        manifest.emit("fig2a.csv", "csv", table.to_csv());
        emit_marker(manifest, "fig2a_marker.json", "delta_star_m", marker);
    } else if (figure == "fig2b") {
        Fig2Marker marker;
        manifest.doc()["estimator"] = "tagged_er";
        grid_note("p_grid", cfg.p_grid.has_value());
        const CsvTable table = fig2b_table(params, s, &marker);
        manifest.emit("fig2b.csv", "csv", table.to_csv());
        emit_marker(manifest, "fig2b_marker.json", "p_star", marker);
    } else if (figure == "fig3") {
        manifest.doc()["estimator"] = "pooled_er_fraction";
        grid_note("pt_grid_dbm", cfg.pt_grid_dbm.has_value());
        grid_note("gamma_grid_w", cfg.gamma_grid_w.has_value());
        manifest.emit("fig3.csv", "csv", fig3_table(params, s).to_csv());
    } else {
        throw ParamError("unknown figure '" + figure + "' (fig1, fig2a, fig2b, fig3)");
    }
    manifest.finish();
    return 0;
}

}  // namespace

FileConfig parse_config(const std::string& json_text)
{
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParamError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ParamError("config must be a JSON object");
    }
    static const std::set<std::string> known{
        "antennas",      "density_per_m2", "exclusion_m",  "radius_m",     "pathloss_exp", "pt_dbm",
        "pt_w",          "noise_dbm",      "noise_w",      "tau_s",        "zeta",         "carrier_hz",
        "pt_grid_dbm",   "gamma_grid_w",   "p_grid",       "delta_points", "trials",       "seed",
        "threads",       "channel_mode",   "policy",       "delta_m",      "p",            "gamma_w",
        "max_iter",      "tagged_distance_m"};
    for (const auto& [key, value] : doc.items()) {
        if (!known.contains(key)) {
            throw ParamError("unknown config key '" + key + "'");
        }
    }

    FileConfig cfg;
    cfg.antennas = take<unsigned>(doc, "antennas");
    cfg.density = take<double>(doc, "density_per_m2");
    cfg.exclusion_m = take<double>(doc, "exclusion_m");
    cfg.radius_m = take<double>(doc, "radius_m");
    cfg.pathloss_exp = take<double>(doc, "pathloss_exp");
    cfg.pt_w = take_power(doc, "pt_dbm", "pt_w");
    cfg.noise_w = take_power(doc, "noise_dbm", "noise_w");
    cfg.tau_s = take<double>(doc, "tau_s");
    cfg.zeta = take<double>(doc, "zeta");
    cfg.carrier_hz = take<double>(doc, "carrier_hz");
    cfg.pt_grid_dbm = take<std::vector<double>>(doc, "pt_grid_dbm");
    cfg.gamma_grid_w = take<std::vector<double>>(doc, "gamma_grid_w");
    cfg.p_grid = take<std::vector<double>>(doc, "p_grid");
    cfg.delta_points = take<std::size_t>(doc, "delta_points");
    cfg.trials = take<std::size_t>(doc, "trials");
    cfg.seed = take<std::uint64_t>(doc, "seed");
    cfg.threads = take<unsigned>(doc, "threads");
    cfg.channel_mode = take<std::string>(doc, "channel_mode");
    cfg.policy = take<std::string>(doc, "policy");
    cfg.delta_m = take<double>(doc, "delta_m");
    cfg.p = take<double>(doc, "p");
    cfg.gamma_w = take<double>(doc, "gamma_w");
    cfg.max_iter = take<std::size_t>(doc, "max_iter");
    cfg.tagged_distance_m = take<double>(doc, "tagged_distance_m");
    if (cfg.channel_mode) {
        parse_mode(*cfg.channel_mode);
    }
    return cfg;
}

SystemParams resolve_params(const FileConfig& file, bool fig2)
{
    SystemParams p;  // M=500, lambda=0.01, xi=2, rho=30, alpha=3, -150 dBm, 10 ns, zeta=1, 900 MHz
    p.pt_w = 1.0;
    if (fig2) {
        p.exclusion_m = 8.0;
        p.pt_w = dbm_to_watt(40.0);
    }
    p.antennas = file.antennas.value_or(p.antennas);
    p.density = file.density.value_or(p.density);
    p.exclusion_m = file.exclusion_m.value_or(p.exclusion_m);
    p.radius_m = file.radius_m.value_or(p.radius_m);
    p.pathloss_exp = file.pathloss_exp.value_or(p.pathloss_exp);
    p.pt_w = file.pt_w.value_or(p.pt_w);
    p.noise_w = file.noise_w.value_or(p.noise_w);
    p.tau_s = file.tau_s.value_or(p.tau_s);
    p.zeta = file.zeta.value_or(p.zeta);
    p.carrier_hz = file.carrier_hz.value_or(p.carrier_hz);
    return validate_params(p);
}

int run(int argc, const char* const* argv)
{
    CLI::App app{"Retrodirective backscatter energy beamforming: simulation and analysis"};
    app.require_subcommand(1);
    app.set_version_flag("--version", RETROBEAM_VERSION);

    CommonFlags sim_flags;
    std::optional<std::string> policy;
    std::optional<double> delta;
    std::optional<double> prob;
    std::optional<double> gamma;
    std::optional<double> tagged;
    auto* sim = app.add_subcommand("simulate", "run one Monte Carlo experiment");
    add_common(sim, sim_flags);
    sim->add_option("--policy", policy, "NONE, DIB, FB, DBB, PBB, HTB or PERFECT_BF");
    sim->add_option("--delta", delta, "DBB distance threshold (m)");
    sim->add_option("--p", prob, "PBB reflection probability");
    sim->add_option("--gamma", gamma, "HTB target (W)");
    sim->add_option("--tagged-distance", tagged, "pin a tagged ER at this distance (m)");

    CommonFlags an_flags;
    std::string sweep = "pt";
    auto* analyze = app.add_subcommand("analyze", "evaluate the analytic averages over a sweep");
    add_common(analyze, an_flags);
    analyze->add_option("--sweep", sweep, "pt, lambda, delta or p");

    CommonFlags opt_flags;
    std::string target;
    bool without_self = false;
    auto* optimize = app.add_subcommand("optimize", "compute the DBB threshold or PBB probability");
    add_common(optimize, opt_flags);
    optimize->add_option("target", target, "delta or p")->required();
    optimize->add_flag("--exclude-self", without_self, "p*: drop the edge ER's own reflection probability");

    CommonFlags rep_flags;
    std::string figure;
    auto* reproduce = app.add_subcommand("reproduce", "run a figure sweep and write CSV + manifest");
    add_common(reproduce, rep_flags);
    reproduce->add_option("figure", figure, "fig1, fig2a, fig2b or fig3")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (sim->parsed()) {
            return cmd_simulate(sim_flags, policy, delta, prob, gamma, tagged);
        }
        if (analyze->parsed()) {
            return cmd_analyze(an_flags, sweep);
        }
        if (optimize->parsed()) {
            return cmd_optimize(opt_flags, target, without_self);
        }
        return cmd_reproduce(rep_flags, figure);
    } catch (const ParamError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace retrobeam::cli
