// scpn: command-line front end for the constellation battery-aging experiments.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "scpn/config.hpp"
#include "scpn/oracle_check.hpp"
#include "scpn/report.hpp"
#include "scpn/sim.hpp"

namespace fs = std::filesystem;
using namespace scpn;

namespace {

enum ExitCode : int { kOk = 0, kConfigError = 1, kIoError = 2, kInvariantViolation = 3 };

class IoError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<double> dt;
    unsigned threads = 0;
    bool force = false;
    std::vector<std::string> heuristics;
    int grid_starts = 5;
    int grid_freqs = 5;
    std::string efficiency;
};

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, sep);) parts.push_back(item);
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

double parse_double(const std::string &text, const std::string &key) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
        return v;
    } catch (const std::logic_error &) {
        throw ConfigError(key, "not a number: '" + text + "'");
    }
}

Range parse_range(const std::string &text, const std::string &key) {
    const auto parts = split(text, ':');
    if (parts.size() != 2) throw ConfigError(key, "expected lo:hi, got '" + text + "'");
    Range r{parse_double(parts[0], key), parse_double(parts[1], key)};
    if (!r.valid()) throw ConfigError(key, "range must satisfy lo < hi, got '" + text + "'");
    return r;
}

std::vector<double> parse_grid(const std::string &text, const std::string &key, bool log_spaced) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ConfigError(key, "expected lo:hi:n, got '" + text + "'");
    const double lo = parse_double(parts[0], key);
    const double hi = parse_double(parts[1], key);
    const double n = parse_double(parts[2], key);
    if (n < 1.0 || n != std::floor(n)) throw ConfigError(key, "grid needs a positive integer count");
    if (!(lo > 0.0) || hi < lo) throw ConfigError(key, "grid needs 0 < lo <= hi");
    return make_grid(lo, hi, static_cast<int>(n), log_spaced);
}

std::optional<std::uint64_t> env_seed() {
    const char *raw = std::getenv("SCPN_SEED");
    if (raw == nullptr || *raw == '\0') return std::nullopt;
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(raw, &used);
        if (used != std::string(raw).size()) throw std::invalid_argument(raw);
        return v;
    } catch (const std::logic_error &) {
        throw ConfigError("SCPN_SEED", "not an unsigned integer");
    }
}

/// Config file, then environment seed, then command-line overrides.
ScenarioConfig resolve_config(const CommonArgs &args) {
    LoadedConfig loaded;
    if (!args.config_path.empty()) {
        try {
            loaded = load_config_file(args.config_path);
        } catch (const std::ios_base::failure &e) {
            throw IoError(e.what());
        }
    }
    ScenarioConfig cfg = loaded.scenario;
    if (!loaded.seed_from_file) {
        if (auto s = env_seed()) cfg.master_seed = *s;
    }
    if (args.seed) cfg.master_seed = *args.seed;
    if (args.dt) {
        if (!(*args.dt > 0.0)) throw ConfigError("dt", "must be positive");
        cfg.integration_dt_s = *args.dt;
    }
    if (!args.efficiency.empty()) {
        const Range eff = parse_range(args.efficiency, "efficiency");
        if (!(eff.lo > 0.0 && eff.hi < 1.0)) throw ConfigError("efficiency", "must lie in (0, 1)");
        cfg.panel_efficiency = eff;
    }
    try {
        cfg.validate();
    } catch (const std::invalid_argument &e) {
        throw ConfigError("config", e.what());
    }
    return cfg;
}

RunOptions resolve_run_options(const CommonArgs &args) {
    RunOptions opt;
    if (!args.heuristics.empty()) {
        opt.heuristics.clear();
        for (const std::string &name : args.heuristics) {
            const auto kind = parse_heuristic(name);
            if (!kind) throw ConfigError("heuristic", "unknown heuristic '" + name + "'");
            opt.heuristics.push_back(*kind);
        }
    }
    if (args.grid_starts < 1) throw ConfigError("grid-starts", "must be >= 1");
    if (args.grid_freqs < 1) throw ConfigError("grid-freqs", "must be >= 1");
    opt.grid = {args.grid_starts, args.grid_freqs};
    opt.threads = args.threads;
    return opt;
}

void prepare_out_dir(const CommonArgs &args) {
    std::error_code ec;
    fs::create_directories(args.out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + args.out_dir + "': " + ec.message());
    if (fs::exists(fs::path(args.out_dir) / "manifest.json") && !args.force) {
        throw IoError("'" + args.out_dir + "' already holds a manifest; pass --force to overwrite");
    }
}

template <typename Writer>
void write_file(const fs::path &path, Writer &&writer) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
    writer(os);
    os.flush();
    if (!os) throw IoError("write to '" + path.string() + "' failed");
}

void write_outputs(const CommonArgs &args, const ScenarioConfig &cfg, const RunOptions &opt,
                   const ExperimentResult &res, nlohmann::json manifest) {
    const fs::path dir(args.out_dir);
    write_file(dir / "trials.csv", [&](std::ostream &os) { write_trials_csv(os, res.trials); });
    write_file(dir / "aggregate.csv", [&](std::ostream &os) { write_aggregate_csv(os, res.rows); });

    nlohmann::json heuristics = nlohmann::json::array();
    for (HeuristicKind k : opt.heuristics) heuristics.push_back(std::string(to_string(k)));
    manifest["heuristics"] = heuristics;
    manifest["grid_baseline"] = {{"n_start", opt.grid.n_start},
                                 {"n_freq", opt.grid.n_freq},
                                 {"note", "discretized near-optimal baseline, not the exact MINLP optimum"}};
    manifest["config"] = config_to_json(cfg);
    manifest["seed"] = cfg.master_seed;
    manifest["satellites"] = constellation_to_json(instantiate(cfg), cfg.walker);
    write_file(dir / "manifest.json", [&](std::ostream &os) { os << manifest.dump(2) << '\n'; });
}

void print_summary(const std::vector<AggregateRow> &rows) {
    std::cout << std::left << std::setw(14) << "value" << std::setw(20) << "heuristic"
              << std::setw(16) << "mean" << std::setw(16) << "std" << std::setw(10) << "feasible"
              << "infeasible\n";
    for (const AggregateRow &r : rows) {
        std::cout << std::left << std::setw(14) << format_number(r.sweep_value) << std::setw(20)
                  << to_string(r.heuristic) << std::setw(16) << std::setprecision(6)
                  << r.mean_degradation << std::setw(16) << r.std_degradation << std::setw(10)
                  << r.n_feasible << r.n_infeasible << '\n';
    }
}

void add_common(CLI::App *cmd, CommonArgs &args, bool needs_output) {
    cmd->add_option("-c,--config", args.config_path, "Scenario config file (JSON)");
    if (needs_output) {
        cmd->add_option("-o,--out", args.out_dir, "Output directory")->required();
        cmd->add_flag("--force", args.force, "Overwrite an existing run directory");
        cmd->add_option("--heuristic", args.heuristics,
                        "random|dod-first|min-power-deficit|min-net-energy|grid")
            ->delimiter(',');
        cmd->add_option("--grid-starts", args.grid_starts, "Grid baseline start-time points");
        cmd->add_option("--grid-freqs", args.grid_freqs, "Grid baseline frequency points");
        cmd->add_option("--threads", args.threads, "Worker threads (0 = all cores)");
    }
    cmd->add_option("--seed", args.seed, "Master seed");
    cmd->add_option("--dt", args.dt, "Integration step [s]");
    cmd->add_option("--efficiency", args.efficiency, "Panel efficiency range lo:hi");
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Battery-aging simulator and scheduler for LEO computing constellations"};
    app.require_subcommand(1);

    CommonArgs regime_args;
    std::optional<int> regime_tasks;
    auto *regime = app.add_subcommand("regime", "Compare heuristics at one panel-efficiency range");
    add_common(regime, regime_args, true);
    regime->add_option("--tasks", regime_tasks, "Number of task trials");

    CommonArgs wl_args;
    std::string wl_grid;
    double wl_budget = 1500.0;
    int wl_trials = 1000;
    auto *sweep_wl = app.add_subcommand("sweep-workload", "Sweep task workload at a fixed time budget");
    add_common(sweep_wl, wl_args, true);
    sweep_wl->add_option("--grid", wl_grid, "Workload grid lo:hi:n (log-spaced)")->required();
    sweep_wl->add_option("--budget", wl_budget, "Fixed time budget [s]");
    sweep_wl->add_option("--trials", wl_trials, "Arrival samples per grid point");

    CommonArgs bd_args;
    std::string bd_grid;
    double bd_workload = 1e12;
    int bd_trials = 1000;
    auto *sweep_bd = app.add_subcommand("sweep-budget", "Sweep time budget at a fixed workload");
    add_common(sweep_bd, bd_args, true);
    sweep_bd->add_option("--grid", bd_grid, "Budget grid lo:hi:n (linear)")->required();
    sweep_bd->add_option("--workload", bd_workload, "Fixed workload [cycles]");
    sweep_bd->add_option("--trials", bd_trials, "Arrival samples per grid point");

    CommonArgs val_args;
    auto *validate = app.add_subcommand("validate", "Resolve and check a configuration");
    add_common(validate, val_args, false);

    CommonArgs oc_args;
    std::string mutate = "none";
    int oc_tasks = 50;
    auto *oracle = app.add_subcommand("oracle-check", "Run the analytic-oracle and invariant checks");
    oracle->add_option("--seed", oc_args.seed, "Master seed");
    oracle->add_option("--dt", oc_args.dt, "Integration step [s]");
    oracle->add_option("--tasks", oc_tasks, "Tasks on the six-satellite instance");
    oracle->add_option("--mutate", mutate, "Test hook: none|dod-rate-sign")
        ->check(CLI::IsMember({"none", "dod-rate-sign"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (*regime) {
            ScenarioConfig cfg = resolve_config(regime_args);
            if (regime_tasks) {
                if (*regime_tasks <= 0) throw ConfigError("tasks", "must be positive");
                cfg.task_count = *regime_tasks;
            }
            const RunOptions opt = resolve_run_options(regime_args);
            prepare_out_dir(regime_args);
            const ExperimentResult res =
                run_regime_experiment(cfg, cfg.panel_efficiency, opt, cfg.task_count);
            nlohmann::json m;
            m["command"] = "regime";
            m["efficiency"] = {cfg.panel_efficiency.lo, cfg.panel_efficiency.hi};
            m["tasks"] = cfg.task_count;
            write_outputs(regime_args, cfg, opt, res, m);
            print_summary(res.rows);
            return kOk;
        }
        if (*sweep_wl || *sweep_bd) {
            const bool workload = static_cast<bool>(*sweep_wl);
            const CommonArgs &args = workload ? wl_args : bd_args;
            const ScenarioConfig cfg = resolve_config(args);
            SweepSpec sweep;
            sweep.parameter = workload ? SweepParameter::Workload : SweepParameter::Budget;
            sweep.values = parse_grid(workload ? wl_grid : bd_grid, "grid", workload);
            sweep.fixed = workload ? wl_budget : bd_workload;
            sweep.trials_per_point = workload ? wl_trials : bd_trials;
            if (!(sweep.fixed > 0.0)) throw ConfigError(workload ? "budget" : "workload", "must be positive");
            if (sweep.trials_per_point <= 0) throw ConfigError("trials", "must be positive");
            const RunOptions opt = resolve_run_options(args);
            prepare_out_dir(args);
            const ExperimentResult res = run_sweep(cfg, sweep, opt);
            nlohmann::json m;
            m["command"] = workload ? "sweep-workload" : "sweep-budget";
            m["sweep"] = {{"parameter", workload ? "workload_cycles" : "budget_s"},
                          {"values", sweep.values},
                          {"fixed", sweep.fixed},
                          {"trials_per_point", sweep.trials_per_point}};
            write_outputs(args, cfg, opt, res, m);
            print_summary(res.rows);
            return kOk;
        }
        if (*validate) {
            const ScenarioConfig cfg = resolve_config(val_args);
            const Constellation c = instantiate(cfg);
            std::cout << config_to_json(cfg).dump(2) << '\n';
            std::cout << "satellites: " << c.size() << ", orbital period: "
                      << c.satellites.front().orbit.period_s() << " s\n";
            return kOk;
        }
        if (*oracle) {
            OracleCheckOptions opt;
            opt.seed = oc_args.seed.value_or(env_seed().value_or(42));
            opt.dt_s = oc_args.dt.value_or(1.0);
            if (!(opt.dt_s > 0.0)) throw ConfigError("dt", "must be positive");
            opt.tasks = oc_tasks;
            opt.mutation = mutate == "dod-rate-sign" ? Mutation::FlipDodRateSign : Mutation::None;
            const OracleReport report = run_oracle_checks(opt);
            for (const CheckResult &c : report.checks) {
                std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
            }
            std::cout << "analytic-oracle residual: " << std::setprecision(6)
                      << report.max_profile_residual << '\n';
            if (const CheckResult *bad = report.first_failure()) {
                std::cerr << "invariant violated: " << bad->name << '\n';
                return kInvariantViolation;
            }
            return kOk;
        }
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const IoError &e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kIoError;
    } catch (const std::ios_base::failure &e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kIoError;
    } catch (const fs::filesystem_error &e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kIoError;
    } catch (const std::invalid_argument &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    }
    return kOk;
}
