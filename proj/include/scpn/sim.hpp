// Scenario instantiation, task generation and the paired-trial experiment
// harness (regime comparison and one-parameter sweeps).
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "scpn/constellation.hpp"
#include "scpn/sched.hpp"

namespace scpn {

/// Closed interval used for uniform sampling.
struct Range {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] bool valid() const { return std::isfinite(lo) && std::isfinite(hi) && lo < hi; }
    [[nodiscard]] double mid() const { return 0.5 * (lo + hi); }
};

struct ScenarioConfig {
    WalkerConfig walker;
    EciVector sun_direction{1.0, 0.0, 0.0};
    double earth_radius_m = constants::earth_radius_m;
    double mu_m3s2 = constants::earth_mu_m3s2;
    double solar_constant_wm2 = constants::solar_constant_wm2;

    Range panel_area_m2{3.0, 15.0};
    Range panel_efficiency{0.05, 0.15};
    Range operational_power_w{50.0, 100.0};
    Range initial_soc{0.20, 0.95};

    double battery_capacity_wh = 1200.0;
    double min_soc = 0.20;
    double f_min_hz = 1e9;
    double f_max_hz = 4e9;
    double cpu_coeff = 1e-26;
    DegradationParams degradation;

    Range workload_cycles{1e11, 1e12};
    Range budget_s{25.0, 1000.0};
    int task_count = 1000;

    double horizon_s = 5400.0;
    double integration_dt_s = 1.0;
    std::uint64_t master_seed = 42;

    /// Throws std::invalid_argument naming the offending key.
    void validate() const {
        walker.validate();
        auto need = [](bool ok, const char *key) {
            if (!ok) throw std::invalid_argument(std::string("invalid value for '") + key + "'");
        };
        need(walker.altitude_m > 0.0, "altitude_km");
        need(walker.inclination_rad >= 0.0 && walker.inclination_rad <= std::numbers::pi,
             "inclination_deg");
        need(std::isfinite(sun_direction.norm()) && sun_direction.norm() > 0.0, "sun_direction");
        need(earth_radius_m >= 0.0, "earth_radius_m");
        need(mu_m3s2 > 0.0, "mu_m3s2");
        need(solar_constant_wm2 > 0.0, "solar_constant_wm2");
        need(panel_area_m2.valid() && panel_area_m2.lo > 0.0, "panel_area_m2");
        need(panel_efficiency.valid() && panel_efficiency.lo > 0.0 && panel_efficiency.hi < 1.0,
             "efficiency");
        need(operational_power_w.valid() && operational_power_w.lo > 0.0, "operational_power_w");
        need(initial_soc.valid() && initial_soc.lo >= 0.0 && initial_soc.hi <= 1.0, "initial_soc");
        need(battery_capacity_wh > 0.0, "battery_capacity_wh");
        need(min_soc > 0.0 && min_soc < 1.0, "min_soc");
        need(f_min_hz > 0.0 && f_min_hz <= f_max_hz, "f_min_hz");
        need(cpu_coeff > 0.0, "cpu_coeff");
        need(degradation.sigma > 0.0, "sigma");
        need(workload_cycles.valid() && workload_cycles.lo > 0.0, "workload_cycles");
        need(budget_s.valid() && budget_s.lo > 0.0, "budget_s");
        need(task_count > 0, "tasks");
        need(horizon_s > 0.0, "horizon_s");
        need(integration_dt_s > 0.0, "integration_dt_s");
    }
};

// ---------------------------------------------------------------------------
// Random streams
// ---------------------------------------------------------------------------

/// Named purposes; each (seed, purpose, index, sub) pair gets its own engine.
enum class Stream : std::uint32_t {
    Constellation = 1,
    Tasks = 2,
    Heuristic = 3,
    SweepArrivals = 4,
};

/**
 * Derives an engine from (master seed, stream, index, sub) with the
 * standard seed_seq mixing, so streams never depend on draw order elsewhere.
 */
inline Rng make_stream(std::uint64_t master_seed, Stream stream, std::uint64_t index = 0,
                       std::uint32_t sub = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                      static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32),
                      sub};
    return Rng(seq);
}

inline double draw(Rng &rng, Range r) { return std::uniform_real_distribution<double>(r.lo, r.hi)(rng); }

// ---------------------------------------------------------------------------
// Scenario
// ---------------------------------------------------------------------------

inline SatelliteSpec base_spec(const ScenarioConfig &cfg) {
    SatelliteSpec s;
    s.battery_capacity_wh = cfg.battery_capacity_wh;
    s.min_soc = cfg.min_soc;
    s.cpu_coeff = cfg.cpu_coeff;
    s.f_min_hz = cfg.f_min_hz;
    s.f_max_hz = cfg.f_max_hz;
    s.solar_constant_wm2 = cfg.solar_constant_wm2;
    return s;
}

/// Draws per-satellite attributes from the constellation stream.
inline Constellation instantiate(const ScenarioConfig &cfg) {
    cfg.validate();
    Constellation c;
    c.sun = SunModel(cfg.sun_direction);
    c.degradation = cfg.degradation;
    c.dt_s = cfg.integration_dt_s;

    std::vector<OrbitParams> orbits = walker_init(cfg.walker);
    Rng rng = make_stream(cfg.master_seed, Stream::Constellation);
    c.satellites.reserve(orbits.size());
    c.initial_states.reserve(orbits.size());
    for (OrbitParams &orbit : orbits) {
        orbit.earth_radius_m = cfg.earth_radius_m;
        orbit.mu_m3s2 = cfg.mu_m3s2;
        SatelliteSpec s = base_spec(cfg);
        s.orbit = orbit;
        s.panel_area_m2 = draw(rng, cfg.panel_area_m2);
        s.panel_efficiency = draw(rng, cfg.panel_efficiency);
        s.operational_power_w = draw(rng, cfg.operational_power_w);
        c.initial_states.push_back(BatteryState::from_soc(draw(rng, cfg.initial_soc)));
        c.satellites.push_back(s);
    }
    return c;
}

/// Arrivals uniform over the horizon; deadline = arrival + budget.
inline std::vector<TaskSpec> generate_tasks(const ScenarioConfig &cfg, int count, Rng &rng) {
    if (count <= 0) {
        throw std::invalid_argument("task count must be positive");
    }
    std::vector<TaskSpec> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        TaskSpec t;
        t.arrival_s = draw(rng, {0.0, cfg.horizon_s});
        t.workload_cycles = draw(rng, cfg.workload_cycles);
        t.deadline_s = t.arrival_s + draw(rng, cfg.budget_s);
        out.push_back(t);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

/// Runs body(i) for i in [0, n) on up to `threads` workers (0 = hardware).
template <typename Body>
void parallel_for(std::size_t n, unsigned threads, Body &&body) {
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto &t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

struct RunOptions {
    std::vector<HeuristicKind> heuristics{kSelectionHeuristics.begin(), kSelectionHeuristics.end()};
    GridSpec grid;
    unsigned threads = 0;
};

struct AggregateRow {
    double sweep_value = 0.0;
    HeuristicKind heuristic = HeuristicKind::Random;
    double mean_degradation = 0.0;
    double std_degradation = 0.0; ///< sample standard deviation (n - 1)
    std::size_t n_feasible = 0;
    std::size_t n_infeasible = 0;
};

struct ExperimentResult {
    std::vector<TrialResult> trials; ///< trial-major, heuristics in option order
    std::vector<AggregateRow> rows;
};

/**
 * Paired trials: every heuristic sees the same background snapshot, task and
 * feasible set. trial_ids are first_trial_id + position in `tasks`.
 */
inline std::vector<TrialResult> run_trials(const Constellation &c, const BackgroundTimeline &bg,
                                           const std::vector<TaskSpec> &tasks,
                                           std::uint64_t master_seed, const RunOptions &opt,
                                           std::size_t first_trial_id = 0) {
    const std::size_t nh = opt.heuristics.size();
    std::vector<TrialResult> out(tasks.size() * nh);
    const SchedulingContext ctx{c, bg};
    parallel_for(tasks.size(), opt.threads, [&](std::size_t i) {
        const TaskSpec &task = tasks[i];
        const std::size_t trial_id = first_trial_id + i;
        const bool need_candidates =
            std::any_of(opt.heuristics.begin(), opt.heuristics.end(),
                        [](HeuristicKind k) { return k != HeuristicKind::GridBaseline; });
        const std::vector<Candidate> feasible =
            need_candidates ? feasible_set(ctx, task) : std::vector<Candidate>{};
        for (std::size_t h = 0; h < nh; ++h) {
            Rng rng = make_stream(master_seed, Stream::Heuristic, trial_id,
                                  static_cast<std::uint32_t>(opt.heuristics[h]));
            TrialResult r = schedule(opt.heuristics[h], ctx, task, feasible, rng, opt.grid);
            r.trial_id = trial_id;
            out[i * nh + h] = r;
        }
    });
    return out;
}

/// Mean / sample std over feasible trials of one heuristic.
inline AggregateRow aggregate(std::span<const TrialResult> trials, HeuristicKind kind,
                              double sweep_value) {
    AggregateRow row;
    row.sweep_value = sweep_value;
    row.heuristic = kind;
    double sum = 0.0;
    for (const TrialResult &t : trials) {
        if (t.heuristic != kind) continue;
        if (t.infeasible()) {
            ++row.n_infeasible;
        } else {
            ++row.n_feasible;
            sum += t.cost->life_consumed;
        }
    }
    if (row.n_feasible == 0) {
        row.mean_degradation = std::nan("");
        row.std_degradation = std::nan("");
        return row;
    }
    row.mean_degradation = sum / static_cast<double>(row.n_feasible);
    double ss = 0.0;
    for (const TrialResult &t : trials) {
        if (t.heuristic != kind || t.infeasible()) continue;
        const double dev = t.cost->life_consumed - row.mean_degradation;
        ss += dev * dev;
    }
    row.std_degradation =
        row.n_feasible > 1 ? std::sqrt(ss / static_cast<double>(row.n_feasible - 1)) : 0.0;
    return row;
}

/**
 * Overall comparison at one panel-efficiency range. The aggregate rows carry
 * the midpoint of that range as sweep_value.
 */
inline ExperimentResult run_regime_experiment(ScenarioConfig cfg, Range efficiency,
                                              const RunOptions &opt, int n_tasks) {
    cfg.panel_efficiency = efficiency;
    cfg.task_count = n_tasks;
    cfg.validate();
    const Constellation c = instantiate(cfg);
    const BackgroundTimeline bg(c, cfg.horizon_s + cfg.budget_s.hi);
    Rng task_rng = make_stream(cfg.master_seed, Stream::Tasks);
    const std::vector<TaskSpec> tasks = generate_tasks(cfg, n_tasks, task_rng);

    ExperimentResult res;
    res.trials = run_trials(c, bg, tasks, cfg.master_seed, opt);
    for (HeuristicKind k : opt.heuristics) {
        res.rows.push_back(aggregate(res.trials, k, efficiency.mid()));
    }
    return res;
}

enum class SweepParameter : std::uint8_t { Workload, Budget };

struct SweepSpec {
    SweepParameter parameter = SweepParameter::Workload;
    std::vector<double> values;
    int trials_per_point = 1000;
    /// Budget [s] when sweeping workload, workload [cycles] when sweeping budget.
    double fixed = 1500.0;

    void validate() const {
        if (values.empty()) throw std::invalid_argument("sweep grid must not be empty");
        if (!std::is_sorted(values.begin(), values.end()))
            throw std::invalid_argument("sweep grid must be sorted");
        for (double v : values) {
            if (!(v > 0.0)) throw std::invalid_argument("sweep grid values must be positive");
        }
        if (!(fixed > 0.0)) throw std::invalid_argument("fixed sweep complement must be positive");
        if (trials_per_point <= 0) throw std::invalid_argument("trials per point must be positive");
    }
};

/// Grid of n points from lo to hi, geometric when `log_spaced`.
inline std::vector<double> make_grid(double lo, double hi, int n, bool log_spaced) {
    if (n <= 0 || !(lo > 0.0) || !(hi >= lo)) {
        throw std::invalid_argument("grid requires n > 0 and 0 < lo <= hi");
    }
    if (!log_spaced) {
        return even_points(lo, hi, n);
    }
    std::vector<double> logs = even_points(std::log(lo), std::log(hi), n);
    std::vector<double> out;
    out.reserve(logs.size());
    for (double l : logs) out.push_back(std::exp(l));
    out.front() = lo;
    if (n > 1) out.back() = hi;
    return out;
}

/**
 * One-parameter sweep. Arrival times are drawn once per trial index and
 * reused at every grid point, so points differ only in the swept parameter.
 */
inline ExperimentResult run_sweep(const ScenarioConfig &cfg, const SweepSpec &sweep,
                                  const RunOptions &opt) {
    cfg.validate();
    sweep.validate();
    const Constellation c = instantiate(cfg);
    const double max_budget = sweep.parameter == SweepParameter::Budget
                                  ? sweep.values.back()
                                  : sweep.fixed;
    const BackgroundTimeline bg(c, cfg.horizon_s + max_budget);

    std::vector<double> arrivals;
    arrivals.reserve(static_cast<std::size_t>(sweep.trials_per_point));
    for (int i = 0; i < sweep.trials_per_point; ++i) {
        Rng rng = make_stream(cfg.master_seed, Stream::SweepArrivals, static_cast<std::uint64_t>(i));
        arrivals.push_back(draw(rng, {0.0, cfg.horizon_s}));
    }

    ExperimentResult res;
    for (std::size_t p = 0; p < sweep.values.size(); ++p) {
        const double v = sweep.values[p];
        std::vector<TaskSpec> tasks;
        tasks.reserve(arrivals.size());
        for (double a : arrivals) {
            TaskSpec t;
            t.arrival_s = a;
            t.workload_cycles = sweep.parameter == SweepParameter::Workload ? v : sweep.fixed;
            t.deadline_s = a + (sweep.parameter == SweepParameter::Budget ? v : sweep.fixed);
            tasks.push_back(t);
        }
        std::vector<TrialResult> trials =
            run_trials(c, bg, tasks, cfg.master_seed, opt, p * arrivals.size());
        for (HeuristicKind k : opt.heuristics) {
            res.rows.push_back(aggregate(trials, k, v));
        }
        res.trials.insert(res.trials.end(), trials.begin(), trials.end());
    }
    return res;
}

} // namespace scpn
