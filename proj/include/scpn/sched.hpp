// Single-task scheduling: the shared local frequency policy, the four
// satellite-selection heuristics and a discretized near-optimal baseline.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "scpn/constellation.hpp"
#include "scpn/degradation.hpp"
#include "scpn/plan.hpp"

namespace scpn {

using Rng = std::mt19937_64;

enum class HeuristicKind : std::uint8_t {
    Random,
    DodFirst,
    MinPowerDeficit,
    MinNetEnergyCost,
    GridBaseline,
};

inline constexpr std::array<HeuristicKind, 4> kSelectionHeuristics = {
    HeuristicKind::Random, HeuristicKind::DodFirst, HeuristicKind::MinPowerDeficit,
    HeuristicKind::MinNetEnergyCost};

inline constexpr std::string_view to_string(HeuristicKind k) {
    switch (k) {
    case HeuristicKind::Random: return "random";
    case HeuristicKind::DodFirst: return "dod-first";
    case HeuristicKind::MinPowerDeficit: return "min-power-deficit";
    case HeuristicKind::MinNetEnergyCost: return "min-net-energy";
    case HeuristicKind::GridBaseline: return "grid";
    }
    return "unknown";
}

inline std::optional<HeuristicKind> parse_heuristic(std::string_view name) {
    for (auto k : {HeuristicKind::Random, HeuristicKind::DodFirst, HeuristicKind::MinPowerDeficit,
                   HeuristicKind::MinNetEnergyCost, HeuristicKind::GridBaseline}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    return std::nullopt;
}

enum class Infeasibility : std::uint8_t { None, Frequency, Battery };

struct PolicyOutcome {
    std::optional<ExecutionPlan> plan;
    Infeasibility reason = Infeasibility::None;
    DischargeTrace trace;

    explicit operator bool() const { return plan.has_value(); }
};

/**
 * Common local policy: start on arrival at the slowest frequency that meets
 * the deadline. Requests slower than f_min run at f_min and finish early.
 * The plan is then replayed against the battery; any step below the minimum
 * state of charge makes it infeasible.
 */
inline PolicyOutcome local_policy(const SatelliteSpec &spec, SatelliteId id, const TaskSpec &task,
                                  BatteryState at_arrival, const SunModel &sun,
                                  const DegradationParams &params, double dt) {
    PolicyOutcome out;
    const double required_hz = task.workload_cycles / task.budget_s();
    if (required_hz > spec.f_max_hz) {
        out.reason = Infeasibility::Frequency;
        return out;
    }
    const double freq = std::max(required_hz, spec.f_min_hz);
    ExecutionPlan plan = make_plan(spec, id, task, task.arrival_s, freq);
    out.trace = task_degradation(spec, params, plan, at_arrival, sun, dt);
    if (!out.trace.feasible) {
        out.reason = Infeasibility::Battery;
        return out;
    }
    out.plan = plan;
    return out;
}

/// A satellite that can run the task under the local policy.
struct Candidate {
    SatelliteId id = 0;
    ExecutionPlan plan;
    BatteryState state; ///< battery at task arrival
    DischargeTrace trace;
};

/// Read-only view shared by every heuristic within a trial.
struct SchedulingContext {
    const Constellation &constellation;
    const BackgroundTimeline &background;
};

/// Satellites with a feasible local-policy plan, in ascending id order.
inline std::vector<Candidate> feasible_set(const SchedulingContext &ctx, const TaskSpec &task) {
    const Constellation &c = ctx.constellation;
    std::vector<Candidate> out;
    for (SatelliteId s = 0; s < c.size(); ++s) {
        const BatteryState state = ctx.background.at(s, task.arrival_s);
        PolicyOutcome p =
            local_policy(c.satellites[s], s, task, state, c.sun, c.degradation, c.dt_s);
        if (p) {
            out.push_back({s, *p.plan, state, p.trace});
        }
    }
    return out;
}

inline std::optional<SatelliteId> select_random(std::span<const Candidate> feasible, Rng &rng) {
    if (feasible.empty()) {
        return std::nullopt;
    }
    std::uniform_int_distribution<std::size_t> pick(0, feasible.size() - 1);
    return feasible[pick(rng)].id;
}

/// Lowest depth of discharge; ties go to the lowest id.
inline std::optional<SatelliteId> select_dod_first(std::span<const Candidate> feasible) {
    const Candidate *best = nullptr;
    for (const Candidate &c : feasible) {
        if (best == nullptr || c.state.dod < best->state.dod ||
            (c.state.dod == best->state.dod && c.id < best->id)) {
            best = &c;
        }
    }
    return best ? std::optional(best->id) : std::nullopt;
}

/// Instantaneous harvested minus operational power at t_now [W].
inline double power_surplus_w(const SatelliteSpec &spec, const SunModel &sun, double t_now) {
    return harvested_power(spec, t_now, sun) - spec.operational_power_w;
}

/// Largest instantaneous power surplus; ties go to the lowest id.
inline std::optional<SatelliteId> select_min_power_deficit(std::span<const Candidate> feasible,
                                                           const Constellation &c, double t_now) {
    std::optional<SatelliteId> best;
    double best_surplus = 0.0;
    for (const Candidate &cand : feasible) {
        const double surplus = power_surplus_w(c.satellites[cand.id], c.sun, t_now);
        if (!best || surplus > best_surplus || (surplus == best_surplus && cand.id < *best)) {
            best = cand.id;
            best_surplus = surplus;
        }
    }
    return best;
}

/**
 * Energy consumed minus energy harvested over the plan window [J], sampled
 * with the same left-endpoint steps as the battery integrator.
 */
inline double net_energy_cost(const SatelliteSpec &spec, const ExecutionPlan &plan,
                              const SunModel &sun, double dt) {
    const HarvestCurve harvest(spec, sun);
    const double consumed = plan.task_power_w + spec.operational_power_w;
    const long steps =
        plan.duration_s > 0.0 ? static_cast<long>(std::ceil(plan.duration_s / dt - 1e-9)) : 0L;
    double total = 0.0;
    for (long k = 0; k < steps; ++k) {
        const double offset = static_cast<double>(k) * dt;
        const double h = (k == steps - 1) ? plan.duration_s - offset : dt;
        total += (consumed - harvest(plan.start_s + offset)) * h;
    }
    return total;
}

/**
 * Self-sustaining candidates (net energy <= 0) are drawn uniformly; if there
 * are none, the smallest positive net energy wins, ties to the lowest id.
 * Net energies come from each candidate's plan replay.
 */
inline std::optional<SatelliteId> select_min_net_energy(std::span<const Candidate> feasible,
                                                        Rng &rng) {
    if (feasible.empty()) {
        return std::nullopt;
    }
    std::vector<SatelliteId> surplus;
    for (const Candidate &c : feasible) {
        if (c.trace.net_energy_j <= 0.0) {
            surplus.push_back(c.id);
        }
    }
    if (!surplus.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, surplus.size() - 1);
        return surplus[pick(rng)];
    }
    const Candidate *best = &feasible.front();
    for (const Candidate &c : feasible) {
        if (c.trace.net_energy_j < best->trace.net_energy_j ||
            (c.trace.net_energy_j == best->trace.net_energy_j && c.id < best->id)) {
            best = &c;
        }
    }
    return best->id;
}

struct GridSpec {
    int n_start = 5;
    int n_freq = 5;
};

struct GridChoice {
    ExecutionPlan plan;
    DischargeTrace trace;
};

/// n points evenly spaced over [lo, hi]; a single point sits at lo.
inline std::vector<double> even_points(double lo, double hi, int n) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(std::max(n, 0)));
    for (int i = 0; i < n; ++i) {
        out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    }
    if (n > 1) {
        out.back() = hi;
    }
    return out;
}

/**
 * Exhaustive search over satellites x start times x frequencies. This is a
 * discretized near-optimal baseline, not an exact solution of the mixed
 * integer program. Ties prefer earlier start, then lower frequency, then
 * lower id.
 */
inline std::optional<GridChoice> grid_baseline(const SchedulingContext &ctx, const TaskSpec &task,
                                               GridSpec grid) {
    if (grid.n_start < 1 || grid.n_freq < 1) {
        throw std::invalid_argument("grid needs at least one start time and one frequency");
    }
    const Constellation &c = ctx.constellation;
    std::optional<GridChoice> best;
    auto key = [](const GridChoice &g) {
        return std::tuple(g.trace.cost.life_consumed, g.plan.start_s, g.plan.freq_hz,
                          g.plan.satellite_id);
    };
    for (SatelliteId s = 0; s < c.size(); ++s) {
        const SatelliteSpec &spec = c.satellites[s];
        const double last_start = task.deadline_s - task.workload_cycles / spec.f_max_hz;
        if (last_start < task.arrival_s) {
            continue;
        }
        for (double start : even_points(task.arrival_s, last_start, grid.n_start)) {
            const double f_lo =
                std::max(spec.f_min_hz, task.workload_cycles / (task.deadline_s - start));
            if (f_lo > spec.f_max_hz * (1.0 + 1e-12)) {
                continue;
            }
            const BatteryState state = ctx.background.at(s, start);
            for (double freq : even_points(std::min(f_lo, spec.f_max_hz), spec.f_max_hz,
                                           grid.n_freq)) {
                const ExecutionPlan plan = make_plan(spec, s, task, start, freq);
                if (plan.end_s() > task.deadline_s + 1e-9 * std::max(1.0, task.deadline_s)) {
                    continue;
                }
                GridChoice choice{plan, task_degradation(spec, c.degradation, plan, state, c.sun,
                                                         c.dt_s)};
                if (!choice.trace.feasible) {
                    continue;
                }
                if (!best || key(choice) < key(*best)) {
                    best = choice;
                }
            }
        }
    }
    return best;
}

/// One heuristic's decision for one task.
struct TrialResult {
    std::size_t trial_id = 0;
    HeuristicKind heuristic = HeuristicKind::Random;
    TaskSpec task;
    std::optional<ExecutionPlan> plan;
    std::optional<DegradationCost> cost;

    [[nodiscard]] bool infeasible() const { return !plan.has_value(); }
};

/**
 * Applies `kind` to a precomputed feasible set. All heuristics in a trial
 * should receive the same `feasible` so they are compared on one snapshot.
 */
inline TrialResult schedule(HeuristicKind kind, const SchedulingContext &ctx, const TaskSpec &task,
                            std::span<const Candidate> feasible, Rng &rng,
                            GridSpec grid = {}) {
    TrialResult r;
    r.heuristic = kind;
    r.task = task;
    if (kind == HeuristicKind::GridBaseline) {
        if (auto g = grid_baseline(ctx, task, grid)) {
            r.plan = g->plan;
            r.cost = g->trace.cost;
        }
        return r;
    }
    std::optional<SatelliteId> chosen;
    switch (kind) {
    case HeuristicKind::Random: chosen = select_random(feasible, rng); break;
    case HeuristicKind::DodFirst: chosen = select_dod_first(feasible); break;
    case HeuristicKind::MinPowerDeficit:
        chosen = select_min_power_deficit(feasible, ctx.constellation, task.arrival_s);
        break;
    case HeuristicKind::MinNetEnergyCost: chosen = select_min_net_energy(feasible, rng); break;
    case HeuristicKind::GridBaseline: break;
    }
    if (!chosen) {
        return r;
    }
    const auto it = std::find_if(feasible.begin(), feasible.end(),
                                 [&](const Candidate &c) { return c.id == *chosen; });
    r.plan = it->plan;
    r.cost = it->trace.cost;
    return r;
}

inline TrialResult schedule(HeuristicKind kind, const SchedulingContext &ctx, const TaskSpec &task,
                            Rng &rng, GridSpec grid = {}) {
    const std::vector<Candidate> feasible =
        kind == HeuristicKind::GridBaseline ? std::vector<Candidate>{} : feasible_set(ctx, task);
    return schedule(kind, ctx, task, feasible, rng, grid);
}

} // namespace scpn
