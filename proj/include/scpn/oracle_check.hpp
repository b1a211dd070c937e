// Runtime self-check: analytic degradation oracle, derivative identity,
// eclipse geometry and the scheduling invariants on a small seeded instance.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "scpn/degradation.hpp"
#include "scpn/sched.hpp"
#include "scpn/sim.hpp"

namespace scpn {

/// Net power held constant for a whole number of seconds.
struct ProfileSegment {
    double duration_s = 0.0;
    double net_power_w = 0.0;
};

using PowerProfile = std::vector<ProfileSegment>;

inline double profile_duration(const PowerProfile &p) {
    double total = 0.0;
    for (const auto &s : p) total += s.duration_s;
    return total;
}

/// Net power at time t (segments are half-open, t measured from profile start).
inline double profile_power(const PowerProfile &p, double t) {
    constexpr double boundary_tol = 1e-9;
    double edge = 0.0;
    for (const auto &s : p) {
        edge += s.duration_s;
        if (t < edge - boundary_tol) return s.net_power_w;
    }
    return p.empty() ? 0.0 : p.back().net_power_w;
}

/// Random profile with integer-second segments; at least one segment discharges.
inline PowerProfile random_profile(Rng &rng) {
    std::uniform_int_distribution<int> n_seg(2, 8), seconds(1, 200);
    std::uniform_real_distribution<double> power(-800.0, 800.0);
    PowerProfile p(static_cast<std::size_t>(n_seg(rng)));
    for (auto &s : p) {
        s.duration_s = seconds(rng);
        s.net_power_w = power(rng);
    }
    p.front().net_power_w = std::abs(p.front().net_power_w) + 1.0;
    return p;
}

/**
 * Closed-form cost: on each segment the DoD moves linearly (clamped to
 * [0, 1]) and a discharging segment costs g(d_end) - g(d_begin).
 */
inline double analytic_profile_cost(const DegradationParams &params, const PowerProfile &p,
                                    double d0, double capacity_j) {
    double d = d0, cost = 0.0;
    for (const auto &s : p) {
        const double next = std::clamp(d + s.net_power_w * s.duration_s / capacity_j, 0.0, 1.0);
        if (s.net_power_w > 0.0) {
            cost += integrated_consumption(params, next) - integrated_consumption(params, d);
        }
        d = next;
    }
    return cost;
}

enum class Mutation : std::uint8_t { None, FlipDodRateSign };

struct OracleCheckOptions {
    std::uint64_t seed = 42;
    double dt_s = 1.0;
    Mutation mutation = Mutation::None;
    int profiles = 100;
    int tasks = 50;
};

struct CheckResult {
    std::string name;
    bool passed = true;
    std::string detail;
};

struct OracleReport {
    std::vector<CheckResult> checks;
    double max_profile_residual = 0.0;

    [[nodiscard]] bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const auto &c) { return c.passed; });
    }
    [[nodiscard]] const CheckResult *first_failure() const {
        for (const auto &c : checks)
            if (!c.passed) return &c;
        return nullptr;
    }
};

/// Six satellites (2 planes x 3) with the default attribute ranges.
inline ScenarioConfig small_instance_config(std::uint64_t seed, double dt_s) {
    ScenarioConfig cfg;
    cfg.walker.planes = 2;
    cfg.walker.sats_per_plane = 3;
    cfg.walker.phasing = 1;
    cfg.master_seed = seed;
    cfg.integration_dt_s = dt_s;
    return cfg;
}

inline OracleReport run_oracle_checks(const OracleCheckOptions &opt) {
    OracleReport report;
    const DegradationParams params{};
    auto add = [&](std::string name, bool ok, std::string detail) {
        report.checks.push_back({std::move(name), ok, std::move(detail)});
    };

    {
        double worst = 0.0;
        constexpr double h = 1e-6;
        for (int i = 0; i <= 20; ++i) {
            const double d = 0.05 * i;
            const double fd = (integrated_consumption(params, d + h) -
                               integrated_consumption(params, d - h)) /
                              (2.0 * h);
            worst = std::max(worst, std::abs(fd - instantaneous_rate(params, d)));
        }
        add("derivative-identity", worst < 1e-6, "max |f - g'| = " + std::to_string(worst));
    }

    {
        const double capacity_j = 1200.0 * 3600.0;
        const double sign = opt.mutation == Mutation::FlipDodRateSign ? -1.0 : 1.0;
        Rng rng = make_stream(opt.seed, Stream::Tasks, 0, 0xC0);
        std::uniform_real_distribution<double> d0_dist(0.0, 0.5);
        double worst = 0.0;
        for (int i = 0; i < opt.profiles; ++i) {
            const PowerProfile p = random_profile(rng);
            const double d0 = d0_dist(rng);
            const double expected = analytic_profile_cost(params, p, d0, capacity_j);
            const DischargeTrace trace = integrate_discharge(
                params, {d0}, capacity_j, 1.0,
                [&](double t) { return sign * profile_power(p, t); }, 0.0, profile_duration(p),
                opt.dt_s);
            const double rel = std::abs(trace.cost.life_consumed - expected) /
                               std::max(std::abs(expected), 1e-300);
            worst = std::max(worst, rel);
        }
        report.max_profile_residual = worst;
        add("analytic-oracle", worst < 1e-4, "max relative residual = " + std::to_string(worst));
    }

    {
        const double low = integrated_consumption(params, 0.2) - integrated_consumption(params, 0.1);
        const double high = integrated_consumption(params, 0.9) - integrated_consumption(params, 0.8);
        add("path-dependence", high > low,
            "cost(0.8->0.9) / cost(0.1->0.2) = " + std::to_string(high / low));
    }

    {
        OrbitParams eq;
        const double frac = eclipse_fraction(eq, SunModel{}, std::min(opt.dt_s, 1.0));
        const double expected =
            std::asin(eq.earth_radius_m / eq.semi_major_axis()) / std::numbers::pi;
        add("eclipse-fraction", std::abs(frac - expected) < 1e-3,
            "sampled " + std::to_string(frac) + " vs analytic " + std::to_string(expected));
    }

    {
        const ScenarioConfig cfg = small_instance_config(opt.seed, opt.dt_s);
        const Constellation c = instantiate(cfg);
        const BackgroundTimeline bg(c, cfg.horizon_s + cfg.budget_s.hi);
        Rng task_rng = make_stream(opt.seed, Stream::Tasks);
        const std::vector<TaskSpec> tasks = generate_tasks(cfg, opt.tasks, task_rng);
        RunOptions run;
        run.heuristics.push_back(HeuristicKind::GridBaseline);
        run.threads = 1;
        const std::vector<TrialResult> trials = run_trials(c, bg, tasks, opt.seed, run);

        int dominance_violations = 0, deadline_violations = 0, battery_violations = 0;
        const std::size_t nh = run.heuristics.size();
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            const TrialResult &grid = trials[i * nh + nh - 1];
            for (std::size_t h = 0; h < nh; ++h) {
                const TrialResult &r = trials[i * nh + h];
                if (!r.plan) continue;
                if (r.plan->end_s() > r.task.deadline_s * (1.0 + 1e-12)) ++deadline_violations;
                const DischargeTrace replay = task_degradation(
                    c.satellites[r.plan->satellite_id], c.degradation, *r.plan,
                    bg.at(r.plan->satellite_id, r.plan->start_s), c.sun, c.dt_s);
                if (!replay.feasible) ++battery_violations;
                if (h + 1 < nh && (!grid.cost || grid.cost->life_consumed > r.cost->life_consumed)) {
                    ++dominance_violations;
                }
            }
        }
        add("grid-dominance", dominance_violations == 0,
            std::to_string(dominance_violations) + " trials where a heuristic beat the grid");
        add("deadline", deadline_violations == 0,
            std::to_string(deadline_violations) + " plans past their deadline");
        add("battery-safety", battery_violations == 0,
            std::to_string(battery_violations) + " plans below minimum state of charge");
    }
    return report;
}

} // namespace scpn
