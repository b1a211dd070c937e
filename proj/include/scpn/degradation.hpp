// Cycle-life battery aging and the path-dependent cost of a discharge trajectory.
//
// Costs are expressed as a fraction of the baseline life at 100% depth of
// discharge, so the cycle-life intercept epsilon never enters a cost.
#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "scpn/plan.hpp"
#include "scpn/power.hpp"

namespace scpn {

struct DegradationParams {
    double sigma = 0.8;
    /// Cycle-life intercept log10(L) + sigma*d = epsilon; informational only.
    std::optional<double> epsilon;

    void validate() const {
        if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    }
};

struct DegradationCost {
    double life_consumed = 0.0;
};

/// Cycles to end of life at a constant depth of discharge d in (0, 1].
inline double cycle_life(const DegradationParams &params, double epsilon, double d) {
    if (!(d > 0.0 && d <= 1.0)) {
        throw std::domain_error("cycle_life: depth of discharge must lie in (0, 1]");
    }
    return std::pow(10.0, epsilon - params.sigma * d);
}

/// Life consumed by one discharge from 0 to d: g(d) = d * 10^(sigma (d - 1)).
inline double integrated_consumption(const DegradationParams &params, double d) {
    return d * std::pow(10.0, params.sigma * (d - 1.0));
}

/// Marginal life consumed per unit of DoD at depth d, i.e. g'(d).
inline double instantaneous_rate(const DegradationParams &params, double d) {
    return std::pow(10.0, params.sigma * (d - 1.0)) *
           (1.0 + params.sigma * std::numbers::ln10 * d);
}

/// Everything learned from stepping a battery through a task window.
struct DischargeTrace {
    DegradationCost cost;
    BatteryState final_state;
    double peak_dod = 0.0;
    /// Integral of (consumed - harvested) over the window [J].
    double net_energy_j = 0.0;
    /// False if dod exceeded the allowed maximum at any visited step.
    bool feasible = true;
};

/**
 * Steps depth of discharge through [t_start, t_start + duration] with a
 * fixed step `dt` (the last step is shortened to land on the end time).
 *
 * `net_power_w(t)` returns consumed minus harvested power at time t and is
 * held constant across each step (left endpoint). Aging accrues only on steps
 * where the battery discharges, integrating the instantaneous rate over the
 * DoD increment with the trapezoidal rule.
 */
template <typename NetPowerFn>
DischargeTrace integrate_discharge(const DegradationParams &params, BatteryState initial,
                                   double capacity_j, double max_dod, NetPowerFn &&net_power_w,
                                   double t_start, double duration_s, double dt) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("integration step must be positive");
    }
    DischargeTrace out;
    double d = initial.dod;
    out.peak_dod = d;
    out.feasible = d <= max_dod;

    const long steps =
        duration_s > 0.0 ? static_cast<long>(std::ceil(duration_s / dt - 1e-9)) : 0L;
    double rate_at_d = 0.0;
    bool rate_valid = false;
    for (long k = 0; k < steps; ++k) {
        const double offset = static_cast<double>(k) * dt;
        const double h = (k == steps - 1) ? duration_s - offset : dt;
        const double p_net = net_power_w(t_start + offset);
        out.net_energy_j += p_net * h;

        const double rate = p_net / capacity_j;
        const double next = step_battery({d}, rate, h).dod;
        if (rate > 0.0 && next > d) {
            if (!rate_valid) {
                rate_at_d = instantaneous_rate(params, d);
            }
            const double rate_at_next = instantaneous_rate(params, next);
            out.cost.life_consumed += 0.5 * (rate_at_d + rate_at_next) * (next - d);
            rate_at_d = rate_at_next;
            rate_valid = true;
        } else {
            rate_valid = next == d && rate_valid;
        }
        d = next;
        if (d > out.peak_dod) {
            out.peak_dod = d;
        }
        if (d > max_dod) {
            out.feasible = false;
        }
    }
    out.final_state = {d};
    return out;
}

/// Ages `spec`'s battery along `plan`, starting from `initial` at plan.start_s.
inline DischargeTrace task_degradation(const SatelliteSpec &spec, const DegradationParams &params,
                                       const ExecutionPlan &plan, BatteryState initial,
                                       const SunModel &sun, double dt) {
    const HarvestCurve harvest(spec, sun);
    const double consumed = plan.task_power_w + spec.operational_power_w;
    return integrate_discharge(
        params, initial, spec.capacity_j(), spec.max_dod(),
        [&](double t) { return consumed - harvest(t); }, plan.start_s, plan.duration_s, dt);
}

} // namespace scpn
