// CSV and manifest writers for experiment output.
#pragma once

#include <charconv>
#include <cmath>
#include <ostream>
#include <span>
#include <string>
#include <system_error>

#include <json.hpp>

#include "scpn/config.hpp"
#include "scpn/sim.hpp"

namespace scpn {

inline constexpr std::string_view kTrialCsvHeader =
    "trial_id,heuristic,task_workload_cycles,task_arrival_s,task_budget_s,satellite_id,freq_hz,"
    "start_s,duration_s,degradation,infeasible";
inline constexpr std::string_view kAggregateCsvHeader =
    "sweep_value,heuristic,mean_degradation,std_degradation,n_feasible,n_infeasible";

/// Shortest decimal form that parses back to the same double; NaN is written empty.
inline std::string format_number(double v) {
    if (std::isnan(v)) {
        return {};
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    if (res.ec != std::errc{}) {
        throw std::runtime_error("number formatting failed");
    }
    return {buf, res.ptr};
}

inline void write_trials_csv(std::ostream &os, std::span<const TrialResult> trials) {
    os << kTrialCsvHeader << '\n';
    for (const TrialResult &t : trials) {
        os << t.trial_id << ',' << to_string(t.heuristic) << ','
           << format_number(t.task.workload_cycles) << ',' << format_number(t.task.arrival_s)
           << ',' << format_number(t.task.budget_s()) << ',';
        if (t.plan) {
            os << t.plan->satellite_id << ',' << format_number(t.plan->freq_hz) << ','
               << format_number(t.plan->start_s) << ',' << format_number(t.plan->duration_s)
               << ',' << format_number(t.cost->life_consumed) << ",0\n";
        } else {
            os << ",,,,,1\n";
        }
    }
}

inline void write_aggregate_csv(std::ostream &os, std::span<const AggregateRow> rows) {
    os << kAggregateCsvHeader << '\n';
    for (const AggregateRow &r : rows) {
        os << format_number(r.sweep_value) << ',' << to_string(r.heuristic) << ','
           << format_number(r.mean_degradation) << ',' << format_number(r.std_degradation) << ','
           << r.n_feasible << ',' << r.n_infeasible << '\n';
    }
}

/// Sampled per-satellite attributes, as drawn by instantiate().
inline nlohmann::json constellation_to_json(const Constellation &c, const WalkerConfig &w) {
    nlohmann::json sats = nlohmann::json::array();
    for (std::size_t s = 0; s < c.size(); ++s) {
        const SatelliteSpec &spec = c.satellites[s];
        sats.push_back({
            {"id", s},
            {"plane", static_cast<int>(s) / w.sats_per_plane},
            {"slot", static_cast<int>(s) % w.sats_per_plane},
            {"raan_rad", spec.orbit.raan_rad},
            {"arg_latitude0_rad", spec.orbit.arg_latitude0_rad},
            {"panel_area_m2", spec.panel_area_m2},
            {"panel_efficiency", spec.panel_efficiency},
            {"operational_power_w", spec.operational_power_w},
            {"initial_soc", c.initial_states[s].soc()},
        });
    }
    return sats;
}

} // namespace scpn
