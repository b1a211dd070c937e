#pragma once

#include <cstddef>
#include <stdexcept>

#include "scpn/power.hpp"

namespace scpn {

using SatelliteId = std::size_t;

struct TaskSpec {
    double workload_cycles = 1e12;
    double arrival_s = 0.0;
    double deadline_s = 1000.0;

    [[nodiscard]] double budget_s() const { return deadline_s - arrival_s; }

    void validate() const {
        if (!(workload_cycles > 0.0)) throw std::invalid_argument("task workload must be positive");
        if (!(deadline_s > arrival_s)) throw std::invalid_argument("task deadline must follow arrival");
    }
};

/// Where, when and how fast a task runs.
struct ExecutionPlan {
    SatelliteId satellite_id = 0;
    double start_s = 0.0;
    double freq_hz = 0.0;
    double duration_s = 0.0;
    double task_power_w = 0.0;

    [[nodiscard]] double end_s() const { return start_s + duration_s; }
};

inline ExecutionPlan make_plan(const SatelliteSpec &spec, SatelliteId id, const TaskSpec &task,
                               double start_s, double freq_hz) {
    return {id, start_s, freq_hz, task.workload_cycles / freq_hz, task_power(spec, freq_hz)};
}

} // namespace scpn
