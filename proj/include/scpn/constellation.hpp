// A concrete constellation and its task-free battery trajectory.
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "scpn/degradation.hpp"
#include "scpn/plan.hpp"
#include "scpn/power.hpp"

namespace scpn {

struct Constellation {
    std::vector<SatelliteSpec> satellites;
    std::vector<BatteryState> initial_states;
    SunModel sun;
    DegradationParams degradation;
    double dt_s = 1.0;

    [[nodiscard]] std::size_t size() const { return satellites.size(); }
};

/**
 * Battery state of every satellite under operational load and harvesting
 * only, tabulated at multiples of dt from t = 0.
 *
 * Off-grid queries take one partial step from the preceding grid point, so
 * at(s, t) equals what stepping from t = 0 with the same dt would produce.
 */
class BackgroundTimeline {
  public:
    BackgroundTimeline(const Constellation &c, double end_s) : dt_(c.dt_s), end_s_(end_s) {
        if (!(dt_ > 0.0)) throw std::invalid_argument("timeline dt must be positive");
        if (!(end_s >= 0.0)) throw std::invalid_argument("timeline end must be non-negative");
        if (c.initial_states.size() != c.satellites.size()) {
            throw std::invalid_argument("one initial battery state per satellite required");
        }
        const auto points = static_cast<std::size_t>(std::floor(end_s / dt_)) + 1;
        curves_.reserve(c.size());
        consumed_w_.reserve(c.size());
        capacity_j_.reserve(c.size());
        dod_.resize(c.size());
        for (std::size_t s = 0; s < c.size(); ++s) {
            const SatelliteSpec &spec = c.satellites[s];
            curves_.emplace_back(spec, c.sun);
            consumed_w_.push_back(spec.operational_power_w);
            capacity_j_.push_back(spec.capacity_j());

            std::vector<double> &dod = dod_[s];
            dod.resize(points);
            dod[0] = c.initial_states[s].dod;
            for (std::size_t k = 1; k < points; ++k) {
                const double rate = rate_at(s, static_cast<double>(k - 1) * dt_);
                dod[k] = step_battery({dod[k - 1]}, rate, dt_).dod;
            }
        }
    }

    [[nodiscard]] BatteryState at(SatelliteId s, double t) const {
        if (!(t >= 0.0 && t <= end_s_)) {
            throw std::out_of_range("background state requested outside the precomputed horizon");
        }
        const std::vector<double> &dod = dod_.at(s);
        auto k = static_cast<std::size_t>(std::floor(t / dt_));
        k = std::min(k, dod.size() - 1);
        const double grid_t = static_cast<double>(k) * dt_;
        const double h = t - grid_t;
        if (h <= 0.0) {
            return {dod[k]};
        }
        return step_battery({dod[k]}, rate_at(s, grid_t), h);
    }

    [[nodiscard]] std::vector<BatteryState> snapshot(double t) const {
        std::vector<BatteryState> out;
        out.reserve(dod_.size());
        for (std::size_t s = 0; s < dod_.size(); ++s) {
            out.push_back(at(s, t));
        }
        return out;
    }

    [[nodiscard]] const HarvestCurve &harvest(SatelliteId s) const { return curves_.at(s); }
    [[nodiscard]] double end_s() const { return end_s_; }
    [[nodiscard]] double dt_s() const { return dt_; }

  private:
    [[nodiscard]] double rate_at(std::size_t s, double t) const {
        return (consumed_w_[s] - curves_[s](t)) / capacity_j_[s];
    }

    double dt_;
    double end_s_;
    std::vector<HarvestCurve> curves_;
    std::vector<double> consumed_w_;
    std::vector<double> capacity_j_;
    std::vector<std::vector<double>> dod_;
};

/// Battery state of every satellite at time t with no tasks executed.
inline std::vector<BatteryState> background_state(const BackgroundTimeline &timeline, double t) {
    return timeline.snapshot(t);
}

} // namespace scpn
