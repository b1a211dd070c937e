// Solar harvesting, processor power and battery depth-of-discharge bookkeeping.
//
// Units: watts, seconds, joules. Battery capacity is configured in Wh and
// converted once through SatelliteSpec::capacity_j().
#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>

#include "scpn/orbit.hpp"

namespace scpn {

struct SatelliteSpec {
    double panel_area_m2 = 9.0;
    double panel_efficiency = 0.1;
    double operational_power_w = 75.0;
    double battery_capacity_wh = 1200.0;
    double min_soc = 0.20;
    double cpu_coeff = 1e-26; ///< W/Hz^3
    double f_min_hz = 1e9;
    double f_max_hz = 4e9;
    double solar_constant_wm2 = constants::solar_constant_wm2;
    OrbitParams orbit;

    [[nodiscard]] double capacity_j() const { return battery_capacity_wh * 3600.0; }
    /// Largest depth of discharge allowed while operating.
    [[nodiscard]] double max_dod() const { return 1.0 - min_soc; }

    void validate() const {
        if (!(panel_area_m2 > 0.0)) throw std::invalid_argument("panel_area_m2 must be positive");
        if (!(panel_efficiency > 0.0 && panel_efficiency < 1.0))
            throw std::invalid_argument("panel_efficiency must lie in (0, 1)");
        if (!(operational_power_w > 0.0))
            throw std::invalid_argument("operational_power_w must be positive");
        if (!(battery_capacity_wh > 0.0))
            throw std::invalid_argument("battery_capacity_wh must be positive");
        if (!(min_soc > 0.0 && min_soc < 1.0)) throw std::invalid_argument("min_soc must lie in (0, 1)");
        if (!(cpu_coeff > 0.0)) throw std::invalid_argument("cpu_coeff must be positive");
        if (!(f_min_hz > 0.0 && f_min_hz <= f_max_hz))
            throw std::invalid_argument("frequency range must satisfy 0 < f_min <= f_max");
        orbit.validate();
    }
};

/// Depth of discharge; state of charge is 1 - dod.
struct BatteryState {
    double dod = 0.0;

    [[nodiscard]] double soc() const { return 1.0 - dod; }
    [[nodiscard]] static BatteryState from_soc(double soc) { return {1.0 - soc}; }
};

struct PowerSample {
    double harvested_w = 0.0;
    double consumed_w = 0.0;

    [[nodiscard]] double net_deficit_w() const { return consumed_w - harvested_w; }
};

/// Harvested power of one satellite as a function of time.
class HarvestCurve {
  public:
    HarvestCurve(const SatelliteSpec &spec, const SunModel &sun)
        : track_(spec.orbit), sun_(sun), earth_radius_m_(spec.orbit.earth_radius_m),
          peak_w_(spec.solar_constant_wm2 * spec.panel_area_m2 * spec.panel_efficiency) {}

    [[nodiscard]] double operator()(double t) const {
        const EciVector pos = track_.at(t);
        if (eclipse_indicator(pos, sun_, earth_radius_m_) == 0) {
            return 0.0;
        }
        return peak_w_ * cosine_factor(pos, sun_, track_.semi_major_axis());
    }

    /// Output with the panel normal pointing straight at the sun.
    [[nodiscard]] double peak_w() const { return peak_w_; }

  private:
    OrbitTrack track_;
    SunModel sun_;
    double earth_radius_m_;
    double peak_w_;
};

inline double harvested_power(const SatelliteSpec &spec, double t, const SunModel &sun) {
    return HarvestCurve(spec, sun)(t);
}

/// Cubic DVFS power; a frequency of exactly 0 means idle.
inline double task_power(const SatelliteSpec &spec, double freq_hz) {
    if (freq_hz == 0.0) {
        return 0.0;
    }
    if (!(freq_hz >= spec.f_min_hz && freq_hz <= spec.f_max_hz)) {
        throw std::out_of_range("frequency " + std::to_string(freq_hz) +
                                " Hz outside hardware range");
    }
    return spec.cpu_coeff * freq_hz * freq_hz * freq_hz;
}

/// d(dod)/dt in 1/s; negative while charging.
inline double dod_rate(const SatelliteSpec &spec, const PowerSample &sample) {
    return sample.net_deficit_w() / spec.capacity_j();
}

inline BatteryState step_battery(BatteryState state, double rate, double dt) {
    return {std::clamp(state.dod + rate * dt, 0.0, 1.0)};
}

} // namespace scpn
