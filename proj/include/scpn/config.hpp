// Scenario configuration file (JSON with nested sections) and its
// round trip back into the run manifest.
#pragma once

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "scpn/sim.hpp"

namespace scpn {

/// Bad or unknown configuration value; key() names it as section.key.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::string key, const std::string &what)
        : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
    [[nodiscard]] const std::string &key() const { return key_; }

  private:
    std::string key_;
};

struct LoadedConfig {
    ScenarioConfig scenario;
    bool seed_from_file = false;
};

namespace detail {

using nlohmann::json;

inline void reject_unknown(const json &section, const std::string &name,
                           const std::set<std::string> &allowed) {
    if (!section.is_object()) {
        throw ConfigError(name, "expected an object");
    }
    for (const auto &[k, v] : section.items()) {
        if (!allowed.contains(k)) {
            throw ConfigError(name.empty() ? k : name + "." + k, "unknown key");
        }
    }
}

inline double get_number(const json &j, const std::string &key) {
    if (!j.is_number()) throw ConfigError(key, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(key, "must be finite");
    return v;
}

inline int get_int(const json &j, const std::string &key) {
    if (!j.is_number_integer()) throw ConfigError(key, "expected an integer");
    return j.get<int>();
}

inline Range get_range(const json &j, const std::string &key) {
    if (!j.is_array() || j.size() != 2) throw ConfigError(key, "expected [lo, hi]");
    Range r{get_number(j[0], key), get_number(j[1], key)};
    if (!r.valid()) throw ConfigError(key, "range must satisfy lo < hi");
    return r;
}

template <typename Fn>
void with(const json &section, const char *key, const std::string &prefix, Fn &&fn) {
    if (auto it = section.find(key); it != section.end()) {
        fn(*it, prefix + "." + key);
    }
}

} // namespace detail

/// Overlays the keys present in `doc` onto `base`. Missing keys keep their defaults.
inline LoadedConfig config_from_json(const nlohmann::json &doc, ScenarioConfig base = {}) {
    using namespace detail;
    LoadedConfig out{std::move(base), false};
    ScenarioConfig &c = out.scenario;
    reject_unknown(doc, "", {"constellation", "satellite", "degradation", "tasks", "simulation"});

    if (auto it = doc.find("constellation"); it != doc.end()) {
        const json &s = *it;
        const std::string p = "constellation";
        reject_unknown(s, p,
                       {"planes", "sats_per_plane", "phasing", "altitude_km", "inclination_deg",
                        "sun_direction", "earth_radius_m", "mu_m3s2"});
        with(s, "planes", p, [&](const json &j, const std::string &k) { c.walker.planes = get_int(j, k); });
        with(s, "sats_per_plane", p,
             [&](const json &j, const std::string &k) { c.walker.sats_per_plane = get_int(j, k); });
        with(s, "phasing", p, [&](const json &j, const std::string &k) { c.walker.phasing = get_int(j, k); });
        with(s, "altitude_km", p,
             [&](const json &j, const std::string &k) { c.walker.altitude_m = get_number(j, k) * 1e3; });
        with(s, "inclination_deg", p, [&](const json &j, const std::string &k) {
            c.walker.inclination_rad = get_number(j, k) * std::numbers::pi / 180.0;
        });
        with(s, "sun_direction", p, [&](const json &j, const std::string &k) {
            if (!j.is_array() || j.size() != 3) throw ConfigError(k, "expected [x, y, z]");
            EciVector v{get_number(j[0], k), get_number(j[1], k), get_number(j[2], k)};
            if (!(v.norm() > 0.0)) throw ConfigError(k, "must be non-zero");
            c.sun_direction = (1.0 / v.norm()) * v;
        });
        with(s, "earth_radius_m", p,
             [&](const json &j, const std::string &k) { c.earth_radius_m = get_number(j, k); });
        with(s, "mu_m3s2", p, [&](const json &j, const std::string &k) { c.mu_m3s2 = get_number(j, k); });
    }

    if (auto it = doc.find("satellite"); it != doc.end()) {
        const json &s = *it;
        const std::string p = "satellite";
        reject_unknown(s, p,
                       {"panel_area_m2", "efficiency", "operational_power_w", "initial_soc",
                        "battery_capacity_wh", "min_soc", "f_min_hz", "f_max_hz", "cpu_coeff",
                        "solar_constant_wm2"});
        with(s, "panel_area_m2", p, [&](const json &j, const std::string &k) { c.panel_area_m2 = get_range(j, k); });
        with(s, "efficiency", p, [&](const json &j, const std::string &k) { c.panel_efficiency = get_range(j, k); });
        with(s, "operational_power_w", p,
             [&](const json &j, const std::string &k) { c.operational_power_w = get_range(j, k); });
        with(s, "initial_soc", p, [&](const json &j, const std::string &k) { c.initial_soc = get_range(j, k); });
        with(s, "battery_capacity_wh", p,
             [&](const json &j, const std::string &k) { c.battery_capacity_wh = get_number(j, k); });
        with(s, "min_soc", p, [&](const json &j, const std::string &k) { c.min_soc = get_number(j, k); });
        with(s, "f_min_hz", p, [&](const json &j, const std::string &k) { c.f_min_hz = get_number(j, k); });
        with(s, "f_max_hz", p, [&](const json &j, const std::string &k) { c.f_max_hz = get_number(j, k); });
        with(s, "cpu_coeff", p, [&](const json &j, const std::string &k) { c.cpu_coeff = get_number(j, k); });
        with(s, "solar_constant_wm2", p,
             [&](const json &j, const std::string &k) { c.solar_constant_wm2 = get_number(j, k); });
    }

    if (auto it = doc.find("degradation"); it != doc.end()) {
        const json &s = *it;
        const std::string p = "degradation";
        reject_unknown(s, p, {"sigma", "epsilon", "integration_dt_s"});
        with(s, "sigma", p, [&](const json &j, const std::string &k) { c.degradation.sigma = get_number(j, k); });
        with(s, "epsilon", p, [&](const json &j, const std::string &k) {
            if (j.is_null()) {
                c.degradation.epsilon.reset();
            } else {
                c.degradation.epsilon = get_number(j, k);
            }
        });
        with(s, "integration_dt_s", p,
             [&](const json &j, const std::string &k) { c.integration_dt_s = get_number(j, k); });
    }

    if (auto it = doc.find("tasks"); it != doc.end()) {
        const json &s = *it;
        const std::string p = "tasks";
        reject_unknown(s, p, {"count", "workload_cycles", "budget_s"});
        with(s, "count", p, [&](const json &j, const std::string &k) { c.task_count = get_int(j, k); });
        with(s, "workload_cycles", p,
             [&](const json &j, const std::string &k) { c.workload_cycles = get_range(j, k); });
        with(s, "budget_s", p, [&](const json &j, const std::string &k) { c.budget_s = get_range(j, k); });
    }

    if (auto it = doc.find("simulation"); it != doc.end()) {
        const json &s = *it;
        const std::string p = "simulation";
        reject_unknown(s, p, {"horizon_s", "master_seed"});
        with(s, "horizon_s", p, [&](const json &j, const std::string &k) { c.horizon_s = get_number(j, k); });
        with(s, "master_seed", p, [&](const json &j, const std::string &k) {
            if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
                throw ConfigError(k, "expected a non-negative integer");
            }
            c.master_seed = j.get<std::uint64_t>();
            out.seed_from_file = true;
        });
    }

    try {
        c.validate();
    } catch (const std::invalid_argument &e) {
        throw ConfigError("config", e.what());
    }
    return out;
}

inline LoadedConfig load_config_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::ios_base::failure("cannot open config file '" + path + "'");
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        throw ConfigError("config", std::string("parse error: ") + e.what());
    }
    return config_from_json(doc);
}

/// Fully resolved configuration, in the same layout the loader accepts.
inline nlohmann::json config_to_json(const ScenarioConfig &c) {
    auto range = [](Range r) { return nlohmann::json::array({r.lo, r.hi}); };
    nlohmann::json j;
    j["constellation"] = {
        {"planes", c.walker.planes},
        {"sats_per_plane", c.walker.sats_per_plane},
        {"phasing", c.walker.phasing},
        {"altitude_km", c.walker.altitude_m / 1e3},
        {"inclination_deg", c.walker.inclination_rad * 180.0 / std::numbers::pi},
        {"sun_direction", {c.sun_direction.x, c.sun_direction.y, c.sun_direction.z}},
        {"earth_radius_m", c.earth_radius_m},
        {"mu_m3s2", c.mu_m3s2},
    };
    j["satellite"] = {
        {"panel_area_m2", range(c.panel_area_m2)},
        {"efficiency", range(c.panel_efficiency)},
        {"operational_power_w", range(c.operational_power_w)},
        {"initial_soc", range(c.initial_soc)},
        {"battery_capacity_wh", c.battery_capacity_wh},
        {"min_soc", c.min_soc},
        {"f_min_hz", c.f_min_hz},
        {"f_max_hz", c.f_max_hz},
        {"cpu_coeff", c.cpu_coeff},
        {"solar_constant_wm2", c.solar_constant_wm2},
    };
    j["degradation"] = {
        {"sigma", c.degradation.sigma},
        {"epsilon", c.degradation.epsilon ? nlohmann::json(*c.degradation.epsilon) : nlohmann::json()},
        {"integration_dt_s", c.integration_dt_s},
    };
    j["tasks"] = {
        {"count", c.task_count},
        {"workload_cycles", range(c.workload_cycles)},
        {"budget_s", range(c.budget_s)},
    };
    j["simulation"] = {{"horizon_s", c.horizon_s}, {"master_seed", c.master_seed}};
    return j;
}

} // namespace scpn
