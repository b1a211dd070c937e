// Small hand-built constellations shared by the unit tests.
#pragma once

#include <vector>

#include "scpn/constellation.hpp"

namespace scpn::test {

inline SatelliteSpec satellite(double raan, double u0, double efficiency = 0.1,
                               double op_power = 75.0) {
    SatelliteSpec s;
    s.orbit.inclination_rad = 0.925;
    s.orbit.raan_rad = raan;
    s.orbit.arg_latitude0_rad = u0;
    s.panel_area_m2 = 9.0;
    s.panel_efficiency = efficiency;
    s.operational_power_w = op_power;
    return s;
}

inline Constellation make_constellation(std::vector<SatelliteSpec> sats,
                                        std::vector<double> dods) {
    Constellation c;
    c.satellites = std::move(sats);
    for (double d : dods) c.initial_states.push_back({d});
    return c;
}

} // namespace scpn::test
