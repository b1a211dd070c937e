// Circular-orbit Walker Delta propagation, cylindrical Earth shadow and
// radial-panel cosine factor, all in the Earth-Centered Inertial frame.
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace scpn {

namespace constants {
/// Mean Earth radius [m]
inline constexpr double earth_radius_m = 6'371'000.0;
/// Earth gravitational parameter [m^3/s^2]
inline constexpr double earth_mu_m3s2 = 3.986004418e14;
/// Solar constant at 1 AU [W/m^2]
inline constexpr double solar_constant_wm2 = 1361.0;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
} // namespace constants

struct EciVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    [[nodiscard]] double dot(const EciVector &o) const { return x * o.x + y * o.y + z * o.z; }
    [[nodiscard]] double norm2() const { return dot(*this); }
    [[nodiscard]] double norm() const { return std::sqrt(norm2()); }

    friend EciVector operator*(double s, const EciVector &v) { return {s * v.x, s * v.y, s * v.z}; }
    friend EciVector operator-(const EciVector &a, const EciVector &b) {
        return {a.x - b.x, a.y - b.y, a.z - b.z};
    }
};

/// Fixed unit vector from Earth towards the Sun.
class SunModel {
  public:
    SunModel() = default;

    /// Normalizes `toward_sun`; rejects a zero or non-finite vector.
    explicit SunModel(const EciVector &toward_sun) {
        const double len = toward_sun.norm();
        if (!(len > 0.0) || !std::isfinite(len)) {
            throw std::invalid_argument("sun_direction must be a finite non-zero vector");
        }
        direction_ = (1.0 / len) * toward_sun;
    }

    [[nodiscard]] const EciVector &direction() const { return direction_; }

  private:
    EciVector direction_{1.0, 0.0, 0.0};
};

inline double wrap_two_pi(double angle) {
    double w = std::fmod(angle, constants::two_pi);
    if (w < 0.0) {
        w += constants::two_pi;
    }
    // fmod can return exactly 2*pi after the correction for tiny negatives
    return w >= constants::two_pi ? 0.0 : w;
}

/**
 * Circular orbit elements of one satellite.
 *
 * Angles are stored normalized to [0, 2*pi); the argument of latitude at
 * time t is u0 + n*t and is never wrapped.
 */
struct OrbitParams {
    double altitude_m = 550'000.0;
    double inclination_rad = 0.0;
    double raan_rad = 0.0;
    double arg_latitude0_rad = 0.0;
    double earth_radius_m = constants::earth_radius_m;
    double mu_m3s2 = constants::earth_mu_m3s2;

    [[nodiscard]] double semi_major_axis() const { return earth_radius_m + altitude_m; }
    [[nodiscard]] double mean_motion() const {
        const double a = semi_major_axis();
        return std::sqrt(mu_m3s2 / (a * a * a));
    }
    [[nodiscard]] double period_s() const { return constants::two_pi / mean_motion(); }

    void validate() const {
        if (!(altitude_m > 0.0)) {
            throw std::invalid_argument("altitude must be positive");
        }
        if (!(inclination_rad >= 0.0 && inclination_rad <= std::numbers::pi)) {
            throw std::invalid_argument("inclination must lie in [0, pi]");
        }
        if (!(earth_radius_m >= 0.0) || !(mu_m3s2 > 0.0)) {
            throw std::invalid_argument("earth radius must be >= 0 and mu > 0");
        }
    }
};

struct WalkerConfig {
    int planes = 12;
    int sats_per_plane = 25;
    int phasing = 1;
    double altitude_m = 550'000.0;
    double inclination_rad = 53.0 * std::numbers::pi / 180.0;

    [[nodiscard]] int total() const { return planes * sats_per_plane; }

    void validate() const {
        if (planes <= 0 || sats_per_plane <= 0) {
            throw std::invalid_argument("planes and sats_per_plane must be positive");
        }
        if (phasing < 0 || phasing >= planes) {
            throw std::invalid_argument("phasing must satisfy 0 <= F < planes (got " +
                                        std::to_string(phasing) + ")");
        }
    }
};

/// Walker Delta initialization; result is row-major in (plane, slot).
inline std::vector<OrbitParams> walker_init(const WalkerConfig &cfg) {
    cfg.validate();
    const int n_total = cfg.total();
    std::vector<OrbitParams> out;
    out.reserve(static_cast<std::size_t>(n_total));
    for (int plane = 0; plane < cfg.planes; ++plane) {
        const double raan = plane * constants::two_pi / cfg.planes;
        for (int slot = 0; slot < cfg.sats_per_plane; ++slot) {
            const double frac = static_cast<double>(slot) / cfg.sats_per_plane +
                                static_cast<double>(plane * cfg.phasing) / n_total;
            OrbitParams p;
            p.altitude_m = cfg.altitude_m;
            p.inclination_rad = cfg.inclination_rad;
            p.raan_rad = wrap_two_pi(raan);
            p.arg_latitude0_rad = wrap_two_pi(frac * constants::two_pi);
            out.push_back(p);
        }
    }
    return out;
}

/// Orbit with the plane rotation and mean motion precomputed, for repeated sampling.
class OrbitTrack {
  public:
    explicit OrbitTrack(const OrbitParams &p)
        : a_(p.semi_major_axis()), n_(p.mean_motion()), u0_(p.arg_latitude0_rad),
          cos_raan_(std::cos(p.raan_rad)), sin_raan_(std::sin(p.raan_rad)),
          cos_inc_(std::cos(p.inclination_rad)), sin_inc_(std::sin(p.inclination_rad)) {}

    [[nodiscard]] EciVector at(double t) const {
        const double u = u0_ + n_ * t;
        const double cu = std::cos(u), su = std::sin(u);
        return {a_ * (cos_raan_ * cu - sin_raan_ * su * cos_inc_),
                a_ * (sin_raan_ * cu + cos_raan_ * su * cos_inc_), a_ * (su * sin_inc_)};
    }

    [[nodiscard]] double semi_major_axis() const { return a_; }

  private:
    double a_, n_, u0_;
    double cos_raan_, sin_raan_, cos_inc_, sin_inc_;
};

/// ECI position of a circular orbit at time t [s].
inline EciVector propagate(const OrbitParams &p, double t) { return OrbitTrack(p).at(t); }

/// Cylindrical shadow test: 0 in eclipse, 1 otherwise. Both inequalities are strict.
inline int eclipse_indicator(const EciVector &pos, const SunModel &sun,
                             double earth_radius_m = constants::earth_radius_m) {
    const double along = pos.dot(sun.direction());
    const double perp2 = pos.norm2() - along * along;
    return (along < 0.0 && perp2 < earth_radius_m * earth_radius_m) ? 0 : 1;
}

/// Cosine between the radial panel normal and the sun direction, floored at 0.
inline double cosine_factor(const EciVector &pos, const SunModel &sun, double semi_major_axis_m) {
    return std::max(0.0, pos.dot(sun.direction()) / semi_major_axis_m);
}

/**
 * Fraction of one orbital period spent in shadow, sampled every `dt_s`
 * seconds over [0, T).
 */
inline double eclipse_fraction(const OrbitParams &p, const SunModel &sun, double dt_s = 1.0) {
    if (!(dt_s > 0.0)) {
        throw std::invalid_argument("eclipse_fraction: dt must be positive");
    }
    const double period = p.period_s();
    const auto n_samples = static_cast<long>(std::ceil(period / dt_s));
    const OrbitTrack track(p);
    long shadowed = 0;
    for (long k = 0; k < n_samples; ++k) {
        const EciVector pos = track.at(static_cast<double>(k) * dt_s);
        shadowed += 1 - eclipse_indicator(pos, sun, p.earth_radius_m);
    }
    return static_cast<double>(shadowed) / static_cast<double>(n_samples);
}

} // namespace scpn
