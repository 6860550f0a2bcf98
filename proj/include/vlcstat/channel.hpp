#ifndef VLCSTAT_CHANNEL_HPP
#define VLCSTAT_CHANNEL_HPP

#include <cmath>
#include <string>

#include "vlcstat/common.hpp"

namespace vlcstat {

/// Deterministic line-of-sight link parameters. Angles are degrees,
/// distances meters, detector area m^2 (config files take cm^2 and convert).
struct LinkGeometry {
  double ell = 0.0;        // vertical LED-to-receiver distance
  double d = 0.0;          // horizontal distance
  double fov_deg = 0.0;    // receiver field-of-view half angle
  double lambertian = 0.0; // Lambertian order of the LED
  double area_m2 = 0.0;    // photodetector area
  double gain = 0.0;       // optical concentrator gain
  double spacing = 0.0;    // LED spacing (two-/multi-LED setups), 0 if unused
};

inline void validate_geometry(const LinkGeometry& g, bool need_spacing = false) {
  if (!(g.ell > 0.0)) throw ConfigError("geometry.ell must be > 0");
  if (!(g.d >= 0.0)) throw ConfigError("geometry.d must be >= 0");
  if (!(g.fov_deg > 0.0 && g.fov_deg <= 90.0))
    throw ConfigError("geometry.fov must be in (0, 90] degrees");
  if (!(g.lambertian > 0.0)) throw ConfigError("geometry: Lambertian order must be > 0");
  if (!(g.area_m2 > 0.0)) throw ConfigError("geometry.area must be > 0");
  if (!(g.gain > 0.0)) throw ConfigError("geometry.g must be > 0");
  if (need_spacing && !(g.spacing > 0.0))
    throw ConfigError("geometry.spacing must be > 0 for multi-LED scenarios");
}

/// Lambertian order from the half-power beamwidth: -1 / log2(cos(angle)).
inline double lambertian_order(double half_power_deg) {
  if (!(half_power_deg > 0.0 && half_power_deg < 90.0))
    throw ConfigError("half_power angle must be in (0, 90) degrees");
  return -1.0 / std::log2(std::cos(deg2rad(half_power_deg)));
}

/// Concentrator gain n^2 / sin^2(fov) for a lens of refractive index n.
inline double concentrator_gain(double refractive_index, double fov_deg) {
  if (!(refractive_index >= 1.0)) throw ConfigError("refractive index n must be >= 1");
  if (!(fov_deg > 0.0 && fov_deg <= 90.0))
    throw ConfigError("fov must be in (0, 90] degrees");
  const double s = std::sin(deg2rad(fov_deg));
  return refractive_index * refractive_index / (s * s);
}

/// Constant channel multiplier (gamma+1) * A * ell^gamma * g / (2 pi);
/// independent of receiver location and orientation.
inline double constant_factor(const LinkGeometry& g) {
  return (g.lambertian + 1.0) * g.area_m2 * std::pow(g.ell, g.lambertian) * g.gain /
         (2.0 * kPi);
}

/// Distance factor (ell^2 + d^2)^{-(gamma+2)/2}.
inline double distance_factor(const LinkGeometry& g, double d) {
  return std::pow(g.ell * g.ell + d * d, -(g.lambertian + 2.0) / 2.0);
}

/// Orientation factor cos(theta) clipped to zero outside the field of view.
inline double orientation_factor(double theta_deg, double fov_deg) {
  if (std::abs(theta_deg) > fov_deg) return 0.0;
  return std::cos(deg2rad(theta_deg));
}

struct ChannelFactors {
  double constant = 0.0;
  double distance = 0.0;
  double orientation = 0.0;
};

inline ChannelFactors channel_factors(const LinkGeometry& g, double theta_deg) {
  return {constant_factor(g), distance_factor(g, g.d),
          orientation_factor(theta_deg, g.fov_deg)};
}

/// DC line-of-sight gain; exactly zero when the incidence angle exceeds
/// the field of view.
inline double los_gain(const LinkGeometry& g, double theta_deg) {
  const ChannelFactors f = channel_factors(g, theta_deg);
  return f.constant * f.distance * f.orientation;
}

/// Total subtended angle atan(d/ell) + atan((D-d)/ell) between a receiver at
/// horizontal offset d and two LEDs a distance D apart. Degrees.
inline double phi_sum(double d, double spacing, double ell) {
  if (!(d >= 0.0 && d <= spacing))
    throw ConfigError("phi_sum: d must lie in [0, spacing], got d=" + std::to_string(d));
  return rad2deg(std::atan(d / ell) + std::atan((spacing - d) / ell));
}

}  // namespace vlcstat

#endif  // VLCSTAT_CHANNEL_HPP
