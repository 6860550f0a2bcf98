#ifndef VLCSTAT_MULTI_LED_HPP
#define VLCSTAT_MULTI_LED_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "vlcstat/channel.hpp"
#include "vlcstat/common.hpp"

namespace vlcstat {

/// Equally spaced LEDs on a line, receiver below the array at a horizontal
/// offset from the first LED. The receiver normal tilts within the array's
/// vertical plane by a deviation angle; positive deviations lean toward
/// higher LED indices.
struct LinearArrayScenario {
  int n_leds = 0;
  double spacing = 0.0;      // m
  double ell = 0.0;          // m
  double user_offset = 0.0;  // m from LED 1, in [0, (n_leds-1) * spacing]
  double fov_deg = 0.0;
  double lambertian = 0.0;
  double area_m2 = 0.0;
  double gain = 0.0;
};

inline void validate_array(const LinearArrayScenario& a) {
  if (a.n_leds < 2) throw ConfigError("linear array requires at least two LEDs");
  if (!(a.spacing > 0.0)) throw ConfigError("array spacing must be > 0");
  if (!(a.ell > 0.0)) throw ConfigError("array ell must be > 0");
  const double span = (a.n_leds - 1) * a.spacing;
  if (!(a.user_offset >= 0.0 && a.user_offset <= span))
    throw ConfigError("user_offset must lie within the array span [0, " +
                      std::to_string(span) + "]");
  if (!(a.fov_deg > 0.0 && a.fov_deg <= 90.0))
    throw ConfigError("array fov must be in (0, 90] degrees");
  if (!(a.lambertian > 0.0 && a.area_m2 > 0.0 && a.gain > 0.0))
    throw ConfigError("array emitter/detector parameters must be positive");
}

/// Signed elevation angle (degrees) from the receiver to LED i (1-based):
/// zero straight up, positive toward higher indices.
inline double led_elevation_deg(const LinearArrayScenario& a, int led) {
  const double x_led = (led - 1) * a.spacing;
  return rad2deg(std::atan((x_led - a.user_offset) / a.ell));
}

/// Gain of LED i seen by a receiver tilted to deviation phi (degrees):
/// the incidence angle is the offset between the tilt and the LED elevation.
inline double array_led_gain(const LinearArrayScenario& a, int led, double phi_deg) {
  LinkGeometry g;
  g.ell = a.ell;
  const double x_led = (led - 1) * a.spacing;
  g.d = std::abs(x_led - a.user_offset);
  g.fov_deg = a.fov_deg;
  g.lambertian = a.lambertian;
  g.area_m2 = a.area_m2;
  g.gain = a.gain;
  const double theta = phi_deg - led_elevation_deg(a, led);
  return los_gain(g, theta);
}

struct GainSweep {
  std::vector<double> phi_deg;
  std::vector<std::vector<double>> gains;  // gains[led-1][k]
};

inline GainSweep gain_sweep(const LinearArrayScenario& a, const std::vector<double>& grid) {
  validate_array(a);
  GainSweep sweep;
  sweep.phi_deg = grid;
  sweep.gains.assign(a.n_leds, std::vector<double>(grid.size(), 0.0));
  for (int led = 1; led <= a.n_leds; ++led)
    for (std::size_t k = 0; k < grid.size(); ++k)
      sweep.gains[led - 1][k] = array_led_gain(a, led, grid[k]);
  return sweep;
}

/// Strongest and second-strongest LED at one deviation angle. Zero-gain LEDs
/// never rank; missing ranks are reported as index 0. Exact ties go to the
/// lower LED index.
inline std::pair<int, int> strongest_pair(const LinearArrayScenario& a, double phi_deg) {
  int best = 0, second = 0;
  double g_best = 0.0, g_second = 0.0;
  for (int led = 1; led <= a.n_leds; ++led) {
    const double g = array_led_gain(a, led, phi_deg);
    if (g <= 0.0) continue;
    if (g > g_best) {
      second = best;
      g_second = g_best;
      best = led;
      g_best = g;
    } else if (g > g_second) {
      second = led;
      g_second = g;
    }
  }
  return {best, second};
}

/// Deviation-angle segmentation by (strongest, second-strongest) labels.
struct RegionPartition {
  double phi_lo = 0.0;
  double phi_hi = 0.0;
  std::vector<double> boundaries;            // interior boundaries, degrees, sorted
  std::vector<std::pair<int, int>> labels;   // one per region, boundaries.size() + 1
};

inline RegionPartition region_partition(const LinearArrayScenario& a, double phi_lo,
                                        double phi_hi, int resolution = 10000) {
  validate_array(a);
  if (!(phi_hi > phi_lo)) throw ConfigError("region partition: empty deviation range");
  if (resolution < 1000) throw ConfigError("region partition: resolution must be >= 1000");

  RegionPartition part;
  part.phi_lo = phi_lo;
  part.phi_hi = phi_hi;
  std::pair<int, int> current = strongest_pair(a, phi_lo);
  part.labels.push_back(current);
  const double step = (phi_hi - phi_lo) / resolution;
  double prev = phi_lo;
  for (int i = 1; i <= resolution; ++i) {
    const double phi = phi_lo + step * i;
    const std::pair<int, int> lab = strongest_pair(a, phi);
    if (lab != current) {
      // bisect the switch point down to 1e-4 degrees
      double lo = prev, hi = phi;
      while (hi - lo > 1e-4) {
        const double mid = 0.5 * (lo + hi);
        if (strongest_pair(a, mid) == current)
          lo = mid;
        else
          hi = mid;
      }
      part.boundaries.push_back(0.5 * (lo + hi));
      part.labels.push_back(lab);
      current = lab;
    }
    prev = phi;
  }
  return part;
}

struct Reducibility {
  bool reducible = false;
  std::pair<int, int> pair = {0, 0};
};

/// A deviation span reduces to a two-LED analysis when the unordered
/// top-two pair is the same across every region it touches.
inline Reducibility two_led_reducible(const RegionPartition& part, double span_lo,
                                      double span_hi) {
  if (!(span_hi > span_lo)) throw ConfigError("two_led_reducible: empty span");
  auto normalized = [](std::pair<int, int> p) {
    if (p.first > p.second) std::swap(p.first, p.second);
    return p;
  };
  Reducibility out;
  bool first_region = true;
  std::pair<int, int> ref{0, 0};
  for (std::size_t r = 0; r < part.labels.size(); ++r) {
    const double lo = r == 0 ? part.phi_lo : part.boundaries[r - 1];
    const double hi = r == part.labels.size() - 1 ? part.phi_hi : part.boundaries[r];
    if (hi <= span_lo || lo >= span_hi) continue;
    const std::pair<int, int> p = normalized(part.labels[r]);
    if (first_region) {
      ref = p;
      first_region = false;
    } else if (p != ref) {
      return {false, {0, 0}};
    }
  }
  if (first_region) throw ConfigError("two_led_reducible: span outside the partition");
  out.reducible = true;
  out.pair = ref;  // ascending order
  return out;
}

}  // namespace vlcstat

#endif  // VLCSTAT_MULTI_LED_HPP
