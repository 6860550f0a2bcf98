#ifndef VLCSTAT_COMMON_HPP
#define VLCSTAT_COMMON_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace vlcstat {

inline constexpr double kPi = std::numbers::pi;

inline double deg2rad(double deg) { return deg * (kPi / 180.0); }
inline double rad2deg(double rad) { return rad * (180.0 / kPi); }

/// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Invalid configuration or parameter; the CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure (quadrature did not reach the requested tolerance,
/// bisection bracket invalid, ...); the CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double clamp01(double x) {
  if (x < 0.0) return 0.0;
  if (x > 1.0) return 1.0;
  return x;
}

}  // namespace vlcstat

#endif  // VLCSTAT_COMMON_HPP
