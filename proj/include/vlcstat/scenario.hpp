#ifndef VLCSTAT_SCENARIO_HPP
#define VLCSTAT_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vlcstat/channel.hpp"
#include "vlcstat/common.hpp"
#include "vlcstat/distribution.hpp"
#include "vlcstat/multi_led.hpp"
#include "vlcstat/single_led.hpp"
#include "vlcstat/square_law.hpp"
#include "vlcstat/two_led.hpp"

namespace vlcstat {

enum class ScenarioKind { single_fixed, single_random, two_led_fixed, two_led_random,
                          multi_led };

struct GridSpec {
  double from = 0.0;
  double to = 0.0;
  int points = 0;
  bool log_spaced = false;

  std::vector<double> values() const {
    if (points < 2 || !(to > from)) throw ConfigError("grid must have to > from, points >= 2");
    std::vector<double> v(points);
    if (log_spaced) {
      if (!(from > 0.0)) throw ConfigError("log grid requires from > 0");
      const double llo = std::log(from), lhi = std::log(to);
      for (int i = 0; i < points; ++i)
        v[i] = std::exp(llo + (lhi - llo) * i / double(points - 1));
    } else {
      for (int i = 0; i < points; ++i) v[i] = from + (to - from) * i / double(points - 1);
    }
    v.front() = from;
    v.back() = to;
    return v;
  }
};

struct McSettings {
  std::size_t samples = 1000000;
  std::uint64_t seed = 1;
};

struct MultiLedSettings {
  int n_leds = 4;
  double user_offset = 0.0;
  double phi_lo = -90.0;
  double phi_hi = 90.0;
  int resolution = 10000;
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::single_fixed;
  LinkGeometry geometry;
  std::optional<Distribution> theta_dist;
  std::optional<Distribution> d_dist;
  FovMode fov_mode = FovMode::narrow;
  std::optional<GridSpec> snr_grid;
  std::optional<GridSpec> threshold_grid;
  McSettings mc;
  MultiLedSettings multi;
};

inline ScenarioKind scenario_kind_from_string(const std::string& s) {
  if (s == "single_fixed") return ScenarioKind::single_fixed;
  if (s == "single_random") return ScenarioKind::single_random;
  if (s == "two_led_fixed") return ScenarioKind::two_led_fixed;
  if (s == "two_led_random") return ScenarioKind::two_led_random;
  if (s == "multi_led") return ScenarioKind::multi_led;
  throw ConfigError("unknown scenario kind: " + s);
}

inline double require_number(const nlohmann::json& j, const std::string& key,
                             const std::string& where) {
  if (!j.contains(key) || !j[key].is_number())
    throw ConfigError(where + ": missing numeric field '" + key + "'");
  return j[key].get<double>();
}

/// Distribution literal: {"kind":"uniform","lo":..,"hi":..},
/// {"kind":"gaussian","mean":..,"variance":..}, {"kind":"rayleigh","scale":..},
/// {"kind":"point","value":..}.
inline Distribution parse_distribution(const nlohmann::json& j, const std::string& field) {
  if (!j.is_object() || !j.contains("kind"))
    throw ConfigError(field + ": expected a distribution object with a 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "uniform")
    return Distribution::uniform(require_number(j, "lo", field), require_number(j, "hi", field));
  if (kind == "gaussian")
    return Distribution::gaussian(require_number(j, "mean", field),
                                  require_number(j, "variance", field));
  if (kind == "rayleigh") return Distribution::rayleigh(require_number(j, "scale", field));
  if (kind == "point") return Distribution::point_mass(require_number(j, "value", field));
  throw ConfigError(field + ": unknown distribution kind '" + kind + "'");
}

/// Geometry block: ell, d, fov, half_power or gamma, area_cm2, g or n, spacing.
inline LinkGeometry parse_geometry(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config: missing 'geometry' object");
  LinkGeometry g;
  g.ell = require_number(j, "ell", "geometry");
  g.d = j.value("d", 0.0);
  g.fov_deg = require_number(j, "fov", "geometry");

  const bool has_half_power = j.contains("half_power");
  const bool has_gamma = j.contains("gamma");
  if (has_half_power == has_gamma)
    throw ConfigError("geometry: provide exactly one of 'half_power' or 'gamma'");
  g.lambertian = has_gamma ? j["gamma"].get<double>()
                           : lambertian_order(j["half_power"].get<double>());

  g.area_m2 = require_number(j, "area_cm2", "geometry") * 1e-4;

  const bool has_g = j.contains("g");
  const bool has_n = j.contains("n");
  if (has_g == has_n) throw ConfigError("geometry: provide exactly one of 'g' or 'n'");
  g.gain = has_g ? j["g"].get<double>() : concentrator_gain(j["n"].get<double>(), g.fov_deg);

  g.spacing = j.value("spacing", 0.0);
  return g;
}

inline GridSpec parse_grid(const nlohmann::json& j, const std::string& field) {
  GridSpec g;
  g.from = require_number(j, "from", field);
  g.to = require_number(j, "to", field);
  g.points = static_cast<int>(require_number(j, "points", field));
  g.log_spaced = j.value("log", false);
  return g;
}

inline ScenarioConfig parse_scenario(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  if (!j.contains("scenario")) throw ConfigError("config: missing 'scenario'");
  ScenarioConfig cfg;
  cfg.kind = scenario_kind_from_string(j["scenario"].get<std::string>());
  cfg.geometry = parse_geometry(j.value("geometry", nlohmann::json::object()));

  if (j.contains("theta_dist")) cfg.theta_dist = parse_distribution(j["theta_dist"], "theta_dist");
  if (j.contains("d_dist")) cfg.d_dist = parse_distribution(j["d_dist"], "d_dist");

  if (j.contains("fov_mode")) {
    const std::string m = j["fov_mode"].get<std::string>();
    if (m == "wide")
      cfg.fov_mode = FovMode::wide;
    else if (m == "narrow")
      cfg.fov_mode = FovMode::narrow;
    else
      throw ConfigError("fov_mode must be 'wide' or 'narrow', got '" + m + "'");
  }

  if (j.contains("snr_db")) cfg.snr_grid = parse_grid(j["snr_db"], "snr_db");
  if (j.contains("thresholds")) cfg.threshold_grid = parse_grid(j["thresholds"], "thresholds");

  if (j.contains("mc")) {
    const auto& m = j["mc"];
    if (m.contains("samples")) cfg.mc.samples = m["samples"].get<std::size_t>();
    if (m.contains("seed")) cfg.mc.seed = m["seed"].get<std::uint64_t>();
  }

  if (j.contains("multi")) {
    const auto& m = j["multi"];
    cfg.multi.n_leds = static_cast<int>(m.value("n_leds", 4.0));
    cfg.multi.user_offset = require_number(m, "user_offset", "multi");
    if (m.contains("phi_range")) {
      const auto& r = m["phi_range"];
      if (!r.is_array() || r.size() != 2) throw ConfigError("multi.phi_range must be [lo, hi]");
      cfg.multi.phi_lo = r[0].get<double>();
      cfg.multi.phi_hi = r[1].get<double>();
    }
    cfg.multi.resolution = static_cast<int>(m.value("resolution", 10000.0));
  } else if (cfg.kind == ScenarioKind::multi_led) {
    throw ConfigError("multi_led scenario requires a 'multi' block");
  }

  // scenario-specific requirements
  switch (cfg.kind) {
    case ScenarioKind::single_fixed:
      if (!cfg.theta_dist) throw ConfigError("single_fixed requires theta_dist");
      break;
    case ScenarioKind::single_random:
      if (!cfg.theta_dist || !cfg.d_dist)
        throw ConfigError("single_random requires theta_dist and d_dist");
      break;
    case ScenarioKind::two_led_fixed:
      if (!cfg.theta_dist) throw ConfigError("two_led_fixed requires theta_dist");
      if (!(cfg.geometry.spacing > 0.0)) throw ConfigError("two-LED scenarios require spacing");
      break;
    case ScenarioKind::two_led_random:
      if (!cfg.theta_dist || !cfg.d_dist)
        throw ConfigError("two_led_random requires theta_dist and d_dist");
      if (!(cfg.geometry.spacing > 0.0)) throw ConfigError("two-LED scenarios require spacing");
      break;
    case ScenarioKind::multi_led:
      break;
  }
  return cfg;
}

inline LinearArrayScenario to_array_scenario(const ScenarioConfig& cfg) {
  LinearArrayScenario a;
  a.n_leds = cfg.multi.n_leds;
  a.spacing = cfg.geometry.spacing;
  a.ell = cfg.geometry.ell;
  a.user_offset = cfg.multi.user_offset;
  a.fov_deg = cfg.geometry.fov_deg;
  a.lambertian = cfg.geometry.lambertian;
  a.area_m2 = cfg.geometry.area_m2;
  a.gain = cfg.geometry.gain;
  return a;
}

/// Analytic square-channel law for the law-bearing scenario kinds.
inline SquareChannelLaw build_law(const ScenarioConfig& cfg) {
  switch (cfg.kind) {
    case ScenarioKind::single_fixed:
      return single_led_law_fixed(*cfg.theta_dist, cfg.geometry, cfg.fov_mode);
    case ScenarioKind::single_random:
      return single_led_law_random(*cfg.theta_dist, *cfg.d_dist, cfg.geometry);
    case ScenarioKind::two_led_fixed:
      return two_led_law_fixed(*cfg.theta_dist, cfg.geometry, cfg.geometry.d);
    case ScenarioKind::two_led_random:
      return two_led_law_random(*cfg.theta_dist, *cfg.d_dist, cfg.geometry);
    case ScenarioKind::multi_led:
      throw ConfigError("multi_led scenarios have no scalar channel law; use 'regions'");
  }
  throw ConfigError("unreachable scenario kind");
}

/// Short computation-path tag recorded in run manifests.
inline std::string law_method_name(const ScenarioConfig& cfg) {
  switch (cfg.kind) {
    case ScenarioKind::single_fixed:
      return cfg.fov_mode == FovMode::wide ? "single-led-fixed-wide" : "single-led-fixed-narrow";
    case ScenarioKind::single_random:
      return "single-led-random-product-law";
    case ScenarioKind::two_led_fixed:
      return "two-led-fixed-case-decomposition";
    case ScenarioKind::two_led_random:
      return "two-led-random-offset-average";
    case ScenarioKind::multi_led:
      return "linear-array-region-partition";
  }
  return "unknown";
}

}  // namespace vlcstat

#endif  // VLCSTAT_SCENARIO_HPP
