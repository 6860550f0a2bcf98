#ifndef VLCSTAT_MONTE_CARLO_HPP
#define VLCSTAT_MONTE_CARLO_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "vlcstat/channel.hpp"
#include "vlcstat/common.hpp"
#include "vlcstat/distribution.hpp"
#include "vlcstat/random_stream.hpp"
#include "vlcstat/scenario.hpp"
#include "vlcstat/square_law.hpp"

namespace vlcstat {

/// Step-cdf view of a simulated squared-gain sample. Exact zeros are the
/// clipped events, so the atom estimate needs no epsilon threshold.
struct EmpiricalLaw {
  std::vector<double> sorted_samples;
  double zero_fraction = 0.0;

  double cdf(double x) const {
    const auto it =
        std::upper_bound(sorted_samples.begin(), sorted_samples.end(), x);
    return static_cast<double>(it - sorted_samples.begin()) /
           static_cast<double>(sorted_samples.size());
  }
};

inline EmpiricalLaw empirical_law(std::vector<double> samples) {
  if (samples.empty()) throw ConfigError("empirical_law: empty sample");
  EmpiricalLaw law;
  std::size_t zeros = 0;
  for (const double v : samples)
    if (v == 0.0) ++zeros;
  law.zero_fraction = static_cast<double>(zeros) / static_cast<double>(samples.size());
  std::sort(samples.begin(), samples.end());
  law.sorted_samples = std::move(samples);
  return law;
}

namespace detail {

/// One physical draw of the squared channel gain for a scenario.
struct ScenarioSampler {
  const ScenarioConfig& cfg;
  double hc;

  explicit ScenarioSampler(const ScenarioConfig& c) : cfg(c), hc(constant_factor(c.geometry)) {}

  double single_sq(double theta_deg, double d) const {
    const double a = std::abs(theta_deg) <= cfg.geometry.fov_deg
                         ? std::cos(deg2rad(theta_deg))
                         : 0.0;
    if (a == 0.0) return 0.0;
    const double h = hc * distance_factor(cfg.geometry, d) * a;
    return h * h;
  }

  double two_led_sq(double theta_deg, double d) const {
    const double D = cfg.geometry.spacing;
    const double phi = phi_sum(d, D, cfg.geometry.ell);
    const double t2 = phi - theta_deg;
    double best = 0.0;
    const double a1 = std::abs(theta_deg) <= cfg.geometry.fov_deg
                          ? std::cos(deg2rad(theta_deg))
                          : 0.0;
    if (a1 != 0.0) {
      const double h = hc * distance_factor(cfg.geometry, d) * a1;
      best = h * h;
    }
    const double a2 = std::abs(t2) <= cfg.geometry.fov_deg ? std::cos(deg2rad(t2)) : 0.0;
    if (a2 != 0.0) {
      const double h = hc * distance_factor(cfg.geometry, D - d) * a2;
      best = std::max(best, h * h);
    }
    return best;
  }

  double draw(RandomStream& rs) const {
    switch (cfg.kind) {
      case ScenarioKind::single_fixed:
        return single_sq(cfg.theta_dist->sample_one(rs), cfg.geometry.d);
      case ScenarioKind::single_random:
        return single_sq(cfg.theta_dist->sample_one(rs), cfg.d_dist->sample_one(rs));
      case ScenarioKind::two_led_fixed:
        return two_led_sq(cfg.theta_dist->sample_one(rs), cfg.geometry.d);
      case ScenarioKind::two_led_random:
        return two_led_sq(cfg.theta_dist->sample_one(rs), cfg.d_dist->sample_one(rs));
      case ScenarioKind::multi_led:
        break;
    }
    throw ConfigError("scenario kind has no point-to-point channel sampler");
  }
};

}  // namespace detail

/// i.i.d. draws of the physical squared gain (effective gain for two-LED
/// scenarios): per-draw orientation and, when random, location.
inline EmpiricalLaw sample_sq_channel(const ScenarioConfig& cfg, std::size_t n,
                                      RandomStream& rs) {
  if (n < 1000) throw ConfigError("sample_sq_channel: need at least 1e3 samples");
  detail::ScenarioSampler sampler(cfg);
  std::vector<double> v;
  v.reserve(n);
  for (std::size_t i = 0; i < n; ++i) v.push_back(sampler.draw(rs));
  return empirical_law(std::move(v));
}

/// Kolmogorov-Smirnov distance between an analytic law and an empirical one.
/// Both cdfs are right-continuous steps, so the supremum is attained either
/// at a sample point or just before one; atoms shared by both laws (the
/// zero-gain event in particular) therefore compare correctly.
inline double ks_distance(const SquareChannelLaw& law, const EmpiricalLaw& emp) {
  const auto& s = emp.sorted_samples;
  if (s.empty()) throw ConfigError("ks_distance: empty sample");
  const double n = static_cast<double>(s.size());
  double d = std::abs(law.cdf_at(0.0) - emp.zero_fraction);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i > 0 && s[i] == s[i - 1]) continue;
    // count of samples <= s[i] is the upper bound of the tie run
    std::size_t hi = i + 1;
    while (hi < s.size() && s[hi] == s[i]) ++hi;
    const double F = law.cdf_at(s[i]);
    const double F_left =
        law.cdf_at(std::nextafter(s[i], -std::numeric_limits<double>::infinity()));
    d = std::max(d, std::abs(F - static_cast<double>(hi) / n));
    d = std::max(d, std::abs(F_left - static_cast<double>(i) / n));
  }
  return d;
}

/// Bit-level OOK simulation: every bit redraws the channel, adds white
/// Gaussian noise of variance N0/2 and applies the per-realization midpoint
/// threshold. The average symbol energy is one, so snr_db is Es/N0.
inline double mc_ber(const ScenarioConfig& cfg, double snr_db, std::size_t n_bits,
                     RandomStream& rs) {
  if (n_bits < 10000) throw ConfigError("mc_ber: need at least 1e4 bits");
  detail::ScenarioSampler sampler(cfg);
  const double snr = std::pow(10.0, snr_db / 10.0);
  const double amp_on = std::sqrt(2.0);              // Es = 1 with equiprobable on/off
  const double sigma = std::sqrt(0.5 / snr);         // noise std, N0 = 1/snr
  std::size_t errors = 0;
  for (std::size_t i = 0; i < n_bits; ++i) {
    const double h = std::sqrt(sampler.draw(rs));
    const bool bit_on = rs.next_uniform() < 0.5;
    const double y = h * (bit_on ? amp_on : 0.0) + sigma * rs.next_normal();
    const bool decided_on = y > h * amp_on * 0.5;
    if (decided_on != bit_on) ++errors;
  }
  return static_cast<double>(errors) / static_cast<double>(n_bits);
}

}  // namespace vlcstat

#endif  // VLCSTAT_MONTE_CARLO_HPP
