#ifndef VLCSTAT_DISTRIBUTION_HPP
#define VLCSTAT_DISTRIBUTION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vlcstat/common.hpp"
#include "vlcstat/random_stream.hpp"

namespace vlcstat {

enum class DistKind { uniform, gaussian, rayleigh, point_mass, empirical };

/// A one-dimensional law with exact cdf/pdf and reproducible sampling.
///
/// The class is unit-agnostic: orientation laws are constructed in degrees
/// and location laws in meters. Gaussian parameters follow the
/// (mean, variance) convention. Unbounded supports are truncated at ten
/// standard deviations for numeric integration only; cdf and pdf stay
/// exact closed forms.
class Distribution {
 public:
  static Distribution uniform(double lo, double hi) {
    if (!(lo < hi))
      throw ConfigError("uniform: requires lo < hi, got lo=" + std::to_string(lo) +
                        " hi=" + std::to_string(hi));
    Distribution d(DistKind::uniform);
    d.p0_ = lo;
    d.p1_ = hi;
    return d;
  }

  static Distribution gaussian(double mean, double variance) {
    if (!(variance > 0.0))
      throw ConfigError("gaussian: requires variance > 0, got variance=" +
                        std::to_string(variance));
    Distribution d(DistKind::gaussian);
    d.p0_ = mean;
    d.p1_ = variance;
    d.sigma_ = std::sqrt(variance);
    return d;
  }

  static Distribution rayleigh(double scale) {
    if (!(scale > 0.0))
      throw ConfigError("rayleigh: requires scale > 0, got scale=" + std::to_string(scale));
    Distribution d(DistKind::rayleigh);
    d.p0_ = scale;
    return d;
  }

  static Distribution point_mass(double value) {
    Distribution d(DistKind::point_mass);
    d.p0_ = value;
    return d;
  }

  static Distribution empirical(std::vector<double> samples) {
    if (samples.empty()) throw ConfigError("empirical: requires a nonempty sample");
    Distribution d(DistKind::empirical);
    d.samples_ = std::move(samples);
    std::sort(d.samples_.begin(), d.samples_.end());
    return d;
  }

  DistKind kind() const { return kind_; }

  /// Location of the atom for point_mass laws.
  double point_value() const {
    if (kind_ != DistKind::point_mass)
      throw std::logic_error("point_value: not a point-mass law");
    return p0_;
  }

  double cdf(double x) const {
    switch (kind_) {
      case DistKind::uniform:
        if (x < p0_) return 0.0;
        if (x >= p1_) return 1.0;
        return (x - p0_) / (p1_ - p0_);
      case DistKind::gaussian:
        if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
        return 0.5 * std::erfc(-(x - p0_) / (sigma_ * std::sqrt(2.0)));
      case DistKind::rayleigh: {
        if (x <= 0.0) return 0.0;
        if (std::isinf(x)) return 1.0;
        const double z = x / p0_;
        return -std::expm1(-0.5 * z * z);
      }
      case DistKind::point_mass:
        return x >= p0_ ? 1.0 : 0.0;
      case DistKind::empirical: {
        const auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
        return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
      }
    }
    return 0.0;
  }

  /// Density of the continuous kinds. A point-mass law reports density zero
  /// away from its atom (the atom itself is exposed via kind()/point_value()).
  /// Empirical laws have a step cdf and no density.
  double pdf(double x) const {
    switch (kind_) {
      case DistKind::uniform:
        return (x >= p0_ && x <= p1_) ? 1.0 / (p1_ - p0_) : 0.0;
      case DistKind::gaussian: {
        const double z = (x - p0_) / sigma_;
        return std::exp(-0.5 * z * z) / (sigma_ * std::sqrt(2.0 * kPi));
      }
      case DistKind::rayleigh: {
        if (x < 0.0) return 0.0;
        const double z = x / p0_;
        return (x / (p0_ * p0_)) * std::exp(-0.5 * z * z);
      }
      case DistKind::point_mass:
        return 0.0;
      case DistKind::empirical:
        throw std::logic_error("pdf: empirical law has a step cdf and no density");
    }
    return 0.0;
  }

  /// P{a < X <= b}; zero whenever a > b.
  double interval_prob(double a, double b) const {
    if (a > b) return 0.0;
    return cdf(b) - cdf(a);
  }

  /// P{a < X <= b and c < X <= d}. Empty or disjoint interval pairs give
  /// zero; otherwise the overlap reduces to one of four cdf differences.
  double joint_interval_prob(double a, double b, double c, double d) const {
    if (a >= b || c >= d) return 0.0;   // an empty interval
    if (d <= a || b <= c) return 0.0;   // no overlap
    if (c <= a && d > b) return cdf(b) - cdf(a);
    if (c > a && d <= b) return cdf(d) - cdf(c);
    if (c <= a) return cdf(d) - cdf(a);
    return cdf(b) - cdf(c);
  }

  /// Support used for numeric integration. Gaussian laws are cut at
  /// mean +- 10 sigma, Rayleigh at 10 sigma; the truncated tail mass is
  /// below 1e-20.
  Interval support() const {
    switch (kind_) {
      case DistKind::uniform:
        return {p0_, p1_};
      case DistKind::gaussian:
        return {p0_ - 10.0 * sigma_, p0_ + 10.0 * sigma_};
      case DistKind::rayleigh:
        return {0.0, 10.0 * p0_};
      case DistKind::point_mass:
        return {p0_, p0_};
      case DistKind::empirical:
        return {samples_.front(), samples_.back()};
    }
    return {0.0, 0.0};
  }

  double sample_one(RandomStream& rs) const {
    switch (kind_) {
      case DistKind::uniform:
        return p0_ + (p1_ - p0_) * rs.next_uniform();
      case DistKind::gaussian:
        return p0_ + sigma_ * rs.next_normal();
      case DistKind::rayleigh:
        return p0_ * std::sqrt(-2.0 * std::log(rs.next_uniform()));
      case DistKind::point_mass:
        return p0_;
      case DistKind::empirical: {
        const auto n = samples_.size();
        auto idx = static_cast<std::size_t>(rs.next_uniform() * static_cast<double>(n));
        if (idx >= n) idx = n - 1;
        return samples_[idx];
      }
    }
    return 0.0;
  }

  std::vector<double> sample(RandomStream& rs, std::size_t n) const {
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(sample_one(rs));
    return out;
  }

  /// Law of factor * X for factor > 0 (e.g. degree-to-radian conversion).
  Distribution scaled(double factor) const {
    if (!(factor > 0.0)) throw std::logic_error("scaled: requires a positive factor");
    switch (kind_) {
      case DistKind::uniform:
        return uniform(p0_ * factor, p1_ * factor);
      case DistKind::gaussian:
        return gaussian(p0_ * factor, p1_ * factor * factor);
      case DistKind::rayleigh:
        return rayleigh(p0_ * factor);
      case DistKind::point_mass:
        return point_mass(p0_ * factor);
      case DistKind::empirical: {
        std::vector<double> s = samples_;
        for (double& v : s) v *= factor;
        return empirical(std::move(s));
      }
    }
    return *this;
  }

 private:
  explicit Distribution(DistKind k) : kind_(k) {}

  DistKind kind_;
  double p0_ = 0.0;  // uniform lo / gaussian mean / rayleigh scale / point value
  double p1_ = 0.0;  // uniform hi / gaussian variance
  double sigma_ = 0.0;
  std::vector<double> samples_;
};

}  // namespace vlcstat

#endif  // VLCSTAT_DISTRIBUTION_HPP
