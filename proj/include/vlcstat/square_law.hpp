#ifndef VLCSTAT_SQUARE_LAW_HPP
#define VLCSTAT_SQUARE_LAW_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "vlcstat/common.hpp"
#include "vlcstat/quadrature.hpp"

namespace vlcstat {

/// Mixed law of a squared channel gain: an optional point mass at zero plus
/// a continuous density on [x_lo, x_hi]. Evaluators are immutable after
/// construction and safe to share across threads.
struct SquareChannelLaw {
  double atom_mass = 0.0;
  double x_lo = 0.0;  // continuous-part support
  double x_hi = 0.0;
  double scale = 1.0;  // deterministic squared multiplier applied to the base law

  std::function<double(double)> cdf_fn;
  std::function<double(double)> pdf_fn;
  // Expectation of g under the law, evaluated in the generating (theta, d)
  // domain when the law knows its generators. Includes the atom.
  std::function<double(const std::function<double(double)>&)> expect_fn;
  std::vector<std::string> warnings;

  double cdf_at(double x) const { return cdf_fn(x); }
  double pdf_at(double x) const { return pdf_fn ? pdf_fn(x) : 0.0; }
  bool has_expect() const { return static_cast<bool>(expect_fn); }

  /// Central-difference density from the cdf; a numerical fallback for
  /// cross-checking the analytic densities.
  double pdf_fd_at(double x, double step_fraction = 1e-6) const {
    const double h = std::max((x_hi - x_lo) * step_fraction, std::abs(x) * 1e-9);
    if (!(h > 0.0)) return 0.0;
    return std::max(0.0, (cdf_fn(x + h) - cdf_fn(x - h)) / (2.0 * h));
  }

  /// E[g(X)]; falls back to atom * g(0) + integral of g * pdf if no
  /// generator-domain evaluator was attached.
  double expect(const std::function<double(double)>& g) const {
    if (expect_fn) return expect_fn(g);
    double acc = atom_mass * g(0.0);
    if (x_hi > x_lo) {
      auto integrand = [&](double x) { return g(x) * pdf_at(x); };
      const QuadratureResult r = integrate_tanh_sinh(integrand, x_lo, x_hi, 1e-9, 1e-15);
      acc += require_converged(r, 1e-9, 1e-15, "law expectation");
    }
    return acc;
  }
};

/// Monotone cubic-Hermite representation of a cdf sampled on a grid, with
/// node slopes taken from the matching density. The Fritsch-Carlson limiter
/// keeps the interpolant nondecreasing, so the exposed pdf (the interpolant
/// derivative) is nonnegative and exactly consistent with the cdf.
class CdfGrid {
 public:
  CdfGrid(std::vector<double> x, std::vector<double> cdf_values,
          std::vector<double> pdf_values, double below_value, double above_value)
      : x_(std::move(x)),
        F_(std::move(cdf_values)),
        m_(std::move(pdf_values)),
        below_(below_value),
        above_(above_value) {
    if (x_.size() < 2 || x_.size() != F_.size() || x_.size() != m_.size())
      throw std::logic_error("CdfGrid: inconsistent grid sizes");
    // sanitize: clamp into [below, above], enforce monotone values and
    // nonnegative slopes before limiting
    for (std::size_t i = 0; i < F_.size(); ++i) {
      F_[i] = std::min(above_, std::max(below_, F_[i]));
      if (i > 0) F_[i] = std::max(F_[i], F_[i - 1]);
      m_[i] = std::max(0.0, m_[i]);
    }
    limit_slopes();
  }

  double cdf(double x) const {
    if (x < x_.front()) return below_;
    if (x >= x_.back()) return F_.back();
    const std::size_t i = cell(x);
    double v = hermite(i, x, false);
    return std::min(above_, std::max(below_, v));
  }

  double pdf(double x) const {
    if (x <= x_.front() || x >= x_.back()) return 0.0;
    const std::size_t i = cell(x);
    return std::max(0.0, hermite(i, x, true));
  }

  const std::vector<double>& nodes() const { return x_; }

 private:
  std::size_t cell(double x) const {
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - x_.begin());
    if (i == 0) return 0;
    if (i >= x_.size()) return x_.size() - 2;
    return i - 1;
  }

  double hermite(std::size_t i, double x, bool derivative) const {
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    if (!derivative) {
      const double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
      const double h10 = t * (1.0 - t) * (1.0 - t);
      const double h01 = t2 * (3.0 - 2.0 * t);
      const double h11 = t2 * (t - 1.0);
      return h00 * F_[i] + h10 * h * m_[i] + h01 * F_[i + 1] + h11 * h * m_[i + 1];
    }
    const double d00 = 6.0 * t * (t - 1.0) / h;  // -d01
    const double d10 = (1.0 - t) * (1.0 - 3.0 * t);
    const double d11 = t * (3.0 * t - 2.0);
    return d00 * (F_[i] - F_[i + 1]) + d10 * m_[i] + d11 * m_[i + 1];
  }

  void limit_slopes() {
    const std::size_t n = x_.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double h = x_[i + 1] - x_[i];
      const double delta = (F_[i + 1] - F_[i]) / h;
      if (delta <= 0.0) {
        m_[i] = 0.0;
        m_[i + 1] = 0.0;
        continue;
      }
      const double alpha = m_[i] / delta;
      const double beta = m_[i + 1] / delta;
      const double r = alpha * alpha + beta * beta;
      if (r > 9.0) {
        const double tau = 3.0 / std::sqrt(r);
        m_[i] = tau * m_[i];
        m_[i + 1] = tau * m_[i + 1];
      }
    }
  }

  std::vector<double> x_, F_, m_;
  double below_, above_;
};

/// Log-spaced grid over [lo, hi] with both endpoints exact.
inline std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2)
    throw std::logic_error("log_spaced: requires 0 < lo < hi and n >= 2");
  std::vector<double> g(n);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(n - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

/// Degenerate law: all mass at a single nonnegative point.
inline SquareChannelLaw point_law(double value) {
  SquareChannelLaw law;
  law.atom_mass = value == 0.0 ? 1.0 : 0.0;
  law.x_lo = law.x_hi = value;
  law.cdf_fn = [value](double x) { return x >= value ? 1.0 : 0.0; };
  law.pdf_fn = [](double) { return 0.0; };
  law.expect_fn = [value](const std::function<double(double)>& g) { return g(value); };
  return law;
}

}  // namespace vlcstat

#endif  // VLCSTAT_SQUARE_LAW_HPP
