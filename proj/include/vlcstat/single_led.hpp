#ifndef VLCSTAT_SINGLE_LED_HPP
#define VLCSTAT_SINGLE_LED_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "vlcstat/channel.hpp"
#include "vlcstat/common.hpp"
#include "vlcstat/distribution.hpp"
#include "vlcstat/quadrature.hpp"
#include "vlcstat/square_law.hpp"

namespace vlcstat {

enum class FovMode { wide, narrow };

namespace detail {

/// Angle in [0, pi/2] whose squared cosine equals the ratio x / c; the
/// ratio is clamped into [0, 1]. asin(sqrt(1 - r)) equals half the inverse
/// cosine of 2r - 1 and stays well conditioned at both ends.
inline double angle_of_ratio(double x, double c) {
  const double r = x / c;
  if (r <= 0.0) return 0.5 * kPi;
  if (r >= 1.0) return 0.0;
  return std::asin(std::sqrt(1.0 - r));
}

/// Law of the squared orientation factor cos^2(theta) (clipped at the FOV in
/// narrow mode) for a random incidence angle. Everything is in radians.
/// The continuous density carries a numerically computed normalization so
/// that atom + continuous mass is one.
struct OrientationSqLaw {
  Distribution theta;   // radian law
  double fov;           // radians
  bool narrow = true;
  double atom = 0.0;    // mass of the zero-gain event
  double norm = 1.0;    // continuous-part normalization
  double u_lo = 0.0;    // continuous support inside [0, 1]
  double u_hi = 0.0;
  bool degenerate = false;  // no continuous part

  OrientationSqLaw(Distribution theta_rad, double fov_rad, bool narrow_mode)
      : theta(std::move(theta_rad)), fov(fov_rad), narrow(narrow_mode) {
    atom = narrow ? 1.0 - theta.cdf(fov) : 0.0;
    const Interval supp = theta.support();
    const double cap = narrow ? fov : 0.5 * kPi;
    const double win_lo = std::max(0.0, supp.lo);
    const double win_hi = std::min(cap, supp.hi);
    if (!(win_hi > win_lo)) {
      degenerate = true;
      return;
    }
    const double c = std::cos(win_hi);
    u_lo = c * c;
    const double c2 = std::cos(win_lo);
    u_hi = c2 * c2;
    const QuadratureResult raw =
        integrate_tanh_sinh([this](double u) { return raw_pdf(u); }, u_lo, u_hi, 1e-11);
    const double raw_mass = require_converged(raw, 1e-9, 1e-14, "orientation-law mass");
    const double target = 1.0 - atom;
    norm = raw_mass > 0.0 ? target / raw_mass : 0.0;
  }

  double raw_pdf(double u) const {
    if (!(u > 0.0 && u < 1.0)) return 0.0;
    const double z = angle_of_ratio(u, 1.0);
    if (narrow && z > fov) return 0.0;
    const double den = std::sqrt(4.0 * u * (1.0 - u));
    return theta.pdf(z) / den;
  }

  double pdf(double u) const { return norm * raw_pdf(u); }

  double cdf(double u) const {
    if (u < 0.0) return 0.0;
    if (u > 1.0) return 1.0;
    const double z = angle_of_ratio(u, 1.0);
    if (narrow) return clamp01(theta.interval_prob(z, fov) + atom);
    return clamp01(1.0 - theta.cdf(z));
  }
};

inline void append_orientation_warnings(const Distribution& theta_rad,
                                        std::vector<std::string>& warnings) {
  const double below_zero = theta_rad.cdf(0.0);
  if (below_zero > 1e-6)
    warnings.push_back(
        "orientation law has mass " + std::to_string(below_zero) +
        " below zero degrees; the analytic square-channel law assumes a nonnegative angle");
}

}  // namespace detail

/// Square-channel law for a deterministic user location. In wide mode the
/// field of view must cover the whole angle law; narrow mode adds a point
/// mass at zero with the clipped tail probability.
inline SquareChannelLaw single_led_law_fixed(const Distribution& theta_deg,
                                             const LinkGeometry& geom, FovMode mode) {
  validate_geometry(geom);
  const double amp = constant_factor(geom) * distance_factor(geom, geom.d);
  const double scale = amp * amp;
  const double fov = deg2rad(geom.fov_deg);

  if (theta_deg.kind() == DistKind::point_mass) {
    const double t = deg2rad(theta_deg.point_value());
    if (mode == FovMode::wide && std::abs(t) > fov)
      throw ConfigError("wide FOV mode requested but the orientation lies outside the FOV");
    const double c = std::cos(t);
    SquareChannelLaw law = point_law(std::abs(t) <= fov ? scale * c * c : 0.0);
    law.scale = scale;
    return law;
  }

  const Distribution theta = theta_deg.scaled(kPi / 180.0);
  if (mode == FovMode::wide) {
    const double clipped = 1.0 - (theta.cdf(fov) - theta.cdf(-fov));
    if (clipped > 1e-6)
      throw ConfigError("wide FOV mode requested but P{|theta| > fov} = " +
                        std::to_string(clipped));
  }

  auto base = std::make_shared<detail::OrientationSqLaw>(theta, fov, mode == FovMode::narrow);
  SquareChannelLaw law;
  law.scale = scale;
  law.atom_mass = base->atom;
  detail::append_orientation_warnings(theta, law.warnings);
  if (base->degenerate) {
    // all mass clipped out of the field of view
    SquareChannelLaw z = point_law(0.0);
    z.scale = scale;
    z.warnings = law.warnings;
    return z;
  }
  law.x_lo = scale * base->u_lo;
  law.x_hi = scale * base->u_hi;
  law.cdf_fn = [base, scale](double x) {
    if (x < 0.0) return 0.0;
    return base->cdf(x / scale);
  };
  law.pdf_fn = [base, scale](double x) { return base->pdf(x / scale) / scale; };

  const Interval supp = theta.support();
  const double t_lo = std::max(-fov, supp.lo);
  const double t_hi = std::min(fov, supp.hi);
  law.expect_fn = [theta, fov, scale, t_lo, t_hi](const std::function<double(double)>& g) {
    const double inside = theta.cdf(fov) - theta.cdf(-fov);
    double acc = (1.0 - inside) * g(0.0);
    if (t_hi > t_lo) {
      auto f = [&](double t) {
        const double c = std::cos(t);
        return g(scale * c * c) * theta.pdf(t);
      };
      const QuadratureResult r = integrate_adaptive(f, t_lo, t_hi, 1e-10, 1e-16);
      acc += require_converged(r, 1e-9, 1e-15, "single-LED expectation");
    }
    return acc;
  };
  return law;
}

/// Law of the squared distance factor (ell^2 + d^2)^{-(gamma+2)} under a
/// random horizontal distance.
inline SquareChannelLaw distance_sq_law(const Distribution& d_dist, const LinkGeometry& geom) {
  validate_geometry(geom);
  const double p = geom.lambertian + 2.0;
  const double ell2 = geom.ell * geom.ell;
  auto y_of = [p, ell2](double s) { return std::pow(ell2 + s * s, -p); };

  if (d_dist.kind() == DistKind::point_mass) {
    const double d0 = d_dist.point_value();
    if (d0 < 0.0) throw ConfigError("location law must be nonnegative");
    return point_law(y_of(d0));
  }

  const Interval supp = d_dist.support();
  if (supp.lo < -1e-9) throw ConfigError("location law must have nonnegative support");
  const double d_lo = std::max(0.0, supp.lo);
  const double d_hi = supp.hi;
  const double y_min = y_of(d_hi);
  const double y_max = y_of(d_lo);

  // distance at which (ell^2 + s^2)^{-p} equals y
  auto s_of = [p, ell2](double y) {
    const double r = std::pow(y, -1.0 / p) - ell2;
    return r > 0.0 ? std::sqrt(r) : 0.0;
  };
  auto raw_pdf = [d_dist, p, ell2, s_of](double y) {
    if (!(y > 0.0)) return 0.0;
    const double r = std::pow(y, -1.0 / p) - ell2;
    if (!(r > 0.0)) return 0.0;
    const double u = std::sqrt(r);
    return std::pow(y, -(p + 1.0) / p) / u * d_dist.pdf(u);
  };
  const QuadratureResult raw =
      integrate_tanh_sinh([&](double y) { return raw_pdf(y); }, y_min, y_max, 1e-11);
  const double mass = d_dist.cdf(d_hi) - d_dist.cdf(d_lo);
  const double norm = require_converged(raw, 1e-8, 1e-14, "distance-law mass");
  const double c_norm = norm > 0.0 ? mass / norm : 0.0;

  SquareChannelLaw law;
  law.x_lo = y_min;
  law.x_hi = y_max;
  law.cdf_fn = [d_dist, s_of, y_max](double y) {
    if (y <= 0.0) return 0.0;
    if (y >= y_max) return 1.0;
    return clamp01(1.0 - d_dist.cdf(s_of(y)));
  };
  law.pdf_fn = [raw_pdf, c_norm](double y) { return c_norm * raw_pdf(y); };
  law.expect_fn = [d_dist, y_of, d_lo, d_hi](const std::function<double(double)>& g) {
    auto f = [&](double s) { return g(y_of(s)) * d_dist.pdf(s); };
    const QuadratureResult r = integrate_adaptive(f, d_lo, d_hi, 1e-10, 1e-16);
    const double mass_d = d_dist.cdf(d_hi) - d_dist.cdf(d_lo);
    return require_converged(r, 1e-9, 1e-15, "distance-law expectation") / mass_d;
  };
  return law;
}

/// Square-channel law when both the incidence angle and the horizontal
/// distance are random and independent. The mixed law keeps the clipped-tail
/// atom of the orientation part; the continuous part is the product law,
/// evaluated by quadrature over the distance and cached on a log-spaced grid
/// with a monotone Hermite interpolant.
inline SquareChannelLaw single_led_law_random(const Distribution& theta_deg,
                                              const Distribution& d_dist,
                                              const LinkGeometry& geom,
                                              std::size_t grid_points = 2048) {
  validate_geometry(geom);
  const double fov = deg2rad(geom.fov_deg);
  const double hc = constant_factor(geom);
  const double hc2 = hc * hc;
  const double p = geom.lambertian + 2.0;
  const double ell2 = geom.ell * geom.ell;

  if (d_dist.kind() == DistKind::point_mass) {
    LinkGeometry fixed = geom;
    fixed.d = d_dist.point_value();
    return single_led_law_fixed(theta_deg, fixed, FovMode::narrow);
  }
  auto y_of = [p, ell2](double s) { return std::pow(ell2 + s * s, -p); };
  const Interval dsupp = d_dist.support();
  if (dsupp.lo < -1e-9) throw ConfigError("location law must have nonnegative support");
  const double d_lo = std::max(0.0, dsupp.lo);
  const double d_hi = dsupp.hi;
  const double mass_d = d_dist.cdf(d_hi) - d_dist.cdf(d_lo);

  if (theta_deg.kind() == DistKind::point_mass) {
    const double t = deg2rad(theta_deg.point_value());
    if (std::abs(t) > fov) return point_law(0.0);
    const double c = std::cos(t);
    const double k = hc2 * c * c;
    SquareChannelLaw base = distance_sq_law(d_dist, geom);
    SquareChannelLaw law;
    law.scale = k;
    law.x_lo = k * base.x_lo;
    law.x_hi = k * base.x_hi;
    auto inner = std::make_shared<SquareChannelLaw>(std::move(base));
    law.cdf_fn = [inner, k](double x) { return inner->cdf_at(x / k); };
    law.pdf_fn = [inner, k](double x) { return inner->pdf_at(x / k) / k; };
    law.expect_fn = [inner, k](const std::function<double(double)>& g) {
      return inner->expect([&](double y) { return g(k * y); });
    };
    return law;
  }

  const Distribution theta = theta_deg.scaled(kPi / 180.0);
  auto base = std::make_shared<detail::OrientationSqLaw>(theta, fov, true);
  std::vector<std::string> warnings;
  detail::append_orientation_warnings(theta, warnings);
  if (base->degenerate) {
    SquareChannelLaw z = point_law(0.0);
    z.warnings = warnings;
    return z;
  }

  const double x_hi = hc2 * y_of(d_lo) * base->u_hi;
  double x_lo = hc2 * y_of(d_hi) * base->u_lo;
  if (!(x_lo > 0.0)) x_lo = x_hi * 1e-12;

  // distance at which x / (hc^2 * y(s)) reaches the ratio v, clamped into
  // the support of the distance law
  auto s_where = [&](double x, double v) {
    if (!(v > 0.0)) return d_lo;  // the ratio stays above a nonpositive level everywhere
    const double r = std::pow(v * hc2 / x, 1.0 / p) - ell2;
    if (!(r > 0.0)) return d_lo;
    return std::min(d_hi, std::max(d_lo, std::sqrt(r)));
  };

  const std::vector<double> grid = log_spaced(x_lo, x_hi, grid_points);
  std::vector<double> cdf_vals(grid.size()), pdf_vals(grid.size());
  const double atom = base->atom;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    const double s_a = s_where(x, base->u_lo);  // below: orientation part still clipped
    const double s_b = s_where(x, base->u_hi);  // above: conditional cdf is one
    double acc = atom * (d_dist.cdf(s_a) - d_dist.cdf(d_lo));
    acc += d_dist.cdf(d_hi) - d_dist.cdf(s_b);
    if (s_b > s_a) {
      auto f_cdf = [&](double s) {
        return base->cdf(x / (hc2 * y_of(s))) * d_dist.pdf(s);
      };
      const QuadratureResult r = integrate_tanh_sinh(f_cdf, s_a, s_b, 1e-9, 1e-14);
      acc += require_converged(r, 1e-8, 1e-13, "random-location cdf");
      auto f_pdf = [&](double s) {
        const double y = hc2 * y_of(s);
        return base->pdf(x / y) / y * d_dist.pdf(s);
      };
      const QuadratureResult rp = integrate_tanh_sinh(f_pdf, s_a, s_b, 1e-9, 1e-14);
      pdf_vals[i] = require_converged(rp, 1e-7, 1e-12, "random-location pdf") / mass_d;
    } else {
      pdf_vals[i] = 0.0;
    }
    cdf_vals[i] = acc / mass_d;
  }

  auto cache = std::make_shared<CdfGrid>(grid, std::move(cdf_vals), std::move(pdf_vals),
                                         atom, 1.0);
  SquareChannelLaw law;
  law.atom_mass = atom;
  law.scale = hc2;
  law.x_lo = grid.front();
  law.x_hi = grid.back();
  law.warnings = std::move(warnings);
  law.cdf_fn = [cache, atom](double x) {
    if (x < 0.0) return 0.0;
    return cache->cdf(x);
  };
  law.pdf_fn = [cache](double x) { return cache->pdf(x); };

  const Interval tsupp = theta.support();
  const double t_lo = std::max(-fov, tsupp.lo);
  const double t_hi = std::min(fov, tsupp.hi);
  law.expect_fn = [theta, d_dist, y_of, hc2, fov, t_lo, t_hi, d_lo, d_hi,
                   mass_d](const std::function<double(double)>& g) {
    const double inside = theta.cdf(fov) - theta.cdf(-fov);
    auto inner = [&](double s) {
      const double k = hc2 * y_of(s);
      double acc = (1.0 - inside) * g(0.0);
      if (t_hi > t_lo) {
        auto f = [&](double t) {
          const double c = std::cos(t);
          return g(k * c * c) * theta.pdf(t);
        };
        const QuadratureResult r = integrate_adaptive(f, t_lo, t_hi, 1e-9, 1e-16);
        acc += r.value;
      }
      return acc;
    };
    auto outer = [&](double s) { return inner(s) * d_dist.pdf(s); };
    const QuadratureResult r = integrate_adaptive(outer, d_lo, d_hi, 1e-9, 1e-15);
    return require_converged(r, 1e-8, 1e-14, "random-location expectation") / mass_d;
  };
  return law;
}

}  // namespace vlcstat

#endif  // VLCSTAT_SINGLE_LED_HPP
