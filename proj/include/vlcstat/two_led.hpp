#ifndef VLCSTAT_TWO_LED_HPP
#define VLCSTAT_TWO_LED_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "vlcstat/channel.hpp"
#include "vlcstat/common.hpp"
#include "vlcstat/distribution.hpp"
#include "vlcstat/quadrature.hpp"
#include "vlcstat/single_led.hpp"
#include "vlcstat/square_law.hpp"

namespace vlcstat {

/// Deterministic pieces of the two-LED effective channel at a given user
/// offset: per-LED peak squared gains, the total subtended angle and the
/// receiver field of view. Angles in degrees.
struct TwoLedCoefficients {
  double peak_sq1 = 0.0;
  double peak_sq2 = 0.0;
  double phi_deg = 0.0;
  double fov_deg = 0.0;
};

inline TwoLedCoefficients two_led_coefficients(const LinkGeometry& geom, double d) {
  validate_geometry(geom, /*need_spacing=*/true);
  if (!(d >= 0.0 && d <= geom.spacing))
    throw ConfigError("two-LED offset d must lie in [0, spacing]");
  const double hc = constant_factor(geom);
  const double a1 = hc * distance_factor(geom, d);
  const double a2 = hc * distance_factor(geom, geom.spacing - d);
  return {a1 * a1, a2 * a2, phi_sum(d, geom.spacing, geom.ell), geom.fov_deg};
}

/// Incidence angle (degrees) at which the squared orientation factor of an
/// LED with peak squared gain c equals x; x is clamped into [0, c].
inline double incidence_angle_for_gain(double x, double peak_sq) {
  if (!(peak_sq > 0.0)) throw ConfigError("peak squared gain must be positive");
  return rad2deg(detail::angle_of_ratio(x, peak_sq));
}

/// Probabilities of the four visibility cases, each evaluated at x.
/// none_visible is constant in x and equals the zero-gain atom.
struct CdfComponents {
  double both_visible = 0.0;
  double first_only = 0.0;
  double second_only = 0.0;
  double none_visible = 0.0;
  double sum() const { return both_visible + first_only + second_only + none_visible; }
};

enum class TwoLedVariant { full, nonneg_theta, wide_fov, both };

namespace detail {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double phi_rad_at(double s, double spacing, double ell) {
  return std::atan(s / ell) + std::atan((spacing - s) / ell);
}

// linear form u + v * z_led(x); a constant when led == 0
struct LinArg {
  double u = 0.0;
  double v = 0.0;
  int led = 0;
};

inline LinArg constant(double u) { return {u, 0.0, 0}; }
inline LinArg lin(double u, double v, int led) { return {u, v, led}; }

struct Arg {
  enum class Pick { one, take_min, take_max } pick = Pick::one;
  LinArg a, b;
};

inline Arg arg(LinArg a) { return {Arg::Pick::one, a, {}}; }
inline Arg arg_min(LinArg a, LinArg b) { return {Arg::Pick::take_min, a, b}; }
inline Arg arg_max(LinArg a, LinArg b) { return {Arg::Pick::take_max, a, b}; }

struct DeltaTerm {
  Arg lo, hi;
};
struct NablaTerm {
  Arg a, b, c, d;
};

struct ComponentTerms {
  std::array<NablaTerm, 3> nablas{};
  int n_nablas = 0;
  std::array<DeltaTerm, 3> deltas{};
  int n_deltas = 0;
  void add(const NablaTerm& t) { nablas[n_nablas++] = t; }
  void add(const DeltaTerm& t) { deltas[n_deltas++] = t; }
};

/// Everything needed to evaluate the effective-channel cdf/pdf at one x.
struct ZState {
  double x = 0.0;
  double z1 = 0.0, z2 = 0.0;
  double c1 = 0.0, c2 = 0.0;
};

inline ZState make_state(double x, double c1, double c2) {
  return {x, angle_of_ratio(x, c1), angle_of_ratio(x, c2), c1, c2};
}

inline double lin_value(const LinArg& l, const ZState& s) {
  if (l.led == 1) return l.u + l.v * s.z1;
  if (l.led == 2) return l.u + l.v * s.z2;
  return l.u;
}

inline const LinArg& active_branch(const Arg& a, const ZState& s) {
  if (a.pick == Arg::Pick::one) return a.a;
  const double va = lin_value(a.a, s);
  const double vb = lin_value(a.b, s);
  // ties resolve to the first-listed argument
  if (a.pick == Arg::Pick::take_min) return va <= vb ? a.a : a.b;
  return va >= vb ? a.a : a.b;
}

inline double arg_value(const Arg& a, const ZState& s) {
  if (a.pick == Arg::Pick::one) return lin_value(a.a, s);
  const double va = lin_value(a.a, s);
  const double vb = lin_value(a.b, s);
  return a.pick == Arg::Pick::take_min ? std::min(va, vb) : std::max(va, vb);
}

/// d/dx of F_theta applied to a linear form of z_led(x).
inline double dF_dx(const Distribution& theta, const LinArg& l, const ZState& s) {
  if (l.led == 0 || l.v == 0.0) return 0.0;
  const double c = l.led == 1 ? s.c1 : s.c2;
  if (!(s.x > 0.0 && s.x < c)) return 0.0;  // the transform is pinned outside (0, c)
  const double den = std::sqrt(4.0 * s.x * (c - s.x));
  return -l.v * theta.pdf(lin_value(l, s)) / den;
}

inline double eval_delta(const Distribution& theta, const DeltaTerm& t, const ZState& s) {
  return theta.interval_prob(arg_value(t.lo, s), arg_value(t.hi, s));
}

inline double eval_delta_deriv(const Distribution& theta, const DeltaTerm& t,
                               const ZState& s) {
  if (arg_value(t.lo, s) > arg_value(t.hi, s)) return 0.0;
  return dF_dx(theta, active_branch(t.hi, s), s) - dF_dx(theta, active_branch(t.lo, s), s);
}

inline double eval_nabla(const Distribution& theta, const NablaTerm& t, const ZState& s) {
  return theta.joint_interval_prob(arg_value(t.a, s), arg_value(t.b, s),
                                   arg_value(t.c, s), arg_value(t.d, s));
}

inline double eval_nabla_deriv(const Distribution& theta, const NablaTerm& t,
                               const ZState& s) {
  const double a = arg_value(t.a, s), b = arg_value(t.b, s);
  const double c = arg_value(t.c, s), d = arg_value(t.d, s);
  if (a >= b || c >= d || d <= a || b <= c) return 0.0;
  const LinArg& la = active_branch(t.a, s);
  const LinArg& lb = active_branch(t.b, s);
  const LinArg& lc = active_branch(t.c, s);
  const LinArg& ld = active_branch(t.d, s);
  if (c <= a && d > b) return dF_dx(theta, lb, s) - dF_dx(theta, la, s);
  if (c > a && d <= b) return dF_dx(theta, ld, s) - dF_dx(theta, lc, s);
  if (c <= a) return dF_dx(theta, ld, s) - dF_dx(theta, la, s);
  return dF_dx(theta, lb, s) - dF_dx(theta, lc, s);
}

/// The case decomposition of the effective-channel cdf for one user offset.
/// Components 0..2 cover both-visible / first-only / second-only; the
/// constant none-visible probability is kept separately.
struct TwoLedTerms {
  std::array<ComponentTerms, 3> comp{};
  double none_visible = 0.0;
};

inline TwoLedTerms build_terms(TwoLedVariant variant, const Distribution& theta, double th,
                               double phi, bool with_atom = true) {
  TwoLedTerms t;
  const LinArg z1 = lin(0.0, 1.0, 1);
  const LinArg neg_z1 = lin(0.0, -1.0, 1);
  const LinArg phi_minus_z2 = lin(phi, -1.0, 2);
  const LinArg phi_plus_z2 = lin(phi, 1.0, 2);

  switch (variant) {
    case TwoLedVariant::full:
      t.comp[0].add(NablaTerm{arg(constant(-th)), arg(neg_z1), arg(constant(phi - th)),
                              arg(phi_minus_z2)});
      t.comp[0].add(NablaTerm{arg(z1), arg(constant(th)),
                              arg(constant(std::max(0.0, phi - th))), arg(phi_minus_z2)});
      t.comp[0].add(
          NablaTerm{arg(z1), arg(constant(th)), arg(phi_plus_z2), arg(constant(phi + th))});
      t.comp[1].add(DeltaTerm{arg(constant(-th)), arg_min(neg_z1, constant(phi - th))});
      t.comp[1].add(DeltaTerm{arg(z1), arg(constant(std::min(th, phi - th)))});
      t.comp[2].add(NablaTerm{arg(constant(phi - th)), arg(phi_minus_z2),
                              arg(constant(th)), arg(constant(phi))});
      t.comp[2].add(DeltaTerm{arg_max(phi_plus_z2, constant(th)), arg(constant(phi + th))});
      if (with_atom)
        t.none_visible = theta.interval_prob(th, phi - th) + theta.cdf(-th) + 1.0 -
                         theta.cdf(phi + th);
      break;
    case TwoLedVariant::nonneg_theta:
      t.comp[0].add(NablaTerm{arg(z1), arg(constant(th)),
                              arg(constant(std::max(0.0, phi - th))), arg(phi_minus_z2)});
      t.comp[1].add(DeltaTerm{arg(z1), arg(constant(std::min(th, phi - th)))});
      t.comp[2].add(NablaTerm{arg(constant(phi - th)), arg(phi_minus_z2),
                              arg(constant(th)), arg(constant(phi))});
      if (with_atom) t.none_visible = theta.interval_prob(th, phi - th);
      break;
    case TwoLedVariant::wide_fov:
      t.comp[0].add(DeltaTerm{arg(z1), arg(phi_minus_z2)});
      t.comp[0].add(DeltaTerm{arg(constant(-kInf)), arg_min(neg_z1, phi_minus_z2)});
      t.comp[0].add(DeltaTerm{arg_max(z1, phi_plus_z2), arg(constant(kInf))});
      break;
    case TwoLedVariant::both:
      t.comp[0].add(DeltaTerm{arg(z1), arg(phi_minus_z2)});
      break;
  }
  return t;
}

inline double eval_component(const Distribution& theta, const ComponentTerms& c,
                             const ZState& s) {
  double acc = 0.0;
  for (int i = 0; i < c.n_nablas; ++i) acc += eval_nabla(theta, c.nablas[i], s);
  for (int i = 0; i < c.n_deltas; ++i) acc += eval_delta(theta, c.deltas[i], s);
  return acc;
}

inline double eval_component_deriv(const Distribution& theta, const ComponentTerms& c,
                                   const ZState& s) {
  double acc = 0.0;
  for (int i = 0; i < c.n_nablas; ++i) acc += eval_nabla_deriv(theta, c.nablas[i], s);
  for (int i = 0; i < c.n_deltas; ++i) acc += eval_delta_deriv(theta, c.deltas[i], s);
  return acc;
}

/// Fully assembled fixed-offset law in radians.
struct TwoLedFixedLaw {
  Distribution theta;  // radian law
  double th, phi;      // fov and subtended angle, radians
  double c1, c2;
  TwoLedTerms terms;

  TwoLedFixedLaw(Distribution theta_rad, double fov_rad, double phi_rad, double cc1,
                 double cc2, TwoLedVariant variant, bool with_atom = true)
      : theta(std::move(theta_rad)), th(fov_rad), phi(phi_rad), c1(cc1), c2(cc2),
        terms(build_terms(variant, theta, th, phi, with_atom)) {}

  double c_max() const { return std::max(c1, c2); }

  CdfComponents components(double x) const {
    const ZState s = make_state(x, c1, c2);
    return {eval_component(theta, terms.comp[0], s), eval_component(theta, terms.comp[1], s),
            eval_component(theta, terms.comp[2], s), terms.none_visible};
  }

  double cdf(double x) const {
    if (x < 0.0) return 0.0;
    if (x >= c_max()) return 1.0;
    return clamp01(components(x).sum());
  }

  double pdf(double x) const {
    if (!(x > 0.0 && x < c_max())) return 0.0;
    const ZState s = make_state(x, c1, c2);
    double acc = 0.0;
    for (const auto& c : terms.comp) acc += eval_component_deriv(theta, c, s);
    return std::max(0.0, acc);
  }

  /// Physical effective squared gain at incidence angle t (radians).
  double effective_sq(double t) const {
    const double t2 = phi - t;
    const double g1 = std::abs(t) <= th ? c1 * std::cos(t) * std::cos(t) : 0.0;
    const double g2 = std::abs(t2) <= th ? c2 * std::cos(t2) * std::cos(t2) : 0.0;
    return std::max(g1, g2);
  }
};

inline void check_variant_preconditions(TwoLedVariant variant, const Distribution& theta,
                                        double th, double phi) {
  if (variant == TwoLedVariant::nonneg_theta || variant == TwoLedVariant::both) {
    const double q = theta.cdf(0.0) + 1.0 - theta.cdf(phi);
    if (q > 1e-6)
      throw ConfigError("simplified law requires nonnegative incidence angles: "
                        "P{theta outside (0, Phi)} = " +
                        std::to_string(q));
  }
  if (variant == TwoLedVariant::wide_fov || variant == TwoLedVariant::both) {
    const double q1 = theta.cdf(-th) + 1.0 - theta.cdf(th);
    const double q2 = theta.cdf(phi - th) + 1.0 - theta.cdf(phi + th);
    if (q1 + q2 > 1e-6)
      throw ConfigError("simplified law requires both LEDs inside the FOV: "
                        "P{clipped} = " +
                        std::to_string(q1 + q2));
  }
}

inline SquareChannelLaw wrap_fixed_law(std::shared_ptr<TwoLedFixedLaw> impl) {
  SquareChannelLaw law;
  law.atom_mass = impl->terms.none_visible;
  law.x_lo = 0.0;
  law.x_hi = impl->c_max();
  law.scale = impl->c_max();
  law.cdf_fn = [impl](double x) { return impl->cdf(x); };
  law.pdf_fn = [impl](double x) { return impl->pdf(x); };
  const Interval supp = impl->theta.support();
  law.expect_fn = [impl, supp](const std::function<double(double)>& g) {
    auto f = [&](double t) { return g(impl->effective_sq(t)) * impl->theta.pdf(t); };
    const std::vector<double> kinks = {-impl->th, impl->th, impl->phi - impl->th,
                                       impl->phi + impl->th};
    const QuadratureResult r =
        integrate_adaptive(f, supp.lo, supp.hi, 1e-10, 1e-16, kinks);
    return require_converged(r, 1e-9, 1e-15, "two-LED expectation");
  };
  return law;
}

}  // namespace detail

/// Case probabilities of the effective-channel cdf at x for a fixed offset.
inline CdfComponents cdf_components(const Distribution& theta_deg,
                                    const TwoLedCoefficients& k, double x) {
  const detail::TwoLedFixedLaw impl(theta_deg.scaled(kPi / 180.0), deg2rad(k.fov_deg),
                                    deg2rad(k.phi_deg), k.peak_sq1, k.peak_sq2,
                                    TwoLedVariant::full);
  return impl.components(x);
}

/// Effective square-channel law max{h1^2, h2^2} for a deterministic offset d
/// along the LED-to-LED line. The atom at zero carries the probability that
/// both LEDs fall outside the field of view.
inline SquareChannelLaw two_led_law_fixed(const Distribution& theta_deg,
                                          const LinkGeometry& geom, double d,
                                          TwoLedVariant variant = TwoLedVariant::full) {
  const TwoLedCoefficients k = two_led_coefficients(geom, d);
  const Distribution theta = theta_deg.scaled(kPi / 180.0);
  const double th = deg2rad(k.fov_deg);
  const double phi = deg2rad(k.phi_deg);
  detail::check_variant_preconditions(variant, theta, th, phi);
  auto impl = std::make_shared<detail::TwoLedFixedLaw>(theta, th, phi, k.peak_sq1,
                                                       k.peak_sq2, variant);
  return detail::wrap_fixed_law(std::move(impl));
}

/// Simplified laws valid under the stated orientation/FOV conditions;
/// the preconditions are checked and violations reported.
inline SquareChannelLaw two_led_law_fixed_simplified(const Distribution& theta_deg,
                                                     const LinkGeometry& geom, double d,
                                                     TwoLedVariant variant) {
  if (variant == TwoLedVariant::full)
    throw ConfigError("simplified two-LED law requires a non-trivial variant");
  return two_led_law_fixed(theta_deg, geom, d, variant);
}

/// Effective square-channel law with a random offset supported within
/// [0, spacing]: the fixed-offset law averaged over the offset distribution.
/// cdf/pdf are cached on a log-spaced grid.
inline SquareChannelLaw two_led_law_random(const Distribution& theta_deg,
                                           const Distribution& d_dist,
                                           const LinkGeometry& geom,
                                           std::size_t grid_points = 1024) {
  validate_geometry(geom, /*need_spacing=*/true);
  if (d_dist.kind() == DistKind::point_mass)
    return two_led_law_fixed(theta_deg, geom, d_dist.point_value());

  const Interval dsupp = d_dist.support();
  if (dsupp.lo < -1e-9 || dsupp.hi > geom.spacing + 1e-9)
    throw ConfigError("two-LED offset law must be supported within [0, spacing]");
  const double s_lo = std::max(0.0, dsupp.lo);
  const double s_hi = std::min(geom.spacing, dsupp.hi);
  const double mass_d = d_dist.cdf(s_hi) - d_dist.cdf(s_lo);

  const Distribution theta = theta_deg.scaled(kPi / 180.0);
  const double th = deg2rad(geom.fov_deg);
  const double hc = constant_factor(geom);
  const double hc2 = hc * hc;
  const double p = geom.lambertian + 2.0;
  const double ell2 = geom.ell * geom.ell;
  const double D = geom.spacing;

  const double ell = geom.ell;
  auto c1_of = [hc2, ell2, p](double s) { return hc2 * std::pow(ell2 + s * s, -p); };
  auto c2_of = [hc2, ell2, p, D](double s) {
    return hc2 * std::pow(ell2 + (D - s) * (D - s), -p);
  };
  auto slice = [&](double s) {
    return detail::TwoLedFixedLaw(theta, th, detail::phi_rad_at(s, D, ell), c1_of(s),
                                  c2_of(s), TwoLedVariant::full);
  };

  const double x_hi = std::max(c1_of(s_lo), c2_of(s_hi));
  double x_lo = x_hi;
  for (int i = 0; i <= 64; ++i) {
    const double s = s_lo + (s_hi - s_lo) * i / 64.0;
    x_lo = std::min(x_lo, std::min(c1_of(s), c2_of(s)));
  }
  const double cth = std::cos(th);
  x_lo *= cth * cth;
  if (!(x_lo > 0.0)) x_lo = x_hi * 1e-12;

  // offsets at which a peak gain crosses x; the per-slice pdf is singular there
  auto breakpoints_for = [&](double x) {
    std::vector<double> b;
    const double r = std::pow(hc2 / x, 1.0 / p) - ell2;
    if (r > 0.0) {
      const double s = std::sqrt(r);
      if (s > s_lo && s < s_hi) b.push_back(s);
      const double s2 = D - s;
      if (s2 > s_lo && s2 < s_hi) b.push_back(s2);
    }
    std::sort(b.begin(), b.end());
    return b;
  };

  const std::vector<double> grid = log_spaced(x_lo, x_hi, grid_points);
  std::vector<double> cdf_vals(grid.size()), pdf_vals(grid.size());
  double atom = 0.0;
  {
    auto f_atom = [&](double s) {
      const detail::TwoLedFixedLaw lw = slice(s);
      return lw.terms.none_visible * d_dist.pdf(s);
    };
    const QuadratureResult r = integrate_adaptive(f_atom, s_lo, s_hi, 1e-10, 1e-16);
    atom = require_converged(r, 1e-8, 1e-14, "two-LED atom average") / mass_d;
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    const std::vector<double> bps = breakpoints_for(x);
    auto f_cdf = [&](double s) { return slice(s).cdf(x) * d_dist.pdf(s); };
    const QuadratureResult rc = integrate_adaptive(f_cdf, s_lo, s_hi, 1e-7, 1e-13, bps);
    cdf_vals[i] = require_converged(rc, 1e-6, 1e-12, "two-LED cdf average") / mass_d;

    double dens = 0.0;
    double left = s_lo;
    std::vector<double> edges = bps;
    edges.push_back(s_hi);
    auto pdf_slice = [&](double s) {
      const detail::TwoLedFixedLaw lw(theta, th, detail::phi_rad_at(s, D, ell), c1_of(s),
                                      c2_of(s), TwoLedVariant::full, /*with_atom=*/false);
      return lw.pdf(x) * d_dist.pdf(s);
    };
    for (const double right : edges) {
      if (right > left) {
        const QuadratureResult rp = integrate_sqrt_ends(pdf_slice, left, right, 1e-6, 1e-14);
        dens += require_converged(rp, 1e-5, 1e-12, "two-LED pdf average");
      }
      left = right;
    }
    pdf_vals[i] = dens / mass_d;
  }

  auto cache = std::make_shared<CdfGrid>(grid, std::move(cdf_vals), std::move(pdf_vals),
                                         atom, 1.0);
  SquareChannelLaw law;
  law.atom_mass = atom;
  law.scale = hc2;
  law.x_lo = grid.front();
  law.x_hi = grid.back();
  law.cdf_fn = [cache](double x) {
    if (x < 0.0) return 0.0;
    return cache->cdf(x);
  };
  law.pdf_fn = [cache](double x) { return cache->pdf(x); };

  const Interval tsupp = theta.support();
  law.expect_fn = [theta, d_dist, c1_of, c2_of, th, D, ell, s_lo, s_hi, tsupp,
                   mass_d](const std::function<double(double)>& g) {
    auto outer = [&](double s) {
      const detail::TwoLedFixedLaw lw(theta, th, detail::phi_rad_at(s, D, ell), c1_of(s),
                                      c2_of(s), TwoLedVariant::full);
      auto f = [&](double t) { return g(lw.effective_sq(t)) * theta.pdf(t); };
      const std::vector<double> kinks = {-th, th, lw.phi - th, lw.phi + th};
      const QuadratureResult r =
          integrate_adaptive(f, tsupp.lo, tsupp.hi, 1e-9, 1e-16, kinks);
      return r.value * d_dist.pdf(s);
    };
    const QuadratureResult r = integrate_adaptive(outer, s_lo, s_hi, 1e-8, 1e-15);
    return require_converged(r, 1e-7, 1e-14, "two-LED random expectation") / mass_d;
  };
  return law;
}

}  // namespace vlcstat

#endif  // VLCSTAT_TWO_LED_HPP
