#ifndef VLCSTAT_QUADRATURE_HPP
#define VLCSTAT_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "vlcstat/common.hpp"

namespace vlcstat {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// Gauss-Legendre nodes/weights by Newton iteration on the Legendre
/// recurrence. Rules are cached per order.
inline const GaussRule& gauss_legendre(int n) {
  static std::map<int, GaussRule> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int k = 0; k < m; ++k) {
    double x = std::cos(kPi * (k + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[k] = -x;
    rule.weights[k] = w;
    rule.nodes[n - 1 - k] = x;
    rule.weights[n - 1 - k] = w;
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

namespace detail {

inline double apply_rule(const std::function<double(double)>& f, double a, double b,
                         const GaussRule& rule, std::size_t& evals) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    ++evals;
  }
  return sum * half;
}

}  // namespace detail

/// Adaptive panel integration: a fixed-order Gauss-Legendre rule per panel
/// (61 points by default), panels bisected until whole-vs-halves agreement
/// meets the tolerance. Optional breakpoints seed the initial panels so
/// kinks land on panel edges.
inline QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a,
                                           double b, double rel_tol = 1e-9,
                                           double abs_tol = 1e-300,
                                           std::vector<double> breakpoints = {},
                                           int rule_order = 61, int max_depth = 40,
                                           std::size_t max_evaluations = 2000000) {
  QuadratureResult res;
  if (!(b > a)) return res;
  const GaussRule& rule = gauss_legendre(rule_order);

  breakpoints.push_back(a);
  breakpoints.push_back(b);
  std::sort(breakpoints.begin(), breakpoints.end());
  struct Panel {
    double lo, hi, estimate;
    int depth;
  };
  std::vector<Panel> work;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double lo = std::max(a, breakpoints[i]);
    const double hi = std::min(b, breakpoints[i + 1]);
    if (!(hi > lo)) continue;
    const double est = detail::apply_rule(f, lo, hi, rule, res.evaluations);
    work.push_back({lo, hi, est, 0});
    total += est;
  }

  double value = 0.0, err = 0.0;
  while (!work.empty()) {
    const Panel p = work.back();
    work.pop_back();
    if (res.evaluations >= max_evaluations) {  // budget spent: keep the estimate
      value += p.estimate;
      err += std::abs(p.estimate) * 1e-3 + abs_tol;
      continue;
    }
    const double mid = 0.5 * (p.lo + p.hi);
    const double left = detail::apply_rule(f, p.lo, mid, rule, res.evaluations);
    const double right = detail::apply_rule(f, mid, p.hi, rule, res.evaluations);
    const double refined = left + right;
    const double panel_err = std::abs(refined - p.estimate);
    const double share = (p.hi - p.lo) / (b - a);
    const double tol = std::max(abs_tol, rel_tol * std::abs(total)) * share;
    // panels whose refinement difference is at rounding level cannot improve
    const double noise_floor = 1e-13 * (std::abs(refined) + std::abs(p.estimate));
    if (panel_err <= tol || panel_err <= noise_floor || p.depth >= max_depth) {
      value += refined;
      err += panel_err;
    } else {
      total += refined - p.estimate;  // keep the global scale current
      work.push_back({p.lo, mid, left, p.depth + 1});
      work.push_back({mid, p.hi, right, p.depth + 1});
    }
  }
  res.value = value;
  res.error_estimate = err;
  return res;
}

/// Integrand form for singular kernels: receives the abscissa, its distance
/// to the nearest interval endpoint (exact even when x itself rounds onto
/// the endpoint) and whether that endpoint is the upper one.
using SidedIntegrand = std::function<double(double x, double gap, bool near_upper)>;

/// Tanh-sinh (double exponential) integration on a finite interval.
/// Weights decay double-exponentially toward the endpoints, so integrable
/// endpoint singularities like 1/sqrt(x(1-x)) converge quickly when the
/// integrand uses the endpoint gap. Nodes where f is not finite are skipped.
inline QuadratureResult integrate_tanh_sinh_sided(const SidedIntegrand& f, double a, double b,
                                                  double rel_tol = 1e-10,
                                                  double abs_tol = 1e-300,
                                                  int max_level = 12) {
  QuadratureResult res;
  if (!(b > a)) return res;
  const double half = 0.5 * (b - a);
  const double t_max = 6.115;

  // The abscissa is placed from the nearest endpoint via the stable form
  // 1 - tanh(s) = 2 e^{-2s} / (1 + e^{-2s}); computing mid + half*tanh(s)
  // directly would lose the endpoint gap to cancellation.
  auto eval = [&](double t) -> double {
    const double s = 0.5 * kPi * std::sinh(std::abs(t));
    const double eu = std::exp(-2.0 * s);  // in (0, 1]
    const double gap = half * 2.0 * eu / (1.0 + eu);
    if (!(gap > 0.0)) return 0.0;
    const bool upper = t >= 0.0;
    const double x = upper ? b - gap : a + gap;
    const double sech2 = 4.0 * eu / ((1.0 + eu) * (1.0 + eu));
    const double w = half * 0.5 * kPi * std::cosh(t) * sech2;
    if (!(w > 0.0) || !std::isfinite(w)) return 0.0;
    const double y = f(x, gap, upper);
    ++res.evaluations;
    if (!std::isfinite(y)) return 0.0;
    return y * w;
  };

  double h = 1.0;
  double sum = eval(0.0);
  for (double t = h; t <= t_max; t += h) sum += eval(t) + eval(-t);
  double integral = sum * h;
  double err = std::abs(integral);

  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    double add = 0.0;
    for (double t = h; t <= t_max; t += 2.0 * h) add += eval(t) + eval(-t);
    const double next = 0.5 * integral + add * h;
    err = std::abs(next - integral);
    integral = next;
    if (level >= 3 && err <= std::max(abs_tol, rel_tol * std::abs(integral))) break;
  }
  res.value = integral;
  res.error_estimate = err;
  return res;
}

/// Plain-abscissa convenience overload; nodes that round onto an endpoint
/// are skipped, which caps the attainable accuracy of strongly singular
/// integrands near 1e-8 relative. Use the sided form for those.
inline QuadratureResult integrate_tanh_sinh(const std::function<double(double)>& f, double a,
                                            double b, double rel_tol = 1e-10,
                                            double abs_tol = 1e-300, int max_level = 12) {
  return integrate_tanh_sinh_sided(
      [&f, a, b](double x, double, bool) {
        if (!(x > a && x < b)) return 0.0;
        return f(x);
      },
      a, b, rel_tol, abs_tol, max_level);
}

/// Adaptive integration tolerant of integrable inverse-square-root
/// singularities at either interval end: each half is integrated in the
/// squared distance from its endpoint, which regularizes such ends, and
/// panel bisection absorbs interior kinks.
inline QuadratureResult integrate_sqrt_ends(const std::function<double(double)>& f, double a,
                                            double b, double rel_tol = 1e-9,
                                            double abs_tol = 1e-300) {
  QuadratureResult res;
  if (!(b > a)) return res;
  const double mid = 0.5 * (a + b);
  auto guarded = [&f](double s) {
    const double y = f(s);
    return std::isfinite(y) ? y : 0.0;
  };
  const QuadratureResult left = integrate_adaptive(
      [&](double t) { return guarded(a + t * t) * 2.0 * t; }, 0.0, std::sqrt(mid - a),
      rel_tol, abs_tol);
  const QuadratureResult right = integrate_adaptive(
      [&](double t) { return guarded(b - t * t) * 2.0 * t; }, 0.0, std::sqrt(b - mid),
      rel_tol, abs_tol);
  res.value = left.value + right.value;
  res.error_estimate = left.error_estimate + right.error_estimate;
  res.evaluations = left.evaluations + right.evaluations;
  return res;
}

/// Throwing wrapper: rejects a result whose error estimate exceeds the
/// requested tolerance by more than a small safety factor.
inline double require_converged(const QuadratureResult& r, double rel_tol, double abs_tol,
                                const std::string& what) {
  const double tol = std::max(abs_tol, rel_tol * std::abs(r.value));
  if (r.error_estimate > 10.0 * tol)
    throw NumericError("quadrature failure in " + what + ": achieved error " +
                       std::to_string(r.error_estimate) + ", required " + std::to_string(tol));
  return r.value;
}

}  // namespace vlcstat

#endif  // VLCSTAT_QUADRATURE_HPP
