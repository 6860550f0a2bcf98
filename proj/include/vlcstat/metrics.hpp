#ifndef VLCSTAT_METRICS_HPP
#define VLCSTAT_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "vlcstat/common.hpp"
#include "vlcstat/quadrature.hpp"
#include "vlcstat/square_law.hpp"

namespace vlcstat {

/// Gaussian tail probability via the complementary error function.
inline double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

inline double snr_db_to_linear(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

struct BerCurve {
  std::vector<double> snr_db;
  std::vector<double> ber;
};

struct OutageCurve {
  std::vector<double> threshold;
  std::vector<double> outage;
};

/// Average OOK bit-error probability E[Q(sqrt(snr * X))] under the
/// square-channel law. The zero-gain atom contributes exactly atom/2.
/// Evaluated in the generating domain when the law carries one; otherwise
/// by singularity-aware quadrature against the density.
inline double ber_of_law(const SquareChannelLaw& law, double snr_db) {
  const double snr = snr_db_to_linear(snr_db);
  auto g = [snr](double x) { return q_function(std::sqrt(std::max(0.0, snr * x))); };
  double value;
  if (law.has_expect()) {
    value = law.expect(g);
  } else {
    value = law.atom_mass * 0.5;
    if (law.x_hi > law.x_lo) {
      auto integrand = [&](double x) { return g(x) * law.pdf_at(x); };
      const QuadratureResult r =
          integrate_tanh_sinh(integrand, law.x_lo, law.x_hi, 1e-9, 1e-15);
      value += require_converged(r, 1e-8, 1e-14, "bit-error integral");
    }
  }
  return std::min(0.5, std::max(0.0, value));
}

inline BerCurve ber_curve(const SquareChannelLaw& law, const std::vector<double>& snr_db) {
  BerCurve c;
  c.snr_db = snr_db;
  c.ber.reserve(snr_db.size());
  for (const double s : snr_db) c.ber.push_back(ber_of_law(law, s));
  return c;
}

/// Outage probability at each threshold: the cdf of the squared gain.
inline OutageCurve outage_of_law(const SquareChannelLaw& law,
                                 const std::vector<double>& thresholds) {
  OutageCurve c;
  c.threshold = thresholds;
  c.outage.reserve(thresholds.size());
  for (const double t : thresholds) {
    if (t < 0.0) throw ConfigError("outage thresholds must be nonnegative");
    c.outage.push_back(law.cdf_at(t));
  }
  return c;
}

/// SNR (dB) at which the BER curve crosses the target, by bisection on the
/// monotone curve. Throws if the bracket does not straddle the target.
inline double snr_db_at_ber(const SquareChannelLaw& law, double target, double lo_db,
                            double hi_db, double tol_db = 1e-3) {
  double f_lo = ber_of_law(law, lo_db);
  double f_hi = ber_of_law(law, hi_db);
  if (!(f_lo >= target && target >= f_hi))
    throw NumericError("snr_db_at_ber: target " + std::to_string(target) +
                       " not bracketed by [" + std::to_string(f_lo) + ", " +
                       std::to_string(f_hi) + "]");
  double lo = lo_db, hi = hi_db;
  while (hi - lo > tol_db) {
    const double mid = 0.5 * (lo + hi);
    if (ber_of_law(law, mid) >= target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace vlcstat

#endif  // VLCSTAT_METRICS_HPP
