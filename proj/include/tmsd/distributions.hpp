#ifndef TMSD_DISTRIBUTIONS_HPP
#define TMSD_DISTRIBUTIONS_HPP

#include <cmath>
#include <limits>
#include <string>

#include "tmsd/error.hpp"

namespace tmsd {

namespace detail {

/// Regularized lower incomplete gamma P(a,x) by series expansion (x < a+1).
inline double gamma_p_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int i = 0; i < 10000; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

/// Regularized upper incomplete gamma Q(a,x) by continued fraction (x >= a+1).
inline double gamma_q_cf(double a, double x) {
  const double fpmin = std::numeric_limits<double>::min() / 1e-16;
  double b = x + 1.0 - a;
  double c = 1.0 / fpmin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace detail

/// Regularized lower incomplete gamma P(a,x), accuracy ~1e-14 relative.
inline double gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0 || std::isnan(a) || std::isnan(x))
    throw InvalidArg("gamma_p: need a > 0, x >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return detail::gamma_p_series(a, x);
  return 1.0 - detail::gamma_q_cf(a, x);
}

/// Central chi-square CDF with k degrees of freedom.
inline double chi2_cdf(double x, double k) {
  if (!(k > 0.0)) throw InvalidArg("chi2_cdf: k must be positive");
  if (x < 0.0 || std::isnan(x)) throw InvalidArg("chi2_cdf: x must be >= 0");
  return gamma_p(0.5 * k, 0.5 * x);
}

/// Noncentral chi-square CDF, Poisson-mixture series
///   sum_j e^{-l/2} (l/2)^j / j! * chi2_cdf(x, k + 2j),  l = lambda_sq.
/// Terms are accumulated outwards from the Poisson mode until the remaining
/// Poisson mass is below 1e-14.
inline double noncentral_chi2_cdf(double x, double k, double lambda_sq) {
  if (!(k > 0.0) || lambda_sq < 0.0 || std::isnan(lambda_sq))
    throw InvalidArg("noncentral_chi2_cdf: need k > 0, lambda_sq >= 0");
  if (x < 0.0 || std::isnan(x)) throw InvalidArg("noncentral_chi2_cdf: x >= 0");
  if (x == 0.0) return 0.0;
  if (lambda_sq == 0.0) return chi2_cdf(x, k);

  const double half = 0.5 * lambda_sq;
  const long mode = static_cast<long>(half);
  auto log_pois = [&](long j) {
    return -half + j * std::log(half) - std::lgamma(j + 1.0);
  };
  double acc = 0.0;
  double mass = 0.0;
  // downwards from the mode, then upwards from mode+1
  for (long j = mode; j >= 0; --j) {
    double w = std::exp(log_pois(j));
    acc += w * chi2_cdf(x, k + 2.0 * j);
    mass += w;
    if (w < 1e-14 * (mass + 1e-300) && j < mode) break;
  }
  for (long j = mode + 1;; ++j) {
    double w = std::exp(log_pois(j));
    acc += w * chi2_cdf(x, k + 2.0 * j);
    mass += w;
    if (w < 1e-14 && 1.0 - mass < 1e-14) break;
    if (j > mode + 100000) break;  // Poisson tail safeguard
  }
  return acc < 1.0 ? acc : 1.0;
}

/// Quantile of the (non)central chi-square: x with CDF(x) = q, solved by
/// expanding bracket + bisection seeded near mean + normal offset.
inline double noncentral_chi2_quantile(double q, double k, double lambda_sq) {
  if (!(q > 0.0) || !(q < 1.0)) throw InvalidArg("quantile: q in (0,1)");
  if (!(k > 0.0) || lambda_sq < 0.0)
    throw InvalidArg("quantile: need k > 0, lambda_sq >= 0");
  const double mean = k + lambda_sq;
  const double sd = std::sqrt(2.0 * k + 4.0 * lambda_sq);
  // crude normal-approximation seed, then expand to a valid bracket
  double lo = 0.0;
  double hi = mean + 8.0 * sd + 10.0;
  for (int i = 0; i < 200 && noncentral_chi2_cdf(hi, k, lambda_sq) < q; ++i)
    hi *= 2.0;
  if (noncentral_chi2_cdf(hi, k, lambda_sq) < q)
    throw NoConvergence("quantile: bracket [" + std::to_string(lo) + "," +
                        std::to_string(hi) + "] does not reach q");
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (noncentral_chi2_cdf(mid, k, lambda_sq) < q)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-12 * (1.0 + hi)) break;
  }
  return 0.5 * (lo + hi);
}

inline double chi2_quantile(double q, double k) {
  return noncentral_chi2_quantile(q, k, 0.0);
}

}  // namespace tmsd

#endif  // TMSD_DISTRIBUTIONS_HPP
