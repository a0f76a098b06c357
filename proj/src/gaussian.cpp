#include "rpaths/gaussian.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rpaths {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2Pi = 0.3989422804014327;  // 1/sqrt(2 pi)
constexpr double kLnSqrt2Pi = 0.9189385332046727;   // ln sqrt(2 pi)

// erfc keeps relative accuracy down to ~1e-300; beyond x ~ 37.5 it
// underflows, so the log path switches to the asymptotic expansion
//   1-Phi(x) = phi(x)/x * (1 - 1/x^2 + 3/x^4 - 15/x^6 + ...)
// which is converged to ~3e-16 already at x = 30.
double tail_series(double x) {
  const double r = 1.0 / (x * x);
  double term = 1.0, sum = 1.0, sign = -1.0, odd = 1.0;
  for (int k = 1; k <= 7; ++k) {
    term *= odd * r;
    sum += sign * term;
    sign = -sign;
    odd += 2.0;
  }
  return sum;
}

// Acklam's rational approximation to Phi^{-1}, absolute error ~1.15e-9.
double quantile_estimate(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
             c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
          a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double gaussian_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double gaussian_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double gaussian_tail(double x) {
  if (x > 37.0) return gaussian_pdf(x) / x * tail_series(x);
  return 0.5 * std::erfc(x / kSqrt2);
}

double log_gaussian_tail(double x) {
  if (std::isinf(x)) return x > 0 ? -std::numeric_limits<double>::infinity()
                                  : 0.0;
  if (x < 30.0) return std::log(0.5 * std::erfc(x / kSqrt2));
  return -0.5 * x * x - std::log(x) - kLnSqrt2Pi + std::log(tail_series(x));
}

double gaussian_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("gaussian_quantile: p must lie in (0,1)");
  double x = quantile_estimate(p);
  // One Newton step on Phi(x) - p; Phi through erfc keeps the residual
  // relatively accurate even for p deep in either tail.
  x -= (gaussian_cdf(x) - p) / gaussian_pdf(x);
  return x;
}

double gaussian_upper_quantile(double q) {
  if (!(q > 0.0 && q < 1.0))
    throw std::invalid_argument("gaussian_upper_quantile: q must lie in (0,1)");
  double x = -quantile_estimate(q);
  x += (gaussian_tail(x) - q) / gaussian_pdf(x);
  return x;
}

}  // namespace rpaths
