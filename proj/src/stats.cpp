#include "rpaths/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rpaths {

EmpiricalSample EmpiricalSample::from_draws(std::vector<double> draws) {
  std::sort(draws.begin(), draws.end());
  EmpiricalSample s;
  s.n = static_cast<long>(draws.size());
  s.values = std::move(draws);
  return s;
}

double EmpiricalSample::ecdf(double x) const {
  if (n == 0) throw std::invalid_argument("EmpiricalSample: empty");
  const auto it = std::upper_bound(values.begin(), values.end(), x);
  return static_cast<double>(it - values.begin()) / static_cast<double>(n);
}

double EmpiricalSample::quantile(double p) const {
  if (n == 0) throw std::invalid_argument("EmpiricalSample: empty");
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("EmpiricalSample: p outside (0,1)");
  const long idx = std::min<long>(n - 1, static_cast<long>(p * n));
  return values[static_cast<std::size_t>(idx)];
}

double ks_one_sample(const EmpiricalSample& sample,
                     const std::function<double(double)>& cdf) {
  if (sample.n == 0) throw std::invalid_argument("ks_one_sample: empty sample");
  const double n = static_cast<double>(sample.n);
  double d = 0.0;
  for (long i = 0; i < sample.n; ++i) {
    const double f = cdf(sample.values[static_cast<std::size_t>(i)]);
    const double hi = (static_cast<double>(i) + 1.0) / n - f;
    const double lo = f - static_cast<double>(i) / n;
    d = std::max({d, std::abs(hi), std::abs(lo)});
  }
  return d;
}

TwoSampleKs ks_two_sample(const EmpiricalSample& a, const EmpiricalSample& b) {
  if (a.n == 0 || b.n == 0)
    throw std::invalid_argument("ks_two_sample: empty sample");
  // Merge walk over both sorted samples; ties advance both ECDFs before the
  // difference is taken, which is the standard right-continuous convention.
  double d = 0.0;
  std::size_t i = 0, j = 0;
  const auto& x = a.values;
  const auto& y = b.values;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    const double fa = static_cast<double>(i) / static_cast<double>(a.n);
    const double fb = static_cast<double>(j) / static_cast<double>(b.n);
    d = std::max(d, std::abs(fa - fb));
  }
  // Remaining points only bring the lagging ECDF up to 1; the gap there is
  // 1 - other, already covered at the last processed point.
  const double n1 = static_cast<double>(a.n);
  const double n2 = static_cast<double>(b.n);
  return {d, 1.628 * std::sqrt((n1 + n2) / (n1 * n2))};
}

double dkw_bound(long n, double alpha) {
  if (n < 1) throw std::invalid_argument("dkw_bound: n < 1");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("dkw_bound: alpha outside (0,1)");
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

}  // namespace rpaths
