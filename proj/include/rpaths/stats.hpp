#pragma once

#include <functional>
#include <vector>

namespace rpaths {

// A sorted sample with its ECDF. Construction sorts once; everything else is
// read-only.
struct EmpiricalSample {
  std::vector<double> values;  // ascending
  long n = 0;

  static EmpiricalSample from_draws(std::vector<double> draws);

  double ecdf(double x) const;      // right-continuous, P(X <= x)
  double quantile(double p) const;  // order statistic at level p in (0,1)
};

// One-sample Kolmogorov-Smirnov distance against a CDF:
// sup_i max(|i/n - F(x_i)|, |(i-1)/n - F(x_i)|).
double ks_one_sample(const EmpiricalSample& sample,
                     const std::function<double(double)>& cdf);

struct TwoSampleKs {
  double statistic;
  double threshold_1pct;  // 1.628 sqrt((n1+n2)/(n1 n2))
  bool pass() const { return statistic < threshold_1pct; }
};

TwoSampleKs ks_two_sample(const EmpiricalSample& a, const EmpiricalSample& b);

// DKW uniform ECDF deviation bound sqrt(ln(2/alpha) / (2n)).
double dkw_bound(long n, double alpha);

}  // namespace rpaths
