#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "rpaths/rng.hpp"
#include "rpaths/stats.hpp"

using namespace rpaths;

TEST_CASE("one-sample KS hand values") {
  const auto one = EmpiricalSample::from_draws({0.3});
  CHECK(ks_one_sample(one, [](double) { return 0.5; }) ==
        doctest::Approx(0.5));
  const auto two = EmpiricalSample::from_draws({0.1, 0.9});
  const double d = ks_one_sample(two, [](double x) { return x; });
  CHECK(d == doctest::Approx(0.4));
  CHECK_THROWS_AS(ks_one_sample(EmpiricalSample::from_draws({}),
                                [](double x) { return x; }),
                  std::invalid_argument);
}

TEST_CASE("sample from its own law stays below the DKW bound") {
  const long n = 100'000;
  Rng rng(7, 0);
  std::vector<double> draws(n);
  for (long i = 0; i < n; ++i) draws[i] = rng.gumbel();
  const auto s = EmpiricalSample::from_draws(std::move(draws));
  const double d =
      ks_one_sample(s, [](double x) { return std::exp(-std::exp(-x)); });
  CHECK(d < dkw_bound(n, 0.01));
}

TEST_CASE("KS invariance under increasing reparameterization") {
  Rng rng(11, 0);
  std::vector<double> draws(2000);
  for (auto& v : draws) v = rng.gumbel();
  const auto s = EmpiricalSample::from_draws(draws);
  const double d1 =
      ks_one_sample(s, [](double x) { return std::exp(-std::exp(-x)); });
  for (auto& v : draws) v = std::exp(v);
  const auto st = EmpiricalSample::from_draws(draws);
  const double d2 = ks_one_sample(
      st, [](double y) { return std::exp(-std::exp(-std::log(y))); });
  CHECK(d1 == doctest::Approx(d2).epsilon(1e-12));
}

TEST_CASE("two-sample KS extremes") {
  const auto a = EmpiricalSample::from_draws({1.0, 2.0, 3.0});
  CHECK(ks_two_sample(a, a).statistic == doctest::Approx(0.0));
  const auto lo = EmpiricalSample::from_draws({0.0, 0.5, 1.0});
  const auto hi = EmpiricalSample::from_draws({5.0, 6.0});
  CHECK(ks_two_sample(lo, hi).statistic == doctest::Approx(1.0));
  CHECK_THROWS_AS(ks_two_sample(EmpiricalSample::from_draws({}), a),
                  std::invalid_argument);
}

TEST_CASE("two-sample KS holds its level on same-law samples") {
  // 100 seeded repetitions at the 1% level; expect at most a few rejections.
  const long n = 10'000;
  int passes = 0;
  for (int rep = 0; rep < 100; ++rep) {
    Rng r1(1000 + rep, 0), r2(1000 + rep, 1);
    std::vector<double> a(n), b(n);
    for (long i = 0; i < n; ++i) {
      a[i] = r1.gumbel();
      b[i] = r2.gumbel();
    }
    const auto ks = ks_two_sample(EmpiricalSample::from_draws(std::move(a)),
                                  EmpiricalSample::from_draws(std::move(b)));
    passes += ks.pass();
  }
  CHECK(passes >= 95);
}

TEST_CASE("dkw bound") {
  CHECK(dkw_bound(100'000, 0.01) ==
        doctest::Approx(0.0051469978465839854).epsilon(1e-12));
  CHECK(dkw_bound(400, 2.0 / (std::exp(1.0) * std::exp(1.0))) ==
        doctest::Approx(1.0 / 20.0).epsilon(1e-12));
  double prev = 1.0;
  for (long n : {10L, 100L, 1000L, 10000L}) {
    const double b = dkw_bound(n, 0.01);
    CHECK(b < prev);
    prev = b;
  }
  CHECK_THROWS_AS(dkw_bound(0, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(dkw_bound(10, 1.5), std::invalid_argument);
}

TEST_CASE("ecdf limits") {
  const auto s = EmpiricalSample::from_draws({1.0, 2.0, 2.0, 5.0});
  CHECK(s.ecdf(-1e300) == 0.0);
  CHECK(s.ecdf(1e300) == 1.0);
  CHECK(s.ecdf(2.0) == doctest::Approx(0.75));  // right-continuous with ties
}
