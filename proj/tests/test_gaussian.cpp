#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "rpaths/gaussian.hpp"

using namespace rpaths;

TEST_CASE("tail values") {
  CHECK(gaussian_tail(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(gaussian_tail(std::sqrt(2.0)) ==
        doctest::Approx(0.078649603525142565).epsilon(1e-12));
  CHECK(gaussian_tail(2.0) ==
        doctest::Approx(0.022750131948179207).epsilon(1e-12));
  CHECK(gaussian_tail(8.0) ==
        doctest::Approx(6.2209605742717841e-16).epsilon(1e-12));
}

TEST_CASE("log tail agrees across branches") {
  // erfc branch vs asymptotic series, against high-precision references
  CHECK(log_gaussian_tail(30.0) ==
        doctest::Approx(-454.32124395634320).epsilon(1e-13));
  CHECK(log_gaussian_tail(40.0) ==
        doctest::Approx(-804.60844201375379).epsilon(1e-13));
  // the asymptotic-series branch agrees with the erfc route wherever both
  // are representable (gaussian_tail uses erfc up to x = 37)
  for (double x = -3.0; x < 36.0; x += 0.7)
    CHECK(log_gaussian_tail(x) ==
          doctest::Approx(std::log(gaussian_tail(x))).epsilon(1e-13));
}

TEST_CASE("tail asymptotic bracket") {
  // 1-Phi(x) ~ phi(x)/x: the finite-x ratio sits just below 1
  for (double x : {6.0, 8.0, 10.0}) {
    const double ratio = gaussian_tail(x) * x * std::sqrt(2.0 * M_PI) *
                         std::exp(0.5 * x * x);
    CHECK(ratio >= 0.97);
    CHECK(ratio <= 1.0);
  }
}

TEST_CASE("quantile basics") {
  CHECK(gaussian_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(gaussian_quantile(0.0), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_quantile(1.0), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_upper_quantile(-0.1), std::invalid_argument);
  CHECK(gaussian_upper_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  // upper quantile is the reflected quantile
  for (double p : {1e-6, 0.01, 0.3, 0.7, 0.99})
    CHECK(gaussian_upper_quantile(p) ==
          doctest::Approx(-gaussian_quantile(p)).epsilon(1e-13));
}

TEST_CASE("tail/quantile round trip to 1e-10 relative") {
  for (double p = 1e-12; p < 1.0 - 1e-12; p *= 1.9) {
    const double x = gaussian_upper_quantile(p);
    CHECK(gaussian_tail(x) == doctest::Approx(p).epsilon(1e-10));
  }
  for (double q : {1.0 - 1e-12, 1.0 - 1e-6, 0.999}) {
    const double x = gaussian_upper_quantile(q);
    CHECK(gaussian_tail(x) == doctest::Approx(q).epsilon(1e-10));
  }
}

TEST_CASE("pdf and cdf consistency") {
  CHECK(gaussian_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-14));
  for (double x = -5.0; x <= 5.0; x += 0.5)
    CHECK(gaussian_cdf(x) + gaussian_tail(x) ==
          doctest::Approx(1.0).epsilon(1e-14));
}
