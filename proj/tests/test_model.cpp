#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "rpaths/model.hpp"

using namespace rpaths;

TEST_CASE("model validation") {
  CHECK_NOTHROW(WallModel1D(1.0, 0.3, -0.5, -1.0, 0.5));
  CHECK_NOTHROW(WallModel1D(1.0, 0.3, -0.5, -1.0, 0.0));  // characteristic
  CHECK_NOTHROW(WallModel1D(1.0, 0.3, 0.0, -1.0, 0.5));   // start on the wall
  CHECK_THROWS_AS(WallModel1D(0.0, 0.3, -0.5, -1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(WallModel1D(1.0, 0.0, -0.5, -1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(WallModel1D(1.0, 0.3, -1.5, -1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(WallModel1D(1.0, 0.3, 0.1, -1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(WallModel1D(1.0, 0.3, -0.5, -1.0, -0.1), std::invalid_argument);
}

TEST_CASE("derived tail threshold a") {
  const WallModel1D m(2.0, 0.25, -0.5, -1.0, 0.5);
  CHECK(m.a == doctest::Approx(0.5 * std::sqrt(4.0) / 0.25).epsilon(1e-15));
}

TEST_CASE("drift is linear, odd, and sign-preserving") {
  const WallModel1D m1(1.0, 0.3, -0.5, -1.0, 0.5);
  const WallModel1D m2(2.0, 0.3, -0.5, -1.0, 0.5);
  CHECK(drift_1d(m1, 0.0) == 0.0);
  CHECK(drift_1d(m2, 3.0) == doctest::Approx(6.0));
  CHECK(drift_1d(m1, -1.0) == doctest::Approx(-1.0));
  for (double x = -2.0; x <= 2.0; x += 0.25) {
    CHECK(drift_1d(m1, x) == -drift_1d(m1, -x));
    if (x != 0.0) CHECK(drift_1d(m1, x) * x > 0.0);
  }
}

TEST_CASE("time change values and limits") {
  const WallModel1D m1(1.0, 0.3, -0.5, -1.0, 0.5);
  const WallModel1D mh(0.5, 0.3, -0.5, -1.0, 0.5);
  CHECK(time_change(m1, 0.0) == 0.0);
  CHECK(time_change(m1, never) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(time_change(mh, 1.0) ==
        doctest::Approx(0.63212055882855768).epsilon(1e-12));
  CHECK_THROWS_AS(time_change(m1, -0.1), std::invalid_argument);
}

TEST_CASE("time change is increasing, bounded, and inverts to 12 digits") {
  for (double lambda : {0.5, 1.0, 3.0}) {
    const WallModel1D m(lambda, 0.3, -0.5, -1.0, 0.5);
    const double s_max = 1.0 / (2.0 * lambda);
    double prev = -1.0;
    for (int i = 0; i <= 60; ++i) {
      const double t = 0.2 * i;
      const double s = time_change(m, t);
      // strictly increasing until e^{-2 lambda t} drops below double
      // resolution, where s saturates at s_max
      if (2.0 * lambda * t < 30.0) CHECK(s > prev);
      CHECK(s >= prev);
      CHECK(s <= s_max);
      prev = s;
    }
    for (int i = 0; i <= 50; ++i) {
      const double s = (1.0 - 1e-6) * s_max * i / 50.0;
      const double t = time_change_inverse(m, s);
      CHECK(time_change(m, t) == doctest::Approx(s).epsilon(1e-12));
    }
  }
}

TEST_CASE("path position") {
  const WallModel1D m(1.0, 0.2, -0.5, -1.0, 0.5);
  CHECK(path_position(m, 0.0, 0.0) == doctest::Approx(-0.5));
  for (double t : {0.0, 0.7, 3.0})
    CHECK(path_position(m, 2.5, t) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(path_position(m, 3.0, std::log(2.0)) ==
        doctest::Approx(0.2).epsilon(1e-12));
  for (double u = -3.0; u <= 3.0; u += 0.5)
    CHECK(path_position(m, u, 0.0) ==
          doctest::Approx(m.x0 + m.eps * u).epsilon(1e-15));
}

TEST_CASE("brownian clock endpoints") {
  const BrownianClock clock(1.0);
  CHECK(clock.s_max == doctest::Approx(0.5));
  CHECK(clock.s_of_t(TimeOrNever{}) == clock.s_max);
  CHECK_THROWS_AS(clock.t_of_s(clock.s_max), std::invalid_argument);
}
