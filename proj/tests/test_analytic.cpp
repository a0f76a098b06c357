#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>

#include "doctest.h"
#include "rpaths/analytic.hpp"
#include "rpaths/samplers.hpp"
#include "rpaths/stats.hpp"

using namespace rpaths;
using cd = std::complex<double>;

namespace {
const WallModel1D kModelA(1.0, 0.35, -0.5, -1.0, 0.5);
}

TEST_CASE("hit probability edge cases and value") {
  CHECK(hit_probability(kModelA, 0.0, 1.0) == 1.0);
  CHECK(hit_probability(kModelA, 0.5, 0.0) == 0.0);
  CHECK(hit_probability(kModelA, 0.0, 0.0) == 0.0);  // empty interval
  const WallModel1D unit(1.0, 1.0, -0.5, -1.0, 0.5);
  CHECK(hit_probability(unit, 1.0, never) ==
        doctest::Approx(0.15729920705028513).epsilon(1e-12));
}

TEST_CASE("hit probability monotonicity") {
  double prev = 2.0;
  for (double z = 0.1; z <= 2.0; z += 0.1) {
    const double p = hit_probability(kModelA, z, never);
    CHECK(p < prev);
    prev = p;
  }
  prev = -1.0;
  for (double r = 0.1; r <= 3.0; r += 0.1) {
    const double p = hit_probability(kModelA, 0.4, r);
    CHECK(p > prev);
    prev = p;
  }
  prev = -1.0;
  for (double eps = 0.1; eps <= 1.0; eps += 0.1) {
    const WallModel1D m(1.0, eps, -0.5, -1.0, 0.5);
    const double p = hit_probability(m, 0.4, 1.0);
    CHECK(p > prev);
    prev = p;
  }
}

TEST_CASE("conditional tau0 CDF endpoints and value") {
  CHECK(conditional_tau0_cdf(kModelA, 0.0) == 0.0);
  CHECK(conditional_tau0_cdf(kModelA,
                             std::numeric_limits<double>::infinity()) ==
        doctest::Approx(1.0).epsilon(1e-14));
  const WallModel1D unit(1.0, 1.0, -1.0, -2.0, 0.0);  // a = sqrt(2)
  CHECK(conditional_tau0_cdf(unit, 0.5 * std::log(2.0)) ==
        doctest::Approx(0.28925933416697372).epsilon(1e-12));
}

TEST_CASE("conditional tau0 CDF is a CDF, stable deep in the tail") {
  // a ~ 57: the unstabilized ratio would be 0/0
  const WallModel1D deep(1.0, 0.0125, -0.5, -1.0, 0.0);
  double prev = -1.0;
  for (double t = 0.05; t <= 12.0; t += 0.05) {
    const double c = conditional_tau0_cdf(deep, t);
    CHECK(std::isfinite(c));
    CHECK(c >= prev);
    CHECK(c <= 1.0);
    prev = c;
  }
  CHECK(conditional_tau0_cdf(deep, 12.0) > 0.99);
  CHECK(conditional_tau0_cdf(deep, 0.05) < 1e-6);
  // for fixed t, nonincreasing in a
  double prev_c = 2.0;
  for (double eps : {0.5, 0.35, 0.25, 0.15}) {
    const WallModel1D m(1.0, eps, -0.5, -1.0, 0.0);
    const double c = conditional_tau0_cdf(m, 1.0);
    CHECK(c < prev_c);
    prev_c = c;
  }
}

TEST_CASE("limit law constructors") {
  const WallModel1D m2(1.0, 0.2, -1.0, -2.0, 0.5);
  const LimitLaw th2 = limit_law_for(Theorem::th2, m2);
  CHECK(th2.kind == LawKind::gumbel);
  CHECK(th2.location == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(th2.scale == doctest::Approx(1.0));
  CHECK(th2.centering_coefficient == doctest::Approx(2.0));

  const LimitLaw th3 = limit_law_for(Theorem::th3, m2);
  CHECK(th3.location == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(th3.scale == doctest::Approx(0.5));
  CHECK(th3.centering_coefficient == doctest::Approx(1.0));

  const WallModel1D m4(0.5, 0.2, -1.0, -2.0, 1.0);
  const LimitLaw th4 = limit_law_for(Theorem::th4, m4);
  CHECK(th4.kind == LawKind::neg_log_abs_normal_affine);
  CHECK(th4.location == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(th4.scale == doctest::Approx(2.0));
  CHECK(th4.centering_coefficient == doctest::Approx(2.0));

  const WallModel1D char_bdry(1.0, 0.2, -1.0, -2.0, 0.0);
  CHECK_THROWS_AS(limit_law_for(Theorem::th2, char_bdry), std::invalid_argument);
  CHECK_THROWS_AS(limit_law_for(Theorem::th4, char_bdry), std::invalid_argument);
  const WallModel1D on_wall(1.0, 0.2, 0.0, -2.0, 0.5);
  CHECK_THROWS_AS(limit_law_for(Theorem::th3, on_wall), std::invalid_argument);
}

TEST_CASE("limit cdf values") {
  const LimitLaw g{LawKind::gumbel, 0.0, 1.0, 0.0, {}};
  CHECK(limit_cdf(g, 0.0) == doctest::Approx(0.36787944117144233).epsilon(1e-14));
  CHECK(limit_cdf(g, 60.0) == doctest::Approx(1.0).epsilon(1e-14));
  const LimitLaw th{LawKind::neg_log_abs_normal_affine, 0.0, 1.0, 0.0, {}};
  CHECK(limit_cdf(th, 0.0) ==
        doctest::Approx(0.31731050786291410).epsilon(1e-12));
  LimitLaw mix;
  mix.kind = LawKind::saddle_mixture;
  CHECK_THROWS_AS(limit_cdf(mix, 0.0), std::invalid_argument);
}

TEST_CASE("limit quantile inverts the cdf") {
  const LimitLaw g{LawKind::gumbel, -1.3, 0.7, 0.0, {}};
  const LimitLaw th{LawKind::neg_log_abs_normal_affine, 0.4, 2.0, 0.0, {}};
  for (double p = 0.02; p < 1.0; p += 0.07) {
    CHECK(limit_cdf(g, limit_quantile(g, p)) ==
          doctest::Approx(p).epsilon(1e-10));
    CHECK(limit_cdf(th, limit_quantile(th, p)) ==
          doctest::Approx(p).epsilon(1e-10));
  }
}

TEST_CASE("complex log gamma reference points") {
  CHECK(std::abs(complex_log_gamma(cd(1.0, 0.0))) < 1e-13);
  CHECK(complex_log_gamma(cd(0.5, 0.0)).real() ==
        doctest::Approx(0.57236494292470009).epsilon(1e-13));
  CHECK(complex_log_gamma(cd(5.0, 0.0)).real() ==
        doctest::Approx(3.1780538303479456).epsilon(1e-13));
  // reflection: Gamma(-0.5) = -2 sqrt(pi)
  const cd gm = std::exp(complex_log_gamma(cd(-0.5, 0.0)));
  CHECK(gm.real() == doctest::Approx(-3.5449077018110321).epsilon(1e-12));
  CHECK(std::abs(gm.imag()) < 1e-12);
  CHECK_THROWS_AS(complex_log_gamma(cd(0.0, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(complex_log_gamma(cd(-3.0, 0.0)), std::invalid_argument);
}

TEST_CASE("modulus identity |Gamma(1+it)|^2 = pi t / sinh(pi t)") {
  for (double t : {0.5, 1.0, 2.0, 5.0, 10.0, 30.0, 50.0}) {
    const double lhs =
        std::exp(2.0 * complex_log_gamma(cd(1.0, t)).real());
    const double rhs = M_PI * t / std::sinh(M_PI * t);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
  // |Gamma(1+i)| itself
  CHECK(std::abs(std::exp(complex_log_gamma(cd(1.0, 1.0)))) ==
        doctest::Approx(0.52156404686493984).epsilon(1e-12));
}

TEST_CASE("duplication formula through complex_log_gamma") {
  for (int t = -10; t <= 10; ++t) {
    const cd z(0.5, -0.5 * t);
    const cd lhs = std::exp(complex_log_gamma(z) + complex_log_gamma(z + 0.5));
    const cd rhs = std::exp((1.0 - 2.0 * z) * std::log(2.0) +
                            0.5 * std::log(M_PI) + complex_log_gamma(2.0 * z));
    CHECK(std::abs(lhs - rhs) / std::abs(rhs) < 1e-10);
  }
}

TEST_CASE("characteristic function values") {
  const LimitLaw g{LawKind::gumbel, 0.0, 1.0, 0.0, {}};
  CHECK(std::abs(limit_cf(g, 0.0) - cd(1.0, 0.0)) < 1e-14);
  // Gamma(1 - i)
  const cd v = limit_cf(g, 1.0);
  CHECK(v.real() == doctest::Approx(0.49801566811835604).epsilon(1e-12));
  CHECK(v.imag() == doctest::Approx(0.15494982830181069).epsilon(1e-12));

  // Theta-affine with zero shift and scale 2: E|N|^{-0.7i} at t = 0.35
  const LimitLaw th{LawKind::neg_log_abs_normal_affine, 0.0, 2.0, 0.0, {}};
  CHECK(std::abs(limit_cf(th, 0.0) - cd(1.0, 0.0)) < 1e-14);
  const cd w = limit_cf(th, 0.35);
  CHECK(w.real() == doctest::Approx(0.72747205885341754).epsilon(1e-12));
  CHECK(w.imag() == doctest::Approx(0.26519956911693359).epsilon(1e-12));

  for (const LimitLaw& law : {g, th}) {
    const cd plus = limit_cf(law, 0.7);
    const cd minus = limit_cf(law, -0.7);
    CHECK(std::abs(minus - std::conj(plus)) < 1e-13);
  }
}

TEST_CASE("convolution residual vanishes") {
  const WallModel1D m(1.0, 0.2, -1.0, -2.0, 0.5);
  CHECK(std::abs(convolution_residual(m, 0.0)) < 1e-14);
  CHECK(std::abs(convolution_residual(m, 1.0)) < 1e-10);
  CHECK(std::abs(convolution_residual(m, -1.0) -
                 std::conj(convolution_residual(m, 1.0))) < 1e-13);
  for (double t = -20.0; t <= 20.0; t += 0.5)
    CHECK(std::abs(convolution_residual(m, t)) < 1e-10);
}

TEST_CASE("convolution identity against sampled sums") {
  // Independent oracle for the CF route: the th2 limit must equal the law of
  // the sum of independent th3 and th4 limit draws.
  const WallModel1D m(1.0, 0.2, -1.0, -2.0, 0.5);
  const LimitLaw th2 = limit_law_for(Theorem::th2, m);
  const LimitLaw th3 = limit_law_for(Theorem::th3, m);
  const LimitLaw th4 = limit_law_for(Theorem::th4, m);

  const long n = 200'000;
  std::vector<double> sums(n), direct(n);
  Rng r1(20240817, 1), r2(20240817, 2);
  for (long i = 0; i < n; ++i) {
    sums[i] = sample_limit(th3, r1) + sample_limit(th4, r1);
    direct[i] = sample_limit(th2, r2);
  }
  const auto ks = ks_two_sample(EmpiricalSample::from_draws(std::move(sums)),
                                EmpiricalSample::from_draws(std::move(direct)));
  CHECK(ks.statistic < ks.threshold_1pct);
}
