#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "rpaths/saddle.hpp"
#include "rpaths/samplers.hpp"

using namespace rpaths;

namespace {

SaddleModel2D make(double lambda, double mu, double eps, double alpha,
                   XiSampler xi, double q_plus = 0.5) {
  return SaddleModel2D(lambda, mu, eps, -0.25, alpha, xi, -1.0, q_plus);
}

const SamplerOptions kOpts{{2000, true}, 2e-4, 1'000'000};

}  // namespace

TEST_CASE("beta exponent and regimes") {
  const auto g = beta_exponent(make(1.0, 1.0, 0.25, 0.0, XiSampler::point_mass(1.0)));
  CHECK(g.beta == doctest::Approx(1.0));
  CHECK(g.regime == SaddleRegime::gaussian_only);

  const auto m = beta_exponent(make(1.0, 0.25, 0.25, 0.0, XiSampler::point_mass(1.0)));
  CHECK(m.beta == doctest::Approx(0.5));
  CHECK(m.regime == SaddleRegime::mixture_only);

  const auto i = beta_exponent(make(1.0, 0.25, 0.25, 0.5, XiSampler::point_mass(1.0)));
  CHECK(i.beta == doctest::Approx(1.0));
  CHECK(i.regime == SaddleRegime::intermediate);
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(SaddleModel2D(1.0, 1.0, 0.25, 0.1, 0.0,
                                XiSampler::point_mass(1.0), -1.0, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(SaddleModel2D(1.0, -1.0, 0.25, -0.25, 0.0,
                                XiSampler::point_mass(1.0), -1.0, 0.5),
                  std::invalid_argument);
}

TEST_CASE("exit position is a pure function of (tau, xi, n)") {
  const auto params = make(1.0, 0.5, 0.3, 0.25, XiSampler::gaussian());
  const double a = saddle_exit_position(params, 1.7, 0.8, -0.4);
  const double b = saddle_exit_position(params, 1.7, 0.8, -0.4);
  CHECK(a == b);
  // the xi part scales exactly
  for (double c : {-2.0, 0.5, 3.0}) {
    const double base = saddle_exit_position(params, 1.3, 1.0, 0.0);
    CHECK(saddle_exit_position(params, 1.3, c, 0.0) ==
          doctest::Approx(c * base).epsilon(1e-14));
  }
  // sign of the deterministic part follows xi
  CHECK(saddle_exit_position(params, 2.0, 1.0, 0.0) > 0.0);
  CHECK(saddle_exit_position(params, 2.0, -1.0, 0.0) < 0.0);
}

TEST_CASE("xi samplers") {
  Rng rng(301, 0);
  CHECK(XiSampler::point_mass(2.5).sample(rng) == 2.5);
  for (int i = 0; i < 100; ++i) {
    const double u = XiSampler::uniform01().sample(rng);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    const double t = XiSampler::two_point().sample(rng);
    CHECK(std::abs(t) == 1.0);
  }
  CHECK(XiSampler::parse("point:1").value == 1.0);
  CHECK(XiSampler::parse("twopoint").kind == XiSampler::Kind::two_point);
  CHECK_THROWS_AS(XiSampler::parse("nope"), std::invalid_argument);
}

TEST_CASE("gaussian component variance with xi = 0 and strong contraction") {
  // with xi = 0 the rescaled exit is the pure Gaussian term; at mu = 4 the
  // variance factor (1 - e^{-2 mu tau})/(2 mu) is 1/(2 mu) up to e^{-8 tau}
  const auto params = make(1.0, 4.0, 0.3, 0.0, XiSampler::point_mass(0.0));
  const auto sample = rescaled_exit_sample(params, {302, 0}, 5000,
                                           ConditionMethod::htransform, kOpts, 2);
  double sum = 0.0, sum2 = 0.0;
  for (double v : sample.values) {
    sum += v;
    sum2 += v * v;
  }
  const double n = static_cast<double>(sample.n);
  const double var = sum2 / n - (sum / n) * (sum / n);
  CHECK(var == doctest::Approx(1.0 / 8.0).epsilon(0.08));
}

TEST_CASE("conditioned tau forgets eps through e^{-2 mu tau}") {
  double prev = 0.0;
  bool first = true;
  for (double eps : {0.5, 0.35, 0.25}) {
    const auto params = make(1.0, 1.0, eps, 0.0, XiSampler::point_mass(1.0));
    const WallModel1D one_d = params.first_coordinate();
    const auto batch = sample_htransform_batch(one_d, 2e-4, {303, 0}, 3000, 2);
    double mean = 0.0;
    for (double t : batch.taus) mean += std::exp(-2.0 * params.mu * t);
    mean /= static_cast<double>(batch.taus.size());
    if (!first) CHECK(mean < prev);
    prev = mean;
    first = false;
  }
}

TEST_CASE("conditional cf check behaves") {
  const auto params = make(1.0, 1.0, 0.35, 0.0, XiSampler::point_mass(1.0));
  const auto chk = conditional_cf_check(params, {304, 0}, 10'000,
                                        {0.0, 0.5, 1.0, 2.0, 4.0},
                                        ConditionMethod::htransform, kOpts, 2);
  // r = 0: both sides are exactly 1
  CHECK(chk.points.front().estimate == doctest::Approx(1.0));
  CHECK(chk.points.front().limit == doctest::Approx(1.0));
  for (const CfCheckPoint& p : chk.points) {
    CHECK(p.estimate <= 1.0 + 1e-12);
    CHECK(p.estimate >= p.limit - 1e-12);  // finite tau only inflates the cf
  }
}

TEST_CASE("gaussian-only regime matches N/sqrt(2 mu) draws") {
  const auto params = make(1.0, 1.0, 0.35, 0.0, XiSampler::point_mass(0.0));
  const long n = 2000;
  const auto sample = rescaled_exit_sample(params, {305, 0}, n,
                                           ConditionMethod::htransform, kOpts, 2);
  const LimitLaw law = saddle_limit_law(params);
  CHECK(law.mixture.has_gaussian);
  CHECK(!law.mixture.has_heavy);
  std::vector<double> ref(n);
  Rng rng(306, 0);
  for (long i = 0; i < n; ++i) ref[i] = sample_limit(law, rng);
  const auto ks =
      ks_two_sample(sample, EmpiricalSample::from_draws(std::move(ref)));
  CHECK(ks.statistic < ks.threshold_1pct);
}

TEST_CASE("symmetric xi gives a sign-symmetric rescaled law") {
  const auto params = make(1.0, 1.0, 0.35, 0.0, XiSampler::two_point());
  const long n = 2000;
  const auto sample = rescaled_exit_sample(params, {307, 0}, n,
                                           ConditionMethod::htransform, kOpts, 2);
  std::vector<double> flipped(sample.values);
  for (double& v : flipped) v = -v;
  const auto ks =
      ks_two_sample(sample, EmpiricalSample::from_draws(std::move(flipped)));
  CHECK(ks.statistic < ks.threshold_1pct);
}

TEST_CASE("intermediate regime carries both components") {
  // xi uniform(0,1) has positive variance; the independent heavy term lifts
  // the limit-law variance above the Gaussian floor 1/(2 mu), and at fixed
  // eps the sample variance above the same model run with xi = 0.
  const SaddleModel2D params(1.0, 0.25, 0.3, -0.25, 0.5,
                             XiSampler::uniform01(), -1.0, 0.5);
  CHECK(params.regime == SaddleRegime::intermediate);
  const LimitLaw law = saddle_limit_law(params);
  CHECK(law.mixture.has_heavy);
  CHECK(law.mixture.has_gaussian);

  auto variance = [](const std::vector<double>& v) {
    double sum = 0.0, sum2 = 0.0;
    for (double x : v) {
      sum += x;
      sum2 += x * x;
    }
    const double n = static_cast<double>(v.size());
    return sum2 / n - (sum / n) * (sum / n);
  };

  Rng rng(311, 0);
  std::vector<double> limit_draws(100'000);
  for (auto& v : limit_draws) v = sample_limit(law, rng);
  CHECK(variance(limit_draws) > 1.0 / (2.0 * params.mu));

  const long n = 4000;
  const auto with_xi = rescaled_exit_sample(params, {308, 0}, n,
                                            ConditionMethod::htransform, kOpts, 2);
  const SaddleModel2D no_xi(1.0, 0.25, 0.3, -0.25, 0.5,
                            XiSampler::point_mass(0.0), -1.0, 0.5);
  const auto without_xi = rescaled_exit_sample(no_xi, {308, 0}, n,
                                               ConditionMethod::htransform,
                                               kOpts, 2);
  CHECK(variance(with_xi.values) > variance(without_xi.values));
}

TEST_CASE("rejection and h-transform give the same saddle exits") {
  const auto params = make(1.0, 1.0, 0.4, 0.0, XiSampler::point_mass(1.0));
  const long n = 2000;
  const auto a = rescaled_exit_sample(params, {309, 0}, n,
                                      ConditionMethod::htransform, kOpts, 2);
  const auto b = rescaled_exit_sample(params, {310, 0}, n,
                                      ConditionMethod::rejection, kOpts, 2);
  const auto ks = ks_two_sample(a, b);
  CHECK(ks.statistic < ks.threshold_1pct);
}
