#pragma once

#include <complex>

#include "rpaths/model.hpp"
#include "rpaths/xi.hpp"

namespace rpaths {

// P(D_eps(z, r)): the driving process eps*U hits level z before time r.
// Reflection principle on the Brownian clock:
//   2 (1 - Phi(|z| sqrt(2 lambda) / (eps sqrt(1 - e^{-2 lambda r})))).
// r = never means the full clock. Returns 0 for r = 0 and 1 for z = 0, r > 0.
double hit_probability(const WallModel1D& model, double z, TimeOrNever r);

// P(tau0 <= t | D_eps) = [1 - Phi(a / sqrt(1 - e^{-2 lambda t}))] / [1 - Phi(a)],
// evaluated as exp(logTail(..) - logTail(a)) so the ratio of doubly
// exponentially small tails survives small eps. Extended by 0 for t < 0.
double conditional_tau0_cdf(const WallModel1D& model, double t);

enum class LawKind { gumbel, neg_log_abs_normal_affine, saddle_mixture };

// Parameters of the Theorem 5 mixture
//   1{heavy} V^{mu/lambda} xi / (2 lambda q_+ |x_1|)^{mu/lambda}
//   + 1{gaussian} N / sqrt(2 mu),
// V standard exponential, N standard normal, xi from the configured sampler.
struct SaddleMixtureSpec {
  double mu_over_lambda = 1.0;
  double heavy_scale = 1.0;  // (2 lambda q_+ |x_1|)^{-mu/lambda}
  double two_mu = 2.0;
  bool has_heavy = false;
  bool has_gaussian = true;
  XiSampler xi;
};

// A closed-form limiting distribution together with the eps-dependent
// centering of its limit statement: the raw statistic minus
// centering_coefficient * ln(1/eps) converges to this law, so one object
// serves a whole eps sweep.
struct LimitLaw {
  LawKind kind = LawKind::gumbel;
  double location = 0.0;
  double scale = 1.0;
  double centering_coefficient = 0.0;
  SaddleMixtureSpec mixture;  // meaningful only for saddle_mixture
};

enum class Theorem { th2, th3, th4 };

// th2: Gumbel(ln(2 lambda q_+ |x0|)/lambda, 1/lambda), centering 2/lambda.
// th3: Gumbel(ln(x0^2 lambda)/(2 lambda), 1/(2 lambda)), centering 1/lambda.
// th4: ln(q_+)/lambda + ln(2 lambda)/(2 lambda) + Theta/lambda with
//      Theta = -ln|N|, centering 1/lambda.
// Rejects pairings whose hypotheses the model violates.
LimitLaw limit_law_for(Theorem theorem, const WallModel1D& model);

// CDF for the gumbel and Theta-affine kinds; the mixture has no closed CDF
// and is rejected.
double limit_cdf(const LimitLaw& law, double x);

// Quantile for the gumbel and Theta-affine kinds (QQ plots and bands).
double limit_quantile(const LimitLaw& law, double p);

// Principal branch of ln Gamma(z), Lanczos g=7 with reflection for
// Re z < 0.5. Poles (nonpositive integers) are rejected.
std::complex<double> complex_log_gamma(std::complex<double> z);

// Characteristic function. gumbel(m, s): e^{itm} Gamma(1 - ist). Theta-affine
// with shift c and scale 1/lambda: e^{itc} E|N|^{-it/lambda} via the moment
// formula E|N|^p = 2^{p/2} Gamma((p+1)/2) / sqrt(pi). Mixture rejected.
std::complex<double> limit_cf(const LimitLaw& law, double t);

// cf(th2 limit)(t) - cf(th3 limit)(t) * cf(th4 limit)(t). The centerings
// cancel (2/lambda on one side, 1/lambda + 1/lambda on the other), so no eps
// appears; the convolution identity says this vanishes identically.
std::complex<double> convolution_residual(const WallModel1D& model, double t);

}  // namespace rpaths
