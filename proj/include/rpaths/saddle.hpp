#pragma once

#include <vector>

#include "rpaths/analytic.hpp"
#include "rpaths/model.hpp"
#include "rpaths/path_sim.hpp"
#include "rpaths/rng.hpp"
#include "rpaths/stats.hpp"
#include "rpaths/xi.hpp"

namespace rpaths {

enum class SaddleRegime { gaussian_only, mixture_only, intermediate };

// The 2-D linear saddle: dX1 = lambda X1 dt + eps dW1, dX2 = -mu X2 dt
// + eps dW2, started at (x1, eps^alpha xi), exit from the strip
// (q_minus, q_plus) x R conditioned on leaving through q_plus.
struct SaddleModel2D {
  double lambda;  // unstable rate, > 0
  double mu;      // stable rate, > 0
  double eps;
  double x1;  // first-coordinate start, q_minus < x1 < 0
  double alpha;
  XiSampler xi;
  double q_minus, q_plus;  // q_minus < x1 < 0 < q_plus
  double beta;             // 1 ^ (2 mu/lambda + alpha)
  SaddleRegime regime;

  SaddleModel2D(double lambda, double mu, double eps, double x1, double alpha,
                XiSampler xi, double q_minus, double q_plus);

  WallModel1D first_coordinate() const;
};

struct BetaExponent {
  double beta;
  SaddleRegime regime;
};

BetaExponent beta_exponent(const SaddleModel2D& params);

enum class ConditionMethod { rejection, htransform };

struct SamplerOptions {
  GridSpec grid;
  double dt = 1e-4;
  long max_attempts = 2'000'000;
};

// x2 at exit as a deterministic function of the three random inputs:
//   e^{-mu tau} eps^alpha xi + eps sqrt((1 - e^{-2 mu tau})/(2 mu)) n.
// Exact in distribution given tau because W2 is independent of (W1, C) and
// the conditional law of the stochastic term given tau is centered Gaussian
// with that variance.
double saddle_exit_position(const SaddleModel2D& params, double tau, double xi,
                            double n);

struct SaddleExit {
  double tau;
  double x2_exit;
};

// Draws tau from Law(tau | C) with the 1-D machinery on the first
// coordinate, then xi and N, and assembles x2.
SaddleExit sample_saddle_exit_conditioned(const SaddleModel2D& params,
                                          Rng& rng, ConditionMethod method,
                                          const SamplerOptions& opts);

// n draws of x2_exit / eps^beta. Requires n >= 1e3.
EmpiricalSample rescaled_exit_sample(const SaddleModel2D& params,
                                     const StreamFamily& streams, long n,
                                     ConditionMethod method,
                                     const SamplerOptions& opts, int workers);

// The Theorem 5 limit as a sampleable LimitLaw (saddle mixture kind).
LimitLaw saddle_limit_law(const SaddleModel2D& params);

struct CfCheckPoint {
  double r;
  double estimate;  // E[exp(-r^2 (1 - e^{-2 mu tau})/(4 mu)) | C]
  double std_error;
  double limit;  // e^{-r^2/(4 mu)}
};

struct CfCheck {
  std::vector<CfCheckPoint> points;
  double max_abs_deviation = 0.0;
  double ci_at_max = 0.0;  // 99% half-width of the estimate at the max point
};

// Estimates the conditional characteristic function of the Gaussian exit
// component on a grid of frequencies and compares with its limit.
CfCheck conditional_cf_check(const SaddleModel2D& params,
                             const StreamFamily& streams, long n,
                             const std::vector<double>& r_grid,
                             ConditionMethod method, const SamplerOptions& opts,
                             int workers);

// Same comparison over an existing set of conditioned tau draws.
CfCheck conditional_cf_check(double mu, const std::vector<double>& taus,
                             const std::vector<double>& r_grid);

}  // namespace rpaths
