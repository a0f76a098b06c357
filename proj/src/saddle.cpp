#include "rpaths/saddle.hpp"

#include <cmath>
#include <stdexcept>

#include "rpaths/parallel.hpp"

namespace rpaths {

namespace {
constexpr double kZ99 = 2.5758293035489004;
}

SaddleModel2D::SaddleModel2D(double lambda_in, double mu_in, double eps_in,
                             double x1_in, double alpha_in, XiSampler xi_in,
                             double q_minus_in, double q_plus_in)
    : lambda(lambda_in),
      mu(mu_in),
      eps(eps_in),
      x1(x1_in),
      alpha(alpha_in),
      xi(xi_in),
      q_minus(q_minus_in),
      q_plus(q_plus_in) {
  if (!(lambda > 0.0)) throw std::invalid_argument("SaddleModel2D: lambda <= 0");
  if (!(mu > 0.0)) throw std::invalid_argument("SaddleModel2D: mu <= 0");
  if (!(eps > 0.0)) throw std::invalid_argument("SaddleModel2D: eps <= 0");
  if (!(x1 < 0.0)) throw std::invalid_argument("SaddleModel2D: x1 >= 0");
  if (!(q_minus < x1)) throw std::invalid_argument("SaddleModel2D: q_minus >= x1");
  if (!(q_plus > 0.0)) throw std::invalid_argument("SaddleModel2D: q_plus <= 0");
  const double v = 2.0 * mu / lambda + alpha;
  beta = std::min(1.0, v);
  regime = v > 1.0   ? SaddleRegime::gaussian_only
           : v < 1.0 ? SaddleRegime::mixture_only
                     : SaddleRegime::intermediate;
}

WallModel1D SaddleModel2D::first_coordinate() const {
  return WallModel1D(lambda, eps, x1, q_minus, q_plus);
}

BetaExponent beta_exponent(const SaddleModel2D& params) {
  return {params.beta, params.regime};
}

double saddle_exit_position(const SaddleModel2D& params, double tau, double xi,
                            double n) {
  const double i_part = std::exp(-params.mu * tau) *
                        std::pow(params.eps, params.alpha) * xi;
  const double var_factor =
      -std::expm1(-2.0 * params.mu * tau) / (2.0 * params.mu);
  return i_part + params.eps * std::sqrt(var_factor) * n;
}

SaddleExit sample_saddle_exit_conditioned(const SaddleModel2D& params,
                                          Rng& rng, ConditionMethod method,
                                          const SamplerOptions& opts) {
  const WallModel1D one_d = params.first_coordinate();
  double tau;
  if (method == ConditionMethod::rejection) {
    tau = sample_exit_conditioned_rejection(one_d, opts.grid, rng,
                                            opts.max_attempts)
              .tau;
  } else {
    tau = sample_exit_conditioned_htransform(one_d, opts.dt, rng,
                                             opts.max_attempts)
              .tau;
  }
  const double xi_draw = params.xi.sample(rng);
  const double n_draw = rng.normal();
  return {tau, saddle_exit_position(params, tau, xi_draw, n_draw)};
}

EmpiricalSample rescaled_exit_sample(const SaddleModel2D& params,
                                     const StreamFamily& streams, long n,
                                     ConditionMethod method,
                                     const SamplerOptions& opts, int workers) {
  if (n < 1000)
    throw std::invalid_argument("rescaled_exit_sample: n must be >= 1e3");
  const double scale = std::pow(params.eps, params.beta);
  auto draws = parallel_map(n, workers, [&](long i) {
    Rng rng = streams.at(static_cast<std::uint64_t>(i));
    return sample_saddle_exit_conditioned(params, rng, method, opts).x2_exit /
           scale;
  });
  return EmpiricalSample::from_draws(std::move(draws));
}

LimitLaw saddle_limit_law(const SaddleModel2D& params) {
  const double v = 2.0 * params.mu / params.lambda + params.alpha;
  LimitLaw law;
  law.kind = LawKind::saddle_mixture;
  law.mixture.mu_over_lambda = params.mu / params.lambda;
  law.mixture.heavy_scale =
      std::pow(2.0 * params.lambda * params.q_plus * std::abs(params.x1),
               -params.mu / params.lambda);
  law.mixture.two_mu = 2.0 * params.mu;
  law.mixture.has_heavy = v <= 1.0;     // beta = 2 mu/lambda + alpha
  law.mixture.has_gaussian = v >= 1.0;  // beta = 1
  law.mixture.xi = params.xi;
  return law;
}

CfCheck conditional_cf_check(double mu, const std::vector<double>& taus,
                             const std::vector<double>& r_grid) {
  CfCheck out;
  const double nn = static_cast<double>(taus.size());
  for (double r : r_grid) {
    double sum = 0.0, sum2 = 0.0;
    for (double tau : taus) {
      const double y =
          std::exp(r * r * std::expm1(-2.0 * mu * tau) / (4.0 * mu));
      sum += y;
      sum2 += y * y;
    }
    CfCheckPoint pt;
    pt.r = r;
    pt.estimate = sum / nn;
    pt.std_error =
        std::sqrt(std::max(0.0, sum2 / nn - pt.estimate * pt.estimate) / nn);
    pt.limit = std::exp(-r * r / (4.0 * mu));
    out.points.push_back(pt);
    const double dev = std::abs(pt.estimate - pt.limit);
    if (dev >= out.max_abs_deviation) {
      out.max_abs_deviation = dev;
      out.ci_at_max = kZ99 * pt.std_error;
    }
  }
  return out;
}

CfCheck conditional_cf_check(const SaddleModel2D& params,
                             const StreamFamily& streams, long n,
                             const std::vector<double>& r_grid,
                             ConditionMethod method, const SamplerOptions& opts,
                             int workers) {
  if (n < 10'000)
    throw std::invalid_argument("conditional_cf_check: n must be >= 1e4");
  const WallModel1D one_d = params.first_coordinate();
  std::vector<double> taus;
  if (method == ConditionMethod::rejection) {
    taus = sample_rejection_batch(one_d, opts.grid, streams, n, workers,
                                  opts.max_attempts)
               .taus;
  } else {
    taus = sample_htransform_batch(one_d, opts.dt, streams, n, workers,
                                   opts.max_attempts)
               .taus;
  }
  return conditional_cf_check(params.mu, taus, r_grid);
}

}  // namespace rpaths
