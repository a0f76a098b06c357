#pragma once

#include "rpaths/analytic.hpp"
#include "rpaths/model.hpp"
#include "rpaths/rng.hpp"

namespace rpaths {

// Draw of N | N > a for a standard normal N. Plain rejection below a = 0.5,
// shifted-exponential proposal rejection (Robert's sampler) above; the
// proposal branch accepts well over half its proposals for a >= 1. The draw
// is strictly greater than a.
double sample_gaussian_tail(double a, Rng& rng);

// Instrumented variant; *proposals counts candidate draws in whichever
// branch ran, for acceptance-rate checks.
double sample_gaussian_tail(double a, Rng& rng, long* proposals);

// Inverse of conditional_tau0_cdf: the time t with P(tau0 <= t | D) = u,
// built from the Gaussian upper quantile s of u (1 - Phi(a)) via
// t = -ln(1 - a^2/s^2) / (2 lambda). Monotone increasing in u.
double tau0_quantile(const WallModel1D& model, double u);

// Inverse-CDF draw of tau0 | D_eps; by construction the draw has CDF exactly
// conditional_tau0_cdf.
double sample_tau0_given_hit(const WallModel1D& model, Rng& rng);

// The residual-life statistic R = -ln(N - a) - ln(a) with N | N > a.
// Requires a > 0.
double sample_R(const WallModel1D& model, Rng& rng);

// Draw from a LimitLaw (all three kinds).
double sample_limit(const LimitLaw& law, Rng& rng);

}  // namespace rpaths
