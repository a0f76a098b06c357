#include "rpaths/samplers.hpp"

#include <cmath>
#include <stdexcept>

#include "rpaths/gaussian.hpp"

namespace rpaths {

double sample_gaussian_tail(double a, Rng& rng, long* proposals) {
  if (!std::isfinite(a))
    throw std::invalid_argument("sample_gaussian_tail: a not finite");
  long count = 0;
  double x;
  if (a < 0.5) {
    do {
      ++count;
      x = rng.normal();
    } while (!(x > a));
  } else {
    // Robert's proposal: a + Exp(alpha) with alpha = (a + sqrt(a^2+4))/2,
    // accepted with probability exp(-(x - alpha)^2 / 2).
    const double alpha = 0.5 * (a + std::sqrt(a * a + 4.0));
    for (;;) {
      ++count;
      x = a + rng.exponential() / alpha;
      const double d = x - alpha;
      if (std::log(rng.uniform01()) <= -0.5 * d * d) break;
    }
  }
  if (proposals) *proposals += count;
  return x;
}

double sample_gaussian_tail(double a, Rng& rng) {
  return sample_gaussian_tail(a, rng, nullptr);
}

double tau0_quantile(const WallModel1D& model, double u) {
  if (!(u > 0.0 && u < 1.0))
    throw std::invalid_argument("tau0_quantile: u outside (0,1)");
  if (model.a == 0.0) return 0.0;  // started on the wall, tau0 = 0
  const double a = model.a;
  const double tail_a = gaussian_tail(a);
  const double s = gaussian_upper_quantile(u * tail_a);
  // t = -ln(1 - a^2/s^2)/(2 lambda) with 1 - a^2/s^2 = (s-a)(s+a)/s^2.
  // For u -> 1 the quantile flattens against a and s - a loses all digits;
  // the first-order tail expansion tail(a) - q = delta * phi(a) recovers it.
  double delta = s - a;
  if (!(delta > a * 1e-8 + 1e-300)) {
    delta = tail_a * (1.0 - u) / gaussian_pdf(a);
  }
  const double sa = a + delta;  // refreshed s consistent with delta
  const double log_w = std::log(delta) + std::log(sa + a) - 2.0 * std::log(sa);
  return -log_w / (2.0 * model.lambda);
}

double sample_tau0_given_hit(const WallModel1D& model, Rng& rng) {
  return tau0_quantile(model, rng.uniform01());
}

double sample_R(const WallModel1D& model, Rng& rng) {
  if (!(model.a > 0.0)) throw std::invalid_argument("sample_R: needs a > 0");
  const double n = sample_gaussian_tail(model.a, rng);
  return -std::log(n - model.a) - std::log(model.a);
}

double sample_limit(const LimitLaw& law, Rng& rng) {
  switch (law.kind) {
    case LawKind::gumbel:
      return law.location + law.scale * rng.gumbel();
    case LawKind::neg_log_abs_normal_affine:
      return law.location - law.scale * std::log(std::abs(rng.normal()));
    case LawKind::saddle_mixture: {
      const SaddleMixtureSpec& m = law.mixture;
      double out = 0.0;
      if (m.has_heavy) {
        const double v = std::exp(-rng.gumbel());  // standard exponential
        const double xi = m.xi.sample(rng);
        out += std::pow(v, m.mu_over_lambda) * xi * m.heavy_scale;
      }
      if (m.has_gaussian) {
        out += rng.normal() / std::sqrt(m.two_mu);
      }
      return out;
    }
  }
  throw std::invalid_argument("sample_limit: unknown kind");
}

}  // namespace rpaths
