#include "rpaths/analytic.hpp"

#include <cmath>
#include <stdexcept>

#include "rpaths/gaussian.hpp"

namespace rpaths {

namespace {

constexpr double kPi = 3.141592653589793;
constexpr double kLnPi = 1.1447298858494002;       // ln(pi)
constexpr double kHalfLnPi = 0.5723649429247001;   // ln(sqrt(pi))
constexpr double kLn2 = 0.6931471805599453;

bool is_pole(std::complex<double> z) {
  return z.imag() == 0.0 && z.real() <= 0.0 &&
         z.real() == std::floor(z.real());
}

// Lanczos approximation, g = 7, 9 coefficients. Relative accuracy ~1e-13 on
// Re z >= 0.5; reflection handles the left half plane.
std::complex<double> log_gamma_lanczos(std::complex<double> z) {
  static const double g = 7.0;
  static const double coeff[9] = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  z -= 1.0;
  std::complex<double> x = coeff[0];
  for (int i = 1; i < 9; ++i) x += coeff[i] / (z + static_cast<double>(i));
  const std::complex<double> t = z + g + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t +
         std::log(x);
}

}  // namespace

double hit_probability(const WallModel1D& model, double z, TimeOrNever r) {
  if (r && !(*r >= 0.0))
    throw std::invalid_argument("hit_probability: r < 0");
  if (r && *r == 0.0) return 0.0;
  if (z == 0.0) return 1.0;
  // 1 - e^{-2 lambda r}; never -> 1
  const double w = r ? -std::expm1(-2.0 * model.lambda * *r) : 1.0;
  const double arg =
      std::abs(z) * std::sqrt(2.0 * model.lambda) / (model.eps * std::sqrt(w));
  return 2.0 * gaussian_tail(arg);
}

double conditional_tau0_cdf(const WallModel1D& model, double t) {
  if (t <= 0.0) return 0.0;
  if (model.a == 0.0) return 1.0;  // started at the wall, tau0 = 0
  const double w = -std::expm1(-2.0 * model.lambda * t);
  return std::exp(log_gaussian_tail(model.a / std::sqrt(w)) -
                  log_gaussian_tail(model.a));
}

LimitLaw limit_law_for(Theorem theorem, const WallModel1D& model) {
  LimitLaw law;
  const double lam = model.lambda;
  switch (theorem) {
    case Theorem::th2:
      if (!(model.q_plus > 0.0))
        throw std::invalid_argument("limit_law_for: th2 needs q_plus > 0");
      if (!(model.x0 < 0.0))
        throw std::invalid_argument("limit_law_for: th2 needs x0 < 0");
      law.kind = LawKind::gumbel;
      law.location = std::log(2.0 * lam * model.q_plus * std::abs(model.x0)) / lam;
      law.scale = 1.0 / lam;
      law.centering_coefficient = 2.0 / lam;
      return law;
    case Theorem::th3:
      if (!(model.x0 < 0.0))
        throw std::invalid_argument("limit_law_for: th3 needs x0 < 0");
      law.kind = LawKind::gumbel;
      law.location = std::log(model.x0 * model.x0 * lam) / (2.0 * lam);
      law.scale = 1.0 / (2.0 * lam);
      law.centering_coefficient = 1.0 / lam;
      return law;
    case Theorem::th4:
      if (!(model.q_plus > 0.0))
        throw std::invalid_argument("limit_law_for: th4 needs q_plus > 0");
      law.kind = LawKind::neg_log_abs_normal_affine;
      law.location =
          std::log(model.q_plus) / lam + std::log(2.0 * lam) / (2.0 * lam);
      law.scale = 1.0 / lam;  // Theta enters as location + scale * Theta
      law.centering_coefficient = 1.0 / lam;
      return law;
  }
  throw std::invalid_argument("limit_law_for: unknown theorem");
}

double limit_cdf(const LimitLaw& law, double x) {
  switch (law.kind) {
    case LawKind::gumbel:
      return std::exp(-std::exp(-(x - law.location) / law.scale));
    case LawKind::neg_log_abs_normal_affine:
      // P(loc + scale * (-ln|N|) <= x) = P(|N| >= e^{-(x-loc)/scale})
      return 2.0 * gaussian_tail(std::exp(-(x - law.location) / law.scale));
    case LawKind::saddle_mixture:
      throw std::invalid_argument("limit_cdf: saddle mixture has no closed CDF");
  }
  throw std::invalid_argument("limit_cdf: unknown kind");
}

double limit_quantile(const LimitLaw& law, double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("limit_quantile: p must lie in (0,1)");
  switch (law.kind) {
    case LawKind::gumbel:
      return law.location - law.scale * std::log(-std::log(p));
    case LawKind::neg_log_abs_normal_affine:
      // invert 2(1 - Phi(e^{-(x-loc)/scale})) = p
      return law.location -
             law.scale * std::log(gaussian_upper_quantile(0.5 * p));
    case LawKind::saddle_mixture:
      throw std::invalid_argument("limit_quantile: saddle mixture rejected");
  }
  throw std::invalid_argument("limit_quantile: unknown kind");
}

std::complex<double> complex_log_gamma(std::complex<double> z) {
  if (is_pole(z))
    throw std::invalid_argument("complex_log_gamma: pole at nonpositive integer");
  if (z.real() < 0.5) {
    // Reflection: ln Gamma(z) = ln pi - ln sin(pi z) - ln Gamma(1 - z).
    return kLnPi - std::log(std::sin(kPi * z)) - log_gamma_lanczos(1.0 - z);
  }
  return log_gamma_lanczos(z);
}

namespace {

// E|N|^p = 2^{p/2} Gamma((p+1)/2) / sqrt(pi), valid for Re p > -1.
std::complex<double> log_abs_normal_moment(std::complex<double> p) {
  return 0.5 * p * kLn2 + complex_log_gamma(0.5 * (p + 1.0)) - kHalfLnPi;
}

}  // namespace

std::complex<double> limit_cf(const LimitLaw& law, double t) {
  const std::complex<double> i(0.0, 1.0);
  switch (law.kind) {
    case LawKind::gumbel:
      return std::exp(i * t * law.location +
                      complex_log_gamma(1.0 - i * law.scale * t));
    case LawKind::neg_log_abs_normal_affine:
      return std::exp(i * t * law.location +
                      log_abs_normal_moment(-i * law.scale * t));
    case LawKind::saddle_mixture:
      throw std::invalid_argument("limit_cf: saddle mixture rejected");
  }
  throw std::invalid_argument("limit_cf: unknown kind");
}

std::complex<double> convolution_residual(const WallModel1D& model, double t) {
  if (!(model.q_plus > 0.0 && model.x0 < 0.0))
    throw std::invalid_argument(
        "convolution_residual: needs q_plus > 0 and x0 < 0");
  const LimitLaw th2 = limit_law_for(Theorem::th2, model);
  const LimitLaw th3 = limit_law_for(Theorem::th3, model);
  const LimitLaw th4 = limit_law_for(Theorem::th4, model);
  return limit_cf(th2, t) - limit_cf(th3, t) * limit_cf(th4, t);
}

}  // namespace rpaths
