#include "rpaths/model.hpp"

#include <cmath>
#include <stdexcept>

namespace rpaths {

WallModel1D::WallModel1D(double lambda_in, double eps_in, double x0_in,
                         double q_minus_in, double q_plus_in)
    : lambda(lambda_in),
      eps(eps_in),
      x0(x0_in),
      q_minus(q_minus_in),
      q_plus(q_plus_in) {
  if (!(lambda > 0.0)) throw std::invalid_argument("WallModel1D: lambda <= 0");
  if (!(eps > 0.0)) throw std::invalid_argument("WallModel1D: eps <= 0");
  if (!(q_minus < x0))
    throw std::invalid_argument("WallModel1D: need q_minus < x0");
  if (!(x0 <= 0.0)) throw std::invalid_argument("WallModel1D: need x0 <= 0");
  if (!(q_plus >= 0.0))
    throw std::invalid_argument("WallModel1D: need q_plus >= 0");
  a = std::abs(x0) * std::sqrt(2.0 * lambda) / eps;
}

BrownianClock::BrownianClock(double lambda_in) : lambda(lambda_in) {
  if (!(lambda > 0.0)) throw std::invalid_argument("BrownianClock: lambda <= 0");
  s_max = 1.0 / (2.0 * lambda);
}

double BrownianClock::s_of_t(double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("BrownianClock: t < 0");
  return -std::expm1(-2.0 * lambda * t) / (2.0 * lambda);
}

double BrownianClock::s_of_t(TimeOrNever t) const {
  return t ? s_of_t(*t) : s_max;
}

double BrownianClock::t_of_s(double s) const {
  if (!(s >= 0.0 && s < s_max))
    throw std::invalid_argument("BrownianClock: s outside [0, s_max)");
  return -std::log1p(-2.0 * lambda * s) / (2.0 * lambda);
}

double drift_1d(const WallModel1D& model, double x) { return model.lambda * x; }

double time_change(const WallModel1D& model, double t) {
  return BrownianClock(model.lambda).s_of_t(t);
}

double time_change(const WallModel1D& model, TimeOrNever t) {
  return BrownianClock(model.lambda).s_of_t(t);
}

double time_change_inverse(const WallModel1D& model, double s) {
  return BrownianClock(model.lambda).t_of_s(s);
}

double path_position(const WallModel1D& model, double u, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("path_position: t < 0");
  return std::exp(model.lambda * t) * (model.x0 + model.eps * u);
}

}  // namespace rpaths
