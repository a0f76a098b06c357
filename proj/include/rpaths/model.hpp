#pragma once

#include <optional>

namespace rpaths {

// A hitting or exit time that may never occur. nullopt means "never"; finite
// times are held as plain doubles. The Brownian clock compactifies t = inf to
// s = 1/(2 lambda), so "ever" events stay decidable on a finite interval.
using TimeOrNever = std::optional<double>;
inline constexpr std::nullopt_t never = std::nullopt;

// The linear 1-D wall problem: dX = lambda X dt + eps dW, X(0) = x0, exit
// from (q_minus, q_plus). q_plus = 0 is the characteristic-boundary case;
// x0 = 0 is the start-on-the-saddle case, where the tail threshold a
// degenerates to 0.
struct WallModel1D {
  double lambda;   // expansion rate, > 0
  double eps;      // noise intensity, > 0
  double x0;       // starting point, q_minus < x0 <= 0
  double q_minus;  // left boundary, < x0
  double q_plus;   // right boundary, >= 0
  double a;        // |x0| sqrt(2 lambda) / eps

  WallModel1D(double lambda, double eps, double x0, double q_minus,
              double q_plus);
};

// The deterministic time change s(t) = (1 - e^{-2 lambda t})/(2 lambda) under
// which U(t) = B(s(t)) for a standard Wiener process B.
struct BrownianClock {
  double lambda;
  double s_max;  // 1/(2 lambda), the clock value of t = inf

  explicit BrownianClock(double lambda);
  double s_of_t(double t) const;
  double s_of_t(TimeOrNever t) const;
  double t_of_s(double s) const;  // inverse, s in [0, s_max)
};

enum class ExitSide { none, left, right };

struct PathFlags {
  bool C = false;  // exits right (q_plus > 0), or tau0 == tau (q_plus = 0)
  bool D = false;  // ever hits 0
  bool E = false;  // ever hits q_plus
  bool F = false;  // x0 + eps U(inf) > 0
};

// Per-trajectory record produced by path simulation. Clock fields hold the
// Brownian-clock coordinate of the event detection; u_at_* hold the value of
// the driving Wiener path at that same detection point, so stopped-martingale
// identities evaluated from the record are exact.
struct PathOutcome {
  TimeOrNever exit_time;
  ExitSide exit_side = ExitSide::none;
  TimeOrNever tau0;   // first time X hits 0
  TimeOrNever theta;  // first time X hits q_plus
  double u_at_theta = 0.0;
  double u_at_tau0 = 0.0;
  double theta_clock = 0.0;  // s coordinate of the theta detection
  double tau0_clock = 0.0;   // s coordinate of the tau0 detection
  double theta_w = 1.0;      // 1 - 2 lambda s at the theta detection, exact
  double tau0_w = 1.0;       // 1 - 2 lambda s at the tau0 detection, exact
  double u_infinity = 0.0;   // B(s_max)
  PathFlags flags;
  bool grid_warning = false;
};

double drift_1d(const WallModel1D& model, double x);

// s(t); rejects negative t, maps "never" to s_max.
double time_change(const WallModel1D& model, double t);
double time_change(const WallModel1D& model, TimeOrNever t);

// t(s) = -ln(1 - 2 lambda s)/(2 lambda), inverse of time_change.
double time_change_inverse(const WallModel1D& model, double s);

// X(t) = e^{lambda t} (x0 + eps u).
double path_position(const WallModel1D& model, double u, double t);

}  // namespace rpaths
