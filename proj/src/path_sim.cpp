#include "rpaths/path_sim.hpp"

#include <cmath>
#include <string>

#include "rpaths/gaussian.hpp"
#include "rpaths/parallel.hpp"

namespace rpaths {

BudgetExceeded::BudgetExceeded(long attempts)
    : std::runtime_error("rejection budget exceeded after " +
                         std::to_string(attempts) + " paths"),
      attempts_(attempts) {}

PathOutcome simulate_path(const WallModel1D& model, const GridSpec& grid,
                          Rng& rng) {
  if (grid.n_steps < 1)
    throw std::invalid_argument("simulate_path: n_steps < 1");
  const double s_max = 1.0 / (2.0 * model.lambda);
  const long m = std::max<long>(
      1, static_cast<long>(std::ceil(static_cast<double>(grid.n_steps) * s_max)));
  const double md = static_cast<double>(m);
  const double ds = s_max / md;
  const double sqrt_ds = std::sqrt(ds);
  const double inv_two_lambda = s_max;

  const double a_lvl = -model.x0 / model.eps;  // x0 <= 0
  const bool flat_right = (model.q_plus == 0.0);

  PathOutcome out;
  out.grid_warning =
      model.eps * sqrt_ds > (model.q_plus - model.q_minus) / 20.0;

  bool hit_a = false, hit_theta = false, exited = false;
  long k_a = 0, k_theta = 0, k_exit = 0;
  double u_a = 0.0, u_theta = 0.0;
  double w_a = 1.0, w_theta = 1.0;
  // within-cell crossing positions (fraction of the detection cell); bridge
  // detections sit at the cell midpoint
  double frac_a = 1.0, frac_theta = 1.0, frac_exit = 1.0;
  ExitSide side = ExitSide::none;

  // linear crossing point of the path chord against the boundary chord;
  // gap0 = distance below the boundary at the cell start, gap1 = overshoot
  // at the cell end
  auto chord_frac = [](double gap0, double gap1) {
    const double denom = gap0 + gap1;
    return denom > 0.0 ? gap0 / denom : 1.0;
  };

  // x0 = 0 starts on the wall: the level is hit at s = 0.
  if (a_lvl == 0.0) {
    hit_a = true;
    if (flat_right) hit_theta = true;
  }

  double b = 0.0;
  double gp_prev = (model.q_plus - model.x0) / model.eps;  // boundary at s=0
  for (long k = 1; k <= m; ++k) {
    const double b_prev = b;
    b += sqrt_ds * rng.normal();
    const double w = 1.0 - static_cast<double>(k) / md;  // = 1 - 2 lambda s_k
    const double sq = std::sqrt(w);
    const double gp = (model.q_plus * sq - model.x0) / model.eps;

    // One uniform per cell serves both bridge checks. The boundary curve
    // dominates the 0-level, so its crossing probability is the smaller one
    // and a curve crossing always implies a level crossing: the coupling
    // keeps E => D exact pathwise.
    double bridge_u = -1.0;
    auto bridge_fires = [&](double d1, double d2) {
      if (d1 <= 0.0 || d2 <= 0.0) return false;
      const double arg = 2.0 * d1 * d2 / ds;
      if (arg >= 45.0) return false;
      if (bridge_u < 0.0) bridge_u = rng.uniform01();
      return bridge_u < std::exp(-arg);
    };

    // 0-level hit: grid value beyond the level, or a bridge crossing inside
    // the cell. Bridge hits are recorded at the cell end, which keeps the
    // detection a stopping rule of the discrete path.
    if (!hit_a) {
      bool interior = false;
      bool det = b >= a_lvl;
      if (!det && grid.bridge_correction) {
        det = bridge_fires(a_lvl - b_prev, a_lvl - b);
        interior = det;
      }
      if (det) {
        hit_a = true;
        k_a = k;
        u_a = b;
        w_a = w;
        frac_a = interior ? 0.5 : chord_frac(a_lvl - b_prev, b - a_lvl);
      }
    }

    // theta: first crossing of the q_plus boundary, the curve
    // (q_plus sqrt(w) - x0)/eps in clock coordinates. Within a cell the
    // curve is nearly linear, so the same bridge construction applies with
    // the endpoint distances to the moving boundary; interior detections
    // record the boundary value itself.
    bool theta_detected_now = false;
    bool theta_interior = false;
    if (!hit_theta) {
      if (b >= gp) {
        theta_detected_now = true;
      } else if (grid.bridge_correction) {
        theta_detected_now = bridge_fires(gp_prev - b_prev, gp - b);
        theta_interior = theta_detected_now;
      }
      if (theta_detected_now) {
        hit_theta = true;
        k_theta = k;
        u_theta = theta_interior ? gp : b;
        w_theta = w;
        frac_theta =
            theta_interior ? 0.5 : chord_frac(gp_prev - b_prev, b - gp);
      }
    }

    // Exit from (q_minus, q_plus): right at the theta crossing, left at a
    // grid sign change of the lower curve. An interior crossing precedes the
    // grid-point comparisons of the same cell.
    if (!exited) {
      const double gm = (model.q_minus * sq - model.x0) / model.eps;
      const bool left_now = b <= gm;
      if (theta_detected_now && (theta_interior || !left_now)) {
        exited = true;
        side = ExitSide::right;
        k_exit = k;
        frac_exit = frac_theta;
      } else if (left_now) {
        exited = true;
        side = ExitSide::left;
        k_exit = k;
        const double gm_prev =
            (model.q_minus * std::sqrt(w + 1.0 / md) - model.x0) / model.eps;
        frac_exit = chord_frac(b_prev - gm_prev, gm - b);
      }
    }
    gp_prev = gp;
  }

  out.u_infinity = b;

  // Reported event times interpolate the crossing position inside the
  // detection cell (the clock map t = -ln(w)/(2 lambda) stretches the last
  // cells over an unbounded time range, so cell-end times would quantize the
  // tail). The *_clock/*_w/u_at_* records stay at the detection grid point,
  // where they form an exact stopping rule of the discrete path.
  auto t_interp = [&](long k, double frac) {
    double w_star = 1.0 - (static_cast<double>(k - 1) + frac) / md;
    if (!(w_star > 0.0)) w_star = 0.5 / md;
    return -std::log(w_star) * inv_two_lambda;
  };
  auto s_of_k = [&](long k) { return s_max * (static_cast<double>(k) / md); };

  if (hit_a) {
    out.tau0 = (k_a == 0) ? 0.0 : t_interp(k_a, frac_a);
    out.tau0_clock = s_of_k(k_a);
    out.tau0_w = w_a;
    out.u_at_tau0 = u_a;
  }
  if (hit_theta) {
    out.theta = (k_theta == 0) ? 0.0 : t_interp(k_theta, frac_theta);
    out.theta_clock = s_of_k(k_theta);
    out.theta_w = w_theta;
    out.u_at_theta = u_theta;
  }
  if (exited) {
    out.exit_time = t_interp(k_exit, frac_exit);
    out.exit_side = side;
  }

  out.flags.D = hit_a;
  out.flags.E = hit_theta;
  out.flags.F = b > a_lvl;
  out.flags.C = (side == ExitSide::right);
  return out;
}

std::vector<PathOutcome> simulate_batch(const WallModel1D& model,
                                        const GridSpec& grid,
                                        const StreamFamily& streams, long n,
                                        int workers) {
  return parallel_map(n, workers, [&](long i) {
    Rng rng = streams.at(static_cast<std::uint64_t>(i));
    return simulate_path(model, grid, rng);
  });
}

ConditionedExit sample_exit_conditioned_rejection(const WallModel1D& model,
                                                  const GridSpec& grid,
                                                  Rng& rng, long max_paths) {
  for (long attempt = 1; attempt <= max_paths; ++attempt) {
    PathOutcome out = simulate_path(model, grid, rng);
    if (out.flags.C) return {*out.exit_time, std::move(out), attempt};
  }
  throw BudgetExceeded(max_paths);
}

RejectionBatch sample_rejection_batch(const WallModel1D& model,
                                      const GridSpec& grid,
                                      const StreamFamily& streams, long n,
                                      int workers, long max_paths_per_draw) {
  struct Draw {
    double tau;
    long attempts;
  };
  auto draws = parallel_map(n, workers, [&](long i) {
    Rng rng = streams.at(static_cast<std::uint64_t>(i));
    ConditionedExit e =
        sample_exit_conditioned_rejection(model, grid, rng, max_paths_per_draw);
    return Draw{e.tau, e.attempts};
  });
  RejectionBatch batch;
  batch.taus.reserve(static_cast<std::size_t>(n));
  for (const Draw& d : draws) {
    batch.taus.push_back(d.tau);
    batch.attempts += d.attempts;
  }
  return batch;
}

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kSqrt2 = 1.4142135623730951;

// ln erfc(x), relatively accurate for all finite x.
double log_erfc(double x) {
  if (x < 0.0) return std::log(std::erfc(x));
  return kLn2 + log_gaussian_tail(x * kSqrt2);
}

// ln(erf(hi) - erf(lo)) for lo < hi, safe against cancellation and tail
// underflow.
double log_erf_diff(double lo, double hi) {
  if (hi <= 0.0) return log_erf_diff(-hi, -lo);
  if (lo >= 0.0) {
    // erfc(lo) - erfc(hi), both small: factor out the larger tail.
    const double l_lo = log_erfc(lo);
    const double l_hi = log_erfc(hi);
    return l_lo + std::log1p(-std::exp(l_hi - l_lo));
  }
  // Straddling zero: erf(hi) + erf(|lo|), no cancellation.
  return std::log(std::erf(hi) + std::erf(-lo));
}

class DoobDrift {
 public:
  explicit DoobDrift(const WallModel1D& m)
      : lambda_(m.lambda),
        eps2_(m.eps * m.eps),
        c_(std::sqrt(m.lambda) / m.eps),
        lo_(m.q_minus * std::sqrt(m.lambda) / m.eps),
        log_two_c_over_sqrt_pi_(std::log(2.0 * std::sqrt(m.lambda) /
                                         (m.eps * 1.7724538509055160))) {}

  double operator()(double x) const {
    const double hi = x * c_;
    const double log_ratio =
        -hi * hi + log_two_c_over_sqrt_pi_ - log_erf_diff(lo_, hi);
    return lambda_ * x + eps2_ * std::exp(log_ratio);
  }

 private:
  double lambda_, eps2_, c_, lo_, log_two_c_over_sqrt_pi_;
};

}  // namespace

double doob_conditioned_drift(const WallModel1D& model, double x) {
  if (!(model.q_plus > 0.0))
    throw std::invalid_argument("doob_conditioned_drift: needs q_plus > 0");
  if (!(x > model.q_minus && x < model.q_plus))
    throw std::invalid_argument(
        "doob_conditioned_drift: x outside (q_minus, q_plus)");
  return DoobDrift(model)(x);
}

HTransformDraw sample_exit_conditioned_htransform(const WallModel1D& model,
                                                  double dt, Rng& rng,
                                                  long max_attempts) {
  if (!(model.q_plus > 0.0))
    throw std::invalid_argument(
        "sample_exit_conditioned_htransform: needs q_plus > 0");
  if (!(dt > 0.0))
    throw std::invalid_argument("sample_exit_conditioned_htransform: dt <= 0");
  const DoobDrift drift(model);
  const double noise = model.eps * std::sqrt(dt);
  const double guard = model.q_minus + 1e-9;
  constexpr long kMaxSteps = 200'000'000;

  HTransformDraw draw;
  for (long attempt = 1; attempt <= max_attempts; ++attempt) {
    double x = model.x0;
    long steps = 0;
    for (;;) {
      if (x >= model.q_plus) {
        draw.tau = static_cast<double>(steps) * dt;
        draw.attempts = attempt;
        return draw;
      }
      if (x <= model.q_minus) break;  // discretization artifact, retry
      if (x < guard) {
        x = guard;
        ++draw.guarded_steps;
      }
      x += drift(x) * dt + noise * rng.normal();
      ++steps;
      ++draw.steps;
      if (steps > kMaxSteps)
        throw StepSizeError(
            "sample_exit_conditioned_htransform: path exceeded step cap");
    }
  }
  throw BudgetExceeded(max_attempts);
}

HTransformBatch sample_htransform_batch(const WallModel1D& model, double dt,
                                        const StreamFamily& streams, long n,
                                        int workers, long max_attempts) {
  auto draws = parallel_map(n, workers, [&](long i) {
    Rng rng = streams.at(static_cast<std::uint64_t>(i));
    return sample_exit_conditioned_htransform(model, dt, rng, max_attempts);
  });
  HTransformBatch batch;
  batch.taus.reserve(static_cast<std::size_t>(n));
  for (const HTransformDraw& d : draws) {
    batch.taus.push_back(d.tau);
    batch.attempts += d.attempts;
    batch.steps += d.steps;
    batch.guarded_steps += d.guarded_steps;
  }
  batch.left_exit_fraction =
      static_cast<double>(batch.attempts - n) / static_cast<double>(batch.attempts);
  batch.guarded_fraction =
      batch.steps > 0
          ? static_cast<double>(batch.guarded_steps) / static_cast<double>(batch.steps)
          : 0.0;
  if (batch.left_exit_fraction > 0.01)
    throw StepSizeError("h-transform left-exit fraction " +
                        std::to_string(batch.left_exit_fraction) +
                        " exceeds 1%; decrease dt");
  if (batch.guarded_fraction > 1e-4)
    throw StepSizeError("h-transform guarded-step fraction " +
                        std::to_string(batch.guarded_fraction) +
                        " exceeds 0.01%; decrease dt");
  return batch;
}

namespace {

constexpr double kZ99 = 2.5758293035489004;  // two-sided 99% normal quantile

bool pair_flag_a(EventPair pair, const PathFlags& f) {
  switch (pair) {
    case EventPair::CD:
    case EventPair::CE:
      return f.C;
    case EventPair::EF:
      return f.E;
  }
  return false;
}

bool pair_flag_b(EventPair pair, const PathFlags& f) {
  switch (pair) {
    case EventPair::CD:
      return f.D;
    case EventPair::CE:
      return f.E;
    case EventPair::EF:
      return f.F;
  }
  return false;
}

// 99% delta-method half-width for the ratio of indicator means s/a with
// joint counts over n paths.
double ratio_ci(double n, double p_s, double p_a, double p_sa) {
  if (p_a <= 0.0) return 0.0;
  const double var_s = p_s * (1.0 - p_s);
  const double var_a = p_a * (1.0 - p_a);
  const double cov = p_sa - p_s * p_a;
  const double r = p_s / p_a;
  const double v =
      (var_s + r * r * var_a - 2.0 * r * cov) / (p_a * p_a * n);
  return v > 0.0 ? kZ99 * std::sqrt(v) : 0.0;
}

}  // namespace

EquivalenceEstimate equivalence_from_outcomes(
    const std::vector<PathOutcome>& outcomes, EventPair pair) {
  EquivalenceEstimate est;
  est.pair = pair;
  est.n_paths = static_cast<long>(outcomes.size());
  long count_sym_and_a = 0;
  for (const PathOutcome& o : outcomes) {
    const bool a = pair_flag_a(pair, o.flags);
    const bool bb = pair_flag_b(pair, o.flags);
    est.count_a += a;
    est.count_sym_diff += (a != bb);
    count_sym_and_a += (a && !bb);
  }
  est.count_a_minus_b = count_sym_and_a;
  if (est.count_a == 0)
    throw std::runtime_error(
        "estimate_equivalence_ratio: no conditioning events observed");
  const double n = static_cast<double>(est.n_paths);
  const double p_s = static_cast<double>(est.count_sym_diff) / n;
  const double p_a = static_cast<double>(est.count_a) / n;
  const double p_sa = static_cast<double>(count_sym_and_a) / n;
  est.ratio = p_s / p_a;
  est.ci_halfwidth = ratio_ci(n, p_s, p_a, p_sa);
  return est;
}

EquivalenceEstimate estimate_equivalence_ratio(const WallModel1D& model,
                                               const GridSpec& grid,
                                               const StreamFamily& streams,
                                               long n_paths, EventPair pair,
                                               int workers) {
  if (n_paths < 10'000)
    throw std::invalid_argument(
        "estimate_equivalence_ratio: n_paths must be >= 1e4");
  const auto outcomes = simulate_batch(model, grid, streams, n_paths, workers);
  return equivalence_from_outcomes(outcomes, pair);
}

IsometryCheck check_ito_isometry_identity(const WallModel1D& model,
                                          const GridSpec& grid,
                                          const StreamFamily& streams,
                                          long n_paths, int workers) {
  if (n_paths < 10'000)
    throw std::invalid_argument(
        "check_ito_isometry_identity: n_paths must be >= 1e4");
  const auto outcomes = simulate_batch(model, grid, streams, n_paths, workers);
  return isometry_from_outcomes(model, outcomes);
}

IsometryCheck isometry_from_outcomes(
    const WallModel1D& model, const std::vector<PathOutcome>& outcomes) {
  const long n_paths = static_cast<long>(outcomes.size());
  // Delta = eps (B(s_max) - B(s_hit)) / sqrt(w_hit) on D-paths; detections at
  // the clock end have no remaining increment and contribute 0.
  double sum_y = 0.0, sum_y2 = 0.0, sum_yd = 0.0;
  long n_d = 0, n_f = 0;
  for (const PathOutcome& o : outcomes) {
    double y = 0.0;
    if (o.flags.D) {
      ++n_d;
      if (o.tau0_w > 0.0) {
        const double incr = o.u_infinity - o.u_at_tau0;
        const double delta = model.eps * incr / std::sqrt(o.tau0_w);
        y = delta * delta;
      }
    }
    n_f += o.flags.F;
    sum_y += y;
    sum_y2 += y * y;
    sum_yd += y;  // y is already 0 off D, so y*1_D = y
  }
  if (n_d == 0)
    throw std::runtime_error(
        "check_ito_isometry_identity: no D-events observed");

  const double n = static_cast<double>(n_paths);
  IsometryCheck chk;
  chk.n_paths = n_paths;
  chk.pd = static_cast<double>(n_d) / n;
  chk.pf = static_cast<double>(n_f) / n;
  chk.lhs = sum_y / n;
  chk.rhs = model.eps * model.eps * chk.pd / (2.0 * model.lambda);
  chk.ratio = chk.lhs / chk.rhs;

  // Delta-method CI for (mean y)/(c * mean 1_D), c = eps^2/(2 lambda).
  const double mean_y = chk.lhs;
  const double var_y = sum_y2 / n - mean_y * mean_y;
  const double var_d = chk.pd * (1.0 - chk.pd);
  const double cov_yd = sum_yd / n - mean_y * chk.pd;
  const double r = mean_y / chk.pd;
  const double v =
      (var_y + r * r * var_d - 2.0 * r * cov_yd) / (chk.pd * chk.pd * n);
  const double c = model.eps * model.eps / (2.0 * model.lambda);
  chk.ratio_ci = v > 0.0 ? kZ99 * std::sqrt(v) / c : 0.0;

  if (n_f > 0) {
    const double p_f = chk.pf;
    const double p_d = chk.pd;
    // F is a subset of D, so cov(1_D, 1_F) = p_f (1 - p_d).
    const double cov = p_f * (1.0 - p_d);
    const double rr = p_d / p_f;
    const double vv = (p_d * (1.0 - p_d) + rr * rr * p_f * (1.0 - p_f) -
                       2.0 * rr * cov) /
                      (p_f * p_f * n);
    chk.pd_over_pf = rr;
    chk.pd_over_pf_ci = vv > 0.0 ? kZ99 * std::sqrt(vv) : 0.0;
  }
  return chk;
}

double q_statistic(const PathOutcome& outcome, const WallModel1D& model) {
  if (!outcome.theta)
    throw std::invalid_argument("q_statistic: theta never occurred");
  if (!outcome.flags.F)
    throw std::invalid_argument("q_statistic: outcome is not an F-path");
  const double num = model.x0 + model.eps * outcome.u_infinity;
  const double den = model.x0 + model.eps * outcome.u_at_theta;
  return std::log(num / den) / model.lambda;
}

}  // namespace rpaths
