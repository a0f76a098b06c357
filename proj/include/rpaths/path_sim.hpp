#pragma once

#include <stdexcept>
#include <vector>

#include "rpaths/model.hpp"
#include "rpaths/rng.hpp"

namespace rpaths {

// Uniform grid on the Brownian clock [0, s_max]. n_steps counts cells per
// unit of clock time (>= 1000 for production runs); the grid always covers
// [0, s_max] exactly. With bridge_correction on, level hits of the 0-level
// are registered inside cells with the Brownian-bridge crossing probability
// exp(-2 d1 d2 / ds); curved-boundary crossings use grid sign changes only.
struct GridSpec {
  long n_steps = 4000;
  bool bridge_correction = true;
};

// Rejection-sampling budget exhausted; carries how many paths were tried.
class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(long attempts);
  long attempts() const { return attempts_; }

 private:
  long attempts_;
};

// The h-transform integrator stepped outside its tolerances (too many
// left exits or guarded steps for the chosen dt).
class StepSizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Simulates the driving Wiener path B on the clock grid, reconstructs
// X(t) = e^{lambda t}(x0 + eps B(s)), and classifies exit, tau0, theta and
// the flags C, D, E, F. The whole clock is always simulated, so "ever"
// events are decided exactly; the path record keeps the B value and clock
// weight at each detection point.
PathOutcome simulate_path(const WallModel1D& model, const GridSpec& grid,
                          Rng& rng);

std::vector<PathOutcome> simulate_batch(const WallModel1D& model,
                                        const GridSpec& grid,
                                        const StreamFamily& streams, long n,
                                        int workers);

struct ConditionedExit {
  double tau = 0.0;
  PathOutcome outcome;
  long attempts = 0;
};

// Simulates paths until one carries the conditioning flag C; throws
// BudgetExceeded(max_paths) if none shows up.
ConditionedExit sample_exit_conditioned_rejection(const WallModel1D& model,
                                                  const GridSpec& grid,
                                                  Rng& rng, long max_paths);

struct RejectionBatch {
  std::vector<double> taus;
  long attempts = 0;  // total paths simulated, accepted ones included
};

RejectionBatch sample_rejection_batch(const WallModel1D& model,
                                      const GridSpec& grid,
                                      const StreamFamily& streams, long n,
                                      int workers, long max_paths_per_draw);

// Drift of the diffusion conditioned to exit right:
//   lambda x + eps^2 h'(x)/h(x),
// h the exit-right probability built from the scale function
// S(x) = \int_0^x e^{-lambda y^2/eps^2} dy. Evaluated through the error
// function with cancellation-safe differencing and a log-space path near
// q_minus. x must lie in the open interval (q_minus, q_plus).
double doob_conditioned_drift(const WallModel1D& model, double x);

struct HTransformDraw {
  double tau = 0.0;
  long attempts = 0;  // 1 + number of discarded left-exit paths
  long steps = 0;
  long guarded_steps = 0;
};

// Euler-Maruyama integration of the conditioned SDE until the path exits
// right. Paths that exit left (a discretization artifact) are discarded and
// counted; a reflecting guard at q_minus + 1e-9 prevents overflow in h'/h.
HTransformDraw sample_exit_conditioned_htransform(const WallModel1D& model,
                                                  double dt, Rng& rng,
                                                  long max_attempts = 1000);

struct HTransformBatch {
  std::vector<double> taus;
  long attempts = 0;
  long steps = 0;
  long guarded_steps = 0;
  double left_exit_fraction = 0.0;
  double guarded_fraction = 0.0;
};

// Batch variant; throws StepSizeError when the left-exit fraction exceeds 1%
// or guarded steps exceed 0.01% of steps.
HTransformBatch sample_htransform_batch(const WallModel1D& model, double dt,
                                        const StreamFamily& streams, long n,
                                        int workers, long max_attempts = 1000);

enum class EventPair { CD, CE, EF };

struct EquivalenceEstimate {
  EventPair pair;
  long n_paths = 0;
  long count_a = 0;
  long count_sym_diff = 0;
  long count_a_minus_b = 0;
  double ratio = 0.0;         // estimated P(A delta B) / P(A)
  double ci_halfwidth = 0.0;  // 99% normal-approximation half-width
};

// Classifies n_paths simulated paths for the event pair and estimates the
// asymptotic-equivalence ratio with a delta-method CI. Requires
// n_paths >= 1e4; throws if no A-events are observed.
EquivalenceEstimate estimate_equivalence_ratio(const WallModel1D& model,
                                               const GridSpec& grid,
                                               const StreamFamily& streams,
                                               long n_paths, EventPair pair,
                                               int workers);

// Same estimator over an already simulated batch, so one path set can serve
// several pairs.
EquivalenceEstimate equivalence_from_outcomes(
    const std::vector<PathOutcome>& outcomes, EventPair pair);

struct IsometryCheck {
  double lhs = 0.0;    // estimate of E[Delta^2 1_D]
  double rhs = 0.0;    // eps^2 P_hat(D) / (2 lambda)
  double ratio = 0.0;  // lhs/rhs
  double ratio_ci = 0.0;
  double pd = 0.0;
  double pf = 0.0;
  double pd_over_pf = 0.0;
  double pd_over_pf_ci = 0.0;
  long n_paths = 0;
};

// Monte Carlo check of the stopped-martingale identity
// E[Delta^2 1_D] = eps^2 P(D)/(2 lambda) with Delta built from the 0-level
// hitting record, plus the reflection-principle comparison P(D) = 2 P(F).
// Exact up to Monte Carlo noise because Delta uses the B value at the
// recorded detection point.
IsometryCheck check_ito_isometry_identity(const WallModel1D& model,
                                          const GridSpec& grid,
                                          const StreamFamily& streams,
                                          long n_paths, int workers);

IsometryCheck isometry_from_outcomes(const WallModel1D& model,
                                     const std::vector<PathOutcome>& outcomes);

// Q = (1/lambda) ln[(x0 + eps u_inf)/(x0 + eps u_theta)] on F-paths with a
// recorded theta. Rejects outcomes without theta.
double q_statistic(const PathOutcome& outcome, const WallModel1D& model);

}  // namespace rpaths
