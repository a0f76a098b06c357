#include "rpaths/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "rpaths/analytic.hpp"
#include "rpaths/gaussian.hpp"
#include "rpaths/model.hpp"
#include "rpaths/path_sim.hpp"
#include "rpaths/saddle.hpp"
#include "rpaths/samplers.hpp"
#include "rpaths/sha1.hpp"
#include "rpaths/stats.hpp"
#include "rpaths/svg.hpp"

namespace rpaths {

const std::vector<std::string> kExperimentNames = {
    "th2-convergence",    "th3-convergence",   "th4-convergence",
    "equivalence-ratios", "isometry-identity", "convolution-check",
    "saddle-exit",        "cf-check"};

namespace {

constexpr double kZ99 = 2.5758293035489004;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_eps(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

double parse_double(const std::string& v, const std::string& where) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw ConfigError(where + ": bad number '" + v + "'");
  }
}

long parse_long(const std::string& v, const std::string& where) {
  try {
    std::size_t pos = 0;
    const long d = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw ConfigError(where + ": bad integer '" + v + "'");
  }
}

bool parse_bool(const std::string& v, const std::string& where) {
  if (v == "1" || v == "true" || v == "on") return true;
  if (v == "0" || v == "false" || v == "off") return false;
  throw ConfigError(where + ": bad boolean '" + v + "'");
}

std::vector<double> parse_eps_list(const std::string& v,
                                   const std::string& where) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_double(item, where));
  }
  if (out.empty()) throw ConfigError(where + ": empty eps list");
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  ExperimentConfig cfg;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    const std::string where = path + ":" + std::to_string(line_no);
    if (eq == std::string::npos)
      throw ConfigError(where + ": expected key=value");
    cfg.apply(trim(t.substr(0, eq)), trim(t.substr(eq + 1)), where);
  }
  return cfg;
}

void ExperimentConfig::apply(const std::string& key, const std::string& value,
                             const std::string& where) {
  if (key == "experiment") experiment = value;
  else if (key == "lambda") lambda = parse_double(value, where);
  else if (key == "x0") x0 = parse_double(value, where);
  else if (key == "q_minus") q_minus = parse_double(value, where);
  else if (key == "q_plus") q_plus = parse_double(value, where);
  else if (key == "mu") mu = parse_double(value, where);
  else if (key == "x1") x1 = parse_double(value, where);
  else if (key == "alpha") alpha = parse_double(value, where);
  else if (key == "xi") xi = value;
  else if (key == "custom_saddle") custom_saddle = parse_bool(value, where);
  else if (key == "eps") eps_list = parse_eps_list(value, where);
  else if (key == "samples") samples = parse_long(value, where);
  else if (key == "seed")
    seed = static_cast<std::uint64_t>(parse_long(value, where));
  else if (key == "workers") workers = static_cast<int>(parse_long(value, where));
  else if (key == "out") out_dir = value;
  else if (key == "n_steps") n_steps = parse_long(value, where);
  else if (key == "bridge") bridge = parse_bool(value, where);
  else if (key == "dt") dt = parse_double(value, where);
  else if (key == "method") method = value;
  else if (key == "max_attempts") max_attempts = parse_long(value, where);
  else throw ConfigError(where + ": unknown key '" + key + "'");
}

void ExperimentConfig::validate() const {
  if (std::find(kExperimentNames.begin(), kExperimentNames.end(), experiment) ==
      kExperimentNames.end())
    throw ConfigError("unknown experiment '" + experiment + "'");
  for (std::size_t i = 1; i < eps_list.size(); ++i)
    if (!(eps_list[i] < eps_list[i - 1]))
      throw ConfigError("eps list must be strictly decreasing");
  for (double e : eps_list)
    if (!(e > 0.0)) throw ConfigError("eps values must be positive");
  if (samples < 1000) throw ConfigError("samples must be >= 1000");
  if (n_steps < 1) throw ConfigError("n_steps must be >= 1");
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (method != "htransform" && method != "rejection")
    throw ConfigError("method must be 'htransform' or 'rejection'");
  if (max_attempts < 1) throw ConfigError("max_attempts must be >= 1");
  XiSampler::parse(xi);  // throws on bad spec
}

std::string ExperimentConfig::canonical_text() const {
  std::ostringstream s;
  s << "experiment=" << experiment << "\n";
  s << "lambda=" << fmt17(lambda) << "\n";
  s << "x0=" << fmt17(x0) << "\n";
  s << "q_minus=" << fmt17(q_minus) << "\n";
  s << "q_plus=" << fmt17(q_plus) << "\n";
  s << "mu=" << fmt17(mu) << "\n";
  s << "x1=" << fmt17(x1) << "\n";
  s << "alpha=" << fmt17(alpha) << "\n";
  s << "xi=" << xi << "\n";
  s << "custom_saddle=" << (custom_saddle ? 1 : 0) << "\n";
  s << "eps=";
  for (std::size_t i = 0; i < eps_list.size(); ++i)
    s << (i ? "," : "") << fmt17(eps_list[i]);
  s << "\n";
  s << "samples=" << samples << "\n";
  s << "seed=" << seed << "\n";
  s << "n_steps=" << n_steps << "\n";
  s << "bridge=" << (bridge ? 1 : 0) << "\n";
  s << "dt=" << fmt17(dt) << "\n";
  s << "method=" << method << "\n";
  s << "max_attempts=" << max_attempts << "\n";
  return s.str();
}

namespace {

struct Context {
  const ExperimentConfig& cfg;
  int workers;
  std::string dir;
  std::vector<CsvRow> rows;
  bool budget_hit = false;

  void add(const std::string& metric, double eps, long n, double stat,
           double threshold, bool pass, long attempts) {
    rows.push_back({metric, eps, n, stat, threshold, pass, attempts});
  }

  void budget_row(double eps, const BudgetExceeded& e) {
    add("budget_exceeded", eps, 0, 0.0, 0.0, false, e.attempts());
    budget_hit = true;
  }

  StreamFamily family(std::uint64_t slot) const {
    return {cfg.seed, (slot + 1) << 32};
  }

  std::string file(const std::string& name) const { return dir + "/" + name; }
};

// Threshold chain expressing "strictly decreasing, with a bound on the last
// entry": row 0 is checked against the trivial bound, later rows against the
// previous statistic, the last row additionally against final_bound.
double chain_threshold(std::size_t i, std::size_t count, double prev_stat,
                       double trivial_bound, double final_bound) {
  double thr = (i == 0) ? trivial_bound : prev_stat;
  if (i + 1 == count && final_bound > 0.0) thr = std::min(thr, final_bound);
  return thr;
}

ConditionMethod method_of(const ExperimentConfig& cfg) {
  return cfg.method == "rejection" ? ConditionMethod::rejection
                                   : ConditionMethod::htransform;
}

std::vector<double> conditioned_taus(const WallModel1D& model,
                                     const ExperimentConfig& cfg,
                                     const StreamFamily& fam, int workers,
                                     long* attempts) {
  if (method_of(cfg) == ConditionMethod::rejection) {
    GridSpec grid{cfg.n_steps, cfg.bridge};
    auto batch = sample_rejection_batch(model, grid, fam, cfg.samples, workers,
                                        cfg.max_attempts);
    *attempts = batch.attempts;
    return std::move(batch.taus);
  }
  auto batch = sample_htransform_batch(model, cfg.dt, fam, cfg.samples,
                                       workers, cfg.max_attempts);
  *attempts = batch.attempts;
  return std::move(batch.taus);
}

void run_th3(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const WallModel1D ref(cfg.lambda, cfg.eps_list.front(), cfg.x0, cfg.q_minus,
                        0.0);
  const LimitLaw law = limit_law_for(Theorem::th3, ref);
  const long grid_n = 10'000;
  const double lo = law.location - 10.0 * law.scale;
  const double hi = law.location + 15.0 * law.scale;

  double prev = 1.0;
  for (std::size_t e = 0; e < cfg.eps_list.size(); ++e) {
    const double eps = cfg.eps_list[e];
    const WallModel1D model(cfg.lambda, eps, cfg.x0, cfg.q_minus, 0.0);
    const double shift =
        law.centering_coefficient * std::log(1.0 / eps);
    double sup = 0.0;
    std::vector<double> xs, exact, limit;
    for (long i = 0; i < grid_n; ++i) {
      const double x =
          lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid_n - 1);
      const double fe = conditional_tau0_cdf(model, x + shift);
      const double g = limit_cdf(law, x);
      sup = std::max(sup, std::abs(fe - g));
      if (i % 20 == 0) {
        xs.push_back(x);
        exact.push_back(fe);
        limit.push_back(g);
      }
    }
    const double thr =
        chain_threshold(e, cfg.eps_list.size(), prev, 1.0, 0.05);
    ctx.add("sup_dist", eps, grid_n, sup, thr, sup < thr, 0);
    prev = sup;
    emit_overlay_svg({{"recentred exact CDF", xs, exact},
                      {"Gumbel limit", xs, limit}},
                     "x", "CDF", ctx.file("cdf_overlay_eps" + fmt_eps(eps) + ".svg"));
  }
}

void run_th2_like(Context& ctx, Theorem theorem) {
  const ExperimentConfig& cfg = ctx.cfg;
  const double x0 = (theorem == Theorem::th4) ? 0.0 : cfg.x0;
  const double final_bound = 0.1;

  double prev = 1.0;
  for (std::size_t e = 0; e < cfg.eps_list.size(); ++e) {
    const double eps = cfg.eps_list[e];
    const WallModel1D model(cfg.lambda, eps, x0, cfg.q_minus, cfg.q_plus);
    const LimitLaw law = limit_law_for(theorem, model);
    try {
      long attempts = 0;
      std::vector<double> taus =
          conditioned_taus(model, cfg, ctx.family(e), ctx.workers, &attempts);
      const double shift = law.centering_coefficient * std::log(1.0 / eps);
      for (double& t : taus) t -= shift;
      const EmpiricalSample sample = EmpiricalSample::from_draws(std::move(taus));
      const double ks =
          ks_one_sample(sample, [&](double x) { return limit_cdf(law, x); });
      const bool monotone_chain = (theorem == Theorem::th2);
      const double thr =
          monotone_chain
              ? chain_threshold(e, cfg.eps_list.size(), prev, 1.0, final_bound)
              : final_bound;
      ctx.add("ks", eps, cfg.samples, ks, thr, ks < thr, attempts);
      prev = ks;
      emit_qq_svg(sample, law, ctx.file("qq_eps" + fmt_eps(eps) + ".svg"));
    } catch (const BudgetExceeded& ex) {
      ctx.budget_row(eps, ex);
    }
  }
}

void run_equivalence(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const GridSpec grid{cfg.n_steps, cfg.bridge};

  struct PairTrack {
    std::string name;
    double first_ratio = 0.0, first_ci = 0.0;
    double last_ratio = 0.0, last_ci = 0.0;
    double prev = 1.0;
  };
  PairTrack tracks[3] = {{"ratio_cd"}, {"ratio_ce"}, {"ratio_ef"}};
  std::vector<double> eps_axis;
  std::vector<double> curve[3];

  for (std::size_t e = 0; e < cfg.eps_list.size(); ++e) {
    const double eps = cfg.eps_list[e];
    const WallModel1D model_cd(cfg.lambda, eps, cfg.x0, cfg.q_minus, 0.0);
    const WallModel1D model_q(cfg.lambda, eps, cfg.x0, cfg.q_minus, cfg.q_plus);

    const auto batch_cd = simulate_batch(model_cd, grid, ctx.family(e),
                                         cfg.samples, ctx.workers);
    const auto batch_q =
        simulate_batch(model_q, grid, ctx.family(e).sub(0x1000000),
                       cfg.samples, ctx.workers);

    const EquivalenceEstimate ests[3] = {
        equivalence_from_outcomes(batch_cd, EventPair::CD),
        equivalence_from_outcomes(batch_q, EventPair::CE),
        equivalence_from_outcomes(batch_q, EventPair::EF)};

    eps_axis.push_back(eps);
    for (int p = 0; p < 3; ++p) {
      const EquivalenceEstimate& est = ests[p];
      PairTrack& tk = tracks[p];
      const double thr =
          chain_threshold(e, cfg.eps_list.size(), tk.prev, 1.0, 0.0);
      ctx.add(tk.name, eps, cfg.samples, est.ratio, thr, est.ratio < thr,
              cfg.samples);
      tk.prev = est.ratio;
      if (e == 0) {
        tk.first_ratio = est.ratio;
        tk.first_ci = est.ci_halfwidth;
      }
      tk.last_ratio = est.ratio;
      tk.last_ci = est.ci_halfwidth;
      curve[p].push_back(est.ratio);
    }

    // (E,F) has an exact closed form: by the strong Markov property at the
    // first q_+ visit, P(E \ F)/P(E) = 1 - Phi(q_+ sqrt(2 lambda)/eps).
    // Compare within 3 sigma.
    const double closed = gaussian_tail(
        cfg.q_plus * std::sqrt(2.0 * cfg.lambda) / eps);
    const double sigma = ests[2].ci_halfwidth / kZ99;
    ctx.add("ef_closed_form", eps, cfg.samples,
            std::abs(ests[2].ratio - closed), 3.0 * sigma,
            std::abs(ests[2].ratio - closed) < 3.0 * sigma, cfg.samples);
  }

  for (const PairTrack& tk : tracks) {
    const double stat = tk.last_ratio + tk.last_ci;
    const double thr = tk.first_ratio - tk.first_ci;
    ctx.add("endpoints_" + tk.name.substr(6), 0.0, cfg.samples, stat, thr,
            stat < thr, 0);
  }
  emit_overlay_svg({{"P(C^D)/P(C), q+=0", eps_axis, curve[0]},
                    {"P(C^E)/P(C)", eps_axis, curve[1]},
                    {"P(E^F)/P(E)", eps_axis, curve[2]}},
                   "eps", "symmetric-difference ratio",
                   ctx.file("ratios_vs_eps.svg"));
}

void run_isometry(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const GridSpec grid{cfg.n_steps, cfg.bridge};
  const std::vector<std::pair<std::string, TimeOrNever>> horizons = {
      {"pd_r0.5", 0.5}, {"pd_r1", 1.0}, {"pd_rinf", never}};

  for (std::size_t e = 0; e < cfg.eps_list.size(); ++e) {
    const double eps = cfg.eps_list[e];
    const WallModel1D model(cfg.lambda, eps, cfg.x0, cfg.q_minus, cfg.q_plus);
    const auto outcomes =
        simulate_batch(model, grid, ctx.family(e), cfg.samples, ctx.workers);
    const IsometryCheck chk = isometry_from_outcomes(model, outcomes);

    ctx.add("isometry_ratio", eps, cfg.samples, std::abs(chk.ratio - 1.0),
            chk.ratio_ci, std::abs(chk.ratio - 1.0) < chk.ratio_ci,
            cfg.samples);
    ctx.add("pd_over_pf", eps, cfg.samples, std::abs(chk.pd_over_pf - 2.0),
            chk.pd_over_pf_ci, std::abs(chk.pd_over_pf - 2.0) < chk.pd_over_pf_ci,
            cfg.samples);

    const BrownianClock clock(model.lambda);
    std::vector<double> r_axis, emp_curve, exact_curve;
    for (const auto& [name, r] : horizons) {
      const double s_r = clock.s_of_t(r);
      long hits = 0;
      for (const PathOutcome& o : outcomes)
        hits += (o.tau0 && o.tau0_clock <= s_r);
      const double p_hat =
          static_cast<double>(hits) / static_cast<double>(cfg.samples);
      const double p = hit_probability(model, std::abs(model.x0), r);
      const double sigma =
          std::sqrt(p * (1.0 - p) / static_cast<double>(cfg.samples));
      ctx.add(name, eps, cfg.samples, std::abs(p_hat - p), 3.0 * sigma,
              std::abs(p_hat - p) < 3.0 * sigma, cfg.samples);
    }

    // diagnostic curve: empirical vs exact P(D(|x0|, r)) over a horizon grid
    for (int i = 1; i <= 24; ++i) {
      const double r = 0.125 * static_cast<double>(i);
      const double s_r = clock.s_of_t(r);
      long hits = 0;
      for (const PathOutcome& o : outcomes)
        hits += (o.tau0 && o.tau0_clock <= s_r);
      r_axis.push_back(r);
      emp_curve.push_back(static_cast<double>(hits) /
                          static_cast<double>(cfg.samples));
      exact_curve.push_back(hit_probability(model, std::abs(model.x0), r));
    }
    emit_overlay_svg({{"empirical P(D(|x0|,r))", r_axis, emp_curve},
                      {"reflection principle", r_axis, exact_curve}},
                     "r", "probability",
                     ctx.file("hitprob_eps" + fmt_eps(eps) + ".svg"));
  }
}

void run_convolution(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  struct ModelSpec {
    const char* name;
    double lambda, x0, q_minus, q_plus;
  };
  const ModelSpec specs[2] = {{"m1", cfg.lambda, cfg.x0, cfg.q_minus, cfg.q_plus},
                              {"m2", 0.5, -0.25, -1.0, 1.5}};

  for (const ModelSpec& ms : specs) {
    const WallModel1D model(ms.lambda, 0.1, ms.x0, ms.q_minus, ms.q_plus);
    double max_res = 0.0;
    std::vector<double> ts, res;
    for (int i = 0; i < 401; ++i) {
      const double t = -20.0 + 0.1 * static_cast<double>(i);
      const double m = std::abs(convolution_residual(model, t));
      max_res = std::max(max_res, m);
      ts.push_back(t);
      res.push_back(m);
    }
    ctx.add(std::string("max_residual_") + ms.name, 0.0, 401, max_res, 1e-10,
            max_res < 1e-10, 0);
    emit_overlay_svg({{"|residual(t)|", ts, res}}, "t", "|cf residual|",
                     ctx.file(std::string("residual_") + ms.name + ".svg"));
  }

  // duplication formula through the complex log-gamma, on z = (1 - it)/2
  double max_rel = 0.0;
  for (int t = -10; t <= 10; ++t) {
    const std::complex<double> z(0.5, -0.5 * static_cast<double>(t));
    const std::complex<double> lhs =
        std::exp(complex_log_gamma(z) + complex_log_gamma(z + 0.5));
    const std::complex<double> two_z = 2.0 * z;
    const std::complex<double> rhs =
        std::exp((1.0 - two_z) * std::log(2.0) + 0.5 * std::log(M_PI) +
                 complex_log_gamma(two_z));
    max_rel = std::max(max_rel, std::abs(lhs - rhs) /
                                    std::abs(std::exp(complex_log_gamma(two_z))));
  }
  ctx.add("duplication_max_rel", 0.0, 21, max_rel, 1e-10, max_rel < 1e-10, 0);
}

void saddle_two_sample_row(Context& ctx, const SaddleModel2D& params,
                           const std::string& metric, double eps, long n,
                           const StreamFamily& fam, const SamplerOptions& opts,
                           bool emit_svg, const std::string& svg_name) {
  const EmpiricalSample sample = rescaled_exit_sample(
      params, fam, n, method_of(ctx.cfg), opts, ctx.workers);
  const LimitLaw law = saddle_limit_law(params);
  std::vector<double> ref_draws(static_cast<std::size_t>(n));
  const StreamFamily ref_fam = fam.sub(0x800000);
  for (long i = 0; i < n; ++i) {
    Rng rng = ref_fam.at(static_cast<std::uint64_t>(i));
    ref_draws[static_cast<std::size_t>(i)] = sample_limit(law, rng);
  }
  const EmpiricalSample reference =
      EmpiricalSample::from_draws(std::move(ref_draws));
  const TwoSampleKs ks = ks_two_sample(sample, reference);
  ctx.add(metric, eps, n, ks.statistic, ks.threshold_1pct, ks.pass(), n);
  if (emit_svg) emit_qq_svg(sample, reference, ctx.file(svg_name));
}

void run_saddle(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  SamplerOptions opts{{cfg.n_steps, cfg.bridge}, cfg.dt, cfg.max_attempts};
  const double last_eps = cfg.eps_list.back();

  if (cfg.custom_saddle) {
    for (std::size_t e = 0; e < cfg.eps_list.size(); ++e) {
      const double eps = cfg.eps_list[e];
      const SaddleModel2D params(cfg.lambda, cfg.mu, eps, cfg.x1, cfg.alpha,
                                 XiSampler::parse(cfg.xi), cfg.q_minus,
                                 cfg.q_plus);
      try {
        saddle_two_sample_row(ctx, params, "custom_ks", eps, cfg.samples,
                              ctx.family(e), opts, true,
                              "qq_custom_eps" + fmt_eps(eps) + ".svg");
      } catch (const BudgetExceeded& ex) {
        ctx.budget_row(eps, ex);
      }
    }
    return;
  }

  // Regime (i): strong contraction, the exit forgets the initial condition
  // and the rescaled law is the centered Gaussian alone. xi = 0 isolates the
  // Gaussian term at finite eps.
  try {
    const SaddleModel2D gauss(1.0, 1.0, last_eps, -0.25, 0.0,
                              XiSampler::point_mass(0.0), -1.0, 0.5);
    saddle_two_sample_row(ctx, gauss, "gaussian_only_ks", last_eps,
                          cfg.samples, ctx.family(16), opts, true,
                          "qq_gaussian_only.svg");
  } catch (const BudgetExceeded& ex) {
    ctx.budget_row(last_eps, ex);
  }

  // Regime (ii): weak contraction with xi = +1; the limit keeps the sign of
  // xi, so negative exits die out as eps shrinks (memory effect).
  double prev = 1.0;
  for (std::size_t e = 0; e < cfg.eps_list.size(); ++e) {
    const double eps = cfg.eps_list[e];
    const SaddleModel2D mix(4.0, 1.0, eps, -0.25, 0.0,
                            XiSampler::point_mass(1.0), -1.0, 0.25);
    try {
      const EmpiricalSample sample =
          rescaled_exit_sample(mix, ctx.family(32 + e), cfg.samples,
                               method_of(cfg), opts, ctx.workers);
      long neg = 0;
      for (double v : sample.values) neg += (v < 0.0);
      const double frac =
          static_cast<double>(neg) / static_cast<double>(cfg.samples);
      const double thr =
          chain_threshold(e, cfg.eps_list.size(), prev, 1.0, 0.02);
      ctx.add("mixture_only_negfrac", eps, cfg.samples, frac, thr, frac < thr,
              cfg.samples);
      prev = frac;
      if (e + 1 == cfg.eps_list.size()) {
        const LimitLaw law = saddle_limit_law(mix);
        std::vector<double> ref(static_cast<std::size_t>(cfg.samples));
        const StreamFamily rf = ctx.family(32 + e).sub(0x800000);
        for (long i = 0; i < cfg.samples; ++i) {
          Rng rng = rf.at(static_cast<std::uint64_t>(i));
          ref[static_cast<std::size_t>(i)] = sample_limit(law, rng);
        }
        emit_qq_svg(sample, EmpiricalSample::from_draws(std::move(ref)),
                    ctx.file("qq_mixture_only.svg"));
      }
    } catch (const BudgetExceeded& ex) {
      ctx.budget_row(eps, ex);
    }
  }

  // Regime (iii): both terms contribute; compare against the full mixture.
  // 2 lambda q_+ |x_1| is kept large so the Gaussian component's variance
  // deficit E[e^{-2 mu tau}] is small at the sampled eps.
  try {
    const SaddleModel2D inter(4.0, 1.0, last_eps, -1.0, 0.5,
                              XiSampler::point_mass(1.0), -2.0, 2.0);
    saddle_two_sample_row(ctx, inter, "intermediate_ks", last_eps, cfg.samples,
                          ctx.family(48), opts, true,
                          "qq_intermediate.svg");
  } catch (const BudgetExceeded& ex) {
    ctx.budget_row(last_eps, ex);
  }
}

void run_cf_check(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  SamplerOptions opts{{cfg.n_steps, cfg.bridge}, cfg.dt, cfg.max_attempts};
  const std::vector<double> r_grid = {0.5, 1.0, 2.0, 4.0};

  double prev = 1.0;
  double first_dev = 0.0, first_ci = 0.0, last_dev = 0.0, last_ci = 0.0;
  for (std::size_t e = 0; e < cfg.eps_list.size(); ++e) {
    const double eps = cfg.eps_list[e];
    const SaddleModel2D params(cfg.lambda, cfg.mu, eps, cfg.x1, cfg.alpha,
                               XiSampler::parse(cfg.xi), cfg.q_minus,
                               cfg.q_plus);
    try {
      const CfCheck chk =
          conditional_cf_check(params, ctx.family(e), cfg.samples, r_grid,
                               method_of(cfg), opts, ctx.workers);
      const double thr =
          chain_threshold(e, cfg.eps_list.size(), prev, 1.0, 0.0);
      ctx.add("cf_max_dev", eps, cfg.samples, chk.max_abs_deviation, thr,
              chk.max_abs_deviation < thr, cfg.samples);
      prev = chk.max_abs_deviation;
      if (e == 0) {
        first_dev = chk.max_abs_deviation;
        first_ci = chk.ci_at_max;
      }
      last_dev = chk.max_abs_deviation;
      last_ci = chk.ci_at_max;

      std::vector<double> rs, est, lim;
      for (const CfCheckPoint& p : chk.points) {
        rs.push_back(p.r);
        est.push_back(p.estimate);
        lim.push_back(p.limit);
      }
      emit_overlay_svg({{"estimated cf", rs, est}, {"limit cf", rs, lim}},
                       "r", "phi(r)",
                       ctx.file("cf_overlay_eps" + fmt_eps(eps) + ".svg"));
    } catch (const BudgetExceeded& ex) {
      ctx.budget_row(eps, ex);
    }
  }
  ctx.add("endpoints_cf", 0.0, cfg.samples, last_dev + last_ci,
          first_dev - first_ci, last_dev + last_ci < first_dev - first_ci, 0);
}

void write_outputs(const Context& ctx, double wallclock_s) {
  const ExperimentConfig& cfg = ctx.cfg;
  {
    std::ofstream csv(ctx.dir + "/results.csv", std::ios::binary);
    csv << "#schema=1\n";
    csv << "experiment,metric,eps,n,statistic,threshold,pass,attempts\n";
    for (const CsvRow& r : ctx.rows) {
      csv << cfg.experiment << ',' << r.metric << ',' << fmt17(r.eps) << ','
          << r.n << ',' << fmt17(r.statistic) << ',' << fmt17(r.threshold)
          << ',' << (r.pass ? "pass" : "fail") << ',' << r.attempts << '\n';
    }
  }
  {
    const std::string canonical = cfg.canonical_text();
    std::ofstream mf(ctx.dir + "/manifest.txt", std::ios::binary);
    mf << canonical;
    mf << "workers=" << ctx.workers << "\n";
    mf << "out=" << cfg.out_dir << "\n";
    mf << "input_hash=" << git_blob_hash(canonical) << "\n";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", wallclock_s);
    mf << "wallclock_s=" << buf << "\n";
  }
}

}  // namespace

int run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();

  int workers = config.workers;
  if (workers <= 0)
    workers = std::max(1u, std::thread::hardware_concurrency());

  std::filesystem::create_directories(config.out_dir);
  Context ctx{config, workers, config.out_dir, {}, false};

  if (config.experiment == "th2-convergence") run_th2_like(ctx, Theorem::th2);
  else if (config.experiment == "th3-convergence") run_th3(ctx);
  else if (config.experiment == "th4-convergence") run_th2_like(ctx, Theorem::th4);
  else if (config.experiment == "equivalence-ratios") run_equivalence(ctx);
  else if (config.experiment == "isometry-identity") run_isometry(ctx);
  else if (config.experiment == "convolution-check") run_convolution(ctx);
  else if (config.experiment == "saddle-exit") run_saddle(ctx);
  else if (config.experiment == "cf-check") run_cf_check(ctx);
  else throw ConfigError("unknown experiment '" + config.experiment + "'");

  const double wallclock =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  write_outputs(ctx, wallclock);

  if (ctx.budget_hit) return 2;
  if (config.check) {
    for (const CsvRow& r : ctx.rows)
      if (!r.pass) return 3;
  }
  return 0;
}

}  // namespace rpaths
