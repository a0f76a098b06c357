#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "rpaths/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "reactive-paths: conditioned-exit simulation experiments for the "
      "1-D wall and 2-D saddle models"};
  app.require_subcommand(1);

  std::string config_path, eps, out_dir, method, xi;
  long samples = -1, n_steps = -1, max_attempts = -1;
  double dt = -1.0;
  std::uint64_t seed = 0;
  bool seed_set = false, check = false;
  int workers = -1;

  std::vector<CLI::App*> subs;
  for (const std::string& name : rpaths::kExperimentNames) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "key=value config file");
    sub->add_option("--seed", seed, "master seed")->each([&](const std::string&) {
      seed_set = true;
    });
    sub->add_option("--samples", samples, "draws or paths per eps");
    sub->add_option("--eps", eps, "comma-separated, strictly decreasing");
    sub->add_option("--workers", workers, "worker threads (0 = hardware)");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--method", method, "htransform or rejection");
    sub->add_option("--dt", dt, "h-transform Euler step");
    sub->add_option("--n-steps", n_steps, "grid cells per unit clock time");
    sub->add_option("--max-attempts", max_attempts, "rejection budget");
    sub->add_option("--xi", xi, "xi sampler (point:<v>|uniform01|gaussian|twopoint)");
    sub->add_flag("--check", check, "exit 3 if any row fails its threshold");
    subs.push_back(sub);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    rpaths::ExperimentConfig cfg;
    if (!config_path.empty())
      cfg = rpaths::ExperimentConfig::from_file(config_path);
    cfg.experiment = app.get_subcommands().front()->get_name();
    if (seed_set) cfg.seed = seed;
    if (samples >= 0) cfg.samples = samples;
    if (!eps.empty()) cfg.apply("eps", eps, "--eps");
    if (workers >= 0) cfg.workers = workers;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!method.empty()) cfg.method = method;
    if (dt > 0.0) cfg.dt = dt;
    if (n_steps >= 0) cfg.n_steps = n_steps;
    if (max_attempts >= 0) cfg.max_attempts = max_attempts;
    if (!xi.empty()) cfg.xi = xi;
    cfg.check = check;
    return rpaths::run_experiment(cfg);
  } catch (const rpaths::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
