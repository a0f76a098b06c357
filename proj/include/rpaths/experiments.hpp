#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rpaths {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat key=value experiment description; command-line flags override file
// values. validate() rejects inconsistent settings with a descriptive
// message.
struct ExperimentConfig {
  std::string experiment;

  // 1-D wall model
  double lambda = 1.0;
  double x0 = -0.25;
  double q_minus = -1.0;
  double q_plus = 0.5;

  // saddle extras (saddle-exit and cf-check)
  double mu = 1.0;
  double x1 = -0.25;
  double alpha = 0.0;
  std::string xi = "point:1";
  bool custom_saddle = false;

  std::vector<double> eps_list = {0.5, 0.35, 0.25};
  long samples = 10000;
  std::uint64_t seed = 1;
  int workers = 0;  // 0 = hardware concurrency
  std::string out_dir = "out";

  long n_steps = 4000;
  bool bridge = true;
  double dt = 1e-4;
  std::string method = "htransform";  // or "rejection"
  long max_attempts = 2'000'000;
  bool check = false;

  static ExperimentConfig from_file(const std::string& path);
  void apply(const std::string& key, const std::string& value,
             const std::string& where);
  void validate() const;

  // Deterministic-inputs dump: everything that shapes the results, in fixed
  // order. Hashed into the manifest; excludes workers/out_dir/check, which
  // must not change any output byte.
  std::string canonical_text() const;
};

struct CsvRow {
  std::string metric;
  double eps = 0.0;
  long n = 0;
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;
  long attempts = 0;
};

extern const std::vector<std::string> kExperimentNames;

// Runs the named experiment sweep, writing results.csv, manifest.txt and the
// diagnostic SVGs into out_dir. Returns the process exit code: 0 on success,
// 2 if a rejection budget was exhausted (partial results are written and
// flagged), 3 if --check was requested and some row failed.
int run_experiment(const ExperimentConfig& config);

}  // namespace rpaths
