#pragma once

// Canned verification batteries. Each suite runs fixed configurations with
// fixed seeds, so its results are reproducible bit for bit.

#include <string>
#include <utility>
#include <vector>

namespace sbgk {

struct CheckResult {
  std::string suite;
  std::string name;
  bool pass = false;
  /// Measured numbers in emission order.
  std::vector<std::pair<std::string, double>> metrics;
  std::string detail;

  double metric(const std::string& key) const;
};

/// contraction, comparison, entropy, decay, convergence, stochastic-consistency.
const std::vector<std::string>& suite_names();

/// Runs one suite, or every suite in order for "all". Unknown names raise
/// ConfigError. n_threads only affects ensemble work (results do not depend
/// on it).
std::vector<CheckResult> run_suite(const std::string& name, int n_threads = 0);

std::vector<CheckResult> contraction_suite();
std::vector<CheckResult> comparison_suite();
std::vector<CheckResult> entropy_suite();
std::vector<CheckResult> decay_suite(int n_threads = 0);
std::vector<CheckResult> convergence_suite();
std::vector<CheckResult> stochastic_suite(int n_threads = 0);

/// tol_entropy: 10 × the worst negative Kruzkov residual of the Godunov
/// oracle over the entropy battery (Burgers and Buckley-Leverett, with and
/// without forcing).
double entropy_tolerance();

bool all_pass(const std::vector<CheckResult>& results);

}  // namespace sbgk
