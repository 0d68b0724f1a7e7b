#pragma once

// Batch experiments driven by a JSON config, and canned verification runs.
// Every artifact is a deterministic function of (config, seed): no
// timestamps, fixed number formatting.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sbgk/batteries.hpp"
#include "sbgk/bgk.hpp"
#include "sbgk/models.hpp"
#include "sbgk/profiles.hpp"
#include "sbgk/stochastic.hpp"

namespace sbgk {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSchema = 1;

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitConfigError = 2,
  kExitRuntimeError = 3,
};

struct ExperimentConfig {
  std::string flux = "burgers";
  std::string forcing = "zero";
  std::string noise = "none";
  double x_min = -1.0, x_max = 1.0;
  int nx = 200;
  int nv = 64;
  double v_max = 0.0;  ///< 0: sized from the data and the forcing growth
  double eps = 1e-3;
  double t_final = 0.5;
  double dt = 0.0;
  double cfl = 0.9;
  int record_every = 1;
  std::string boundary = "zero_inflow";  ///< or "extrapolate"
  std::string splitting = "lie";         ///< or "strang"
  /// {"type": "riemann"|"bump"|"box"|"file", ...}, kept as JSON text.
  std::string initial = R"({"type":"bump","center":0,"width":0.5,"height":1})";
  std::uint64_t seed = 1;
  int n_paths = 1;
  std::string shift_mode = "conservative";  ///< or "grid_aligned"
  int threads = 0;
  std::vector<std::string> checks = {"defect"};
  double bound_lo = -1e300, bound_hi = 1e300;
  double entropy_tol = 0.0;  ///< 0: the calibrated battery tolerance
  std::string out = "out";
  /// Directory relative "file" initial data is resolved against.
  std::filesystem::path base_dir;

  /// Canonical JSON with every field resolved (sorted keys, no whitespace).
  std::string canonical() const;
};

/// Parses a config document and applies `key=value` overrides (dotted keys
/// reach into nested objects; values are parsed as JSON when possible).
/// Unknown keys and bad values raise ConfigError naming the field.
ExperimentConfig parse_config(std::string_view text, const std::vector<std::string>& overrides = {},
                              std::optional<std::uint64_t> seed = std::nullopt);

ExperimentConfig load_config(const std::filesystem::path& file, const std::vector<std::string>& overrides = {},
                             std::optional<std::uint64_t> seed = std::nullopt);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

/// Initial data from the `initial` spec.
Profile make_profile(const ExperimentConfig& config);

/// Solver configuration (grids sized, models resolved, validated).
SolverConfig make_solver_config(const ExperimentConfig& config, const DensityField& rho0);

/// Runs the experiment, writes artifacts into `out_dir`, returns an exit code.
/// Errors are reported on `err` as "<ErrorName>: message".
int run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir, std::ostream& log,
                   std::ostream& err);

/// Runs a verification suite and writes one JSON report per check plus a
/// summary into `out_dir`.
int run_verify(const std::string& suite, const std::filesystem::path& out_dir, std::ostream& log,
               std::ostream& err, int n_threads = 0);

/// {"schema": 1, "suite": ..., "name": ..., "pass": ..., "metrics": {...}}.
std::string check_to_json(const CheckResult& check);

/// Fixed-precision number formatting shared by every artifact.
std::string format_number(double x);

}  // namespace sbgk
