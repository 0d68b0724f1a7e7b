#pragma once

// Transport noise ∂ₓρ ∘ dM with M(t) = ∫₀ᵗ σ dW. Because σ is deterministic
// and B, A do not depend on x, the pathwise solution is the deterministic
// one translated by M(t): ρ(t, x) = ρ̃(t, x − M(t)).

#include <cstdint>
#include <vector>

#include "sbgk/bgk.hpp"
#include "sbgk/models.hpp"

namespace sbgk {

struct WienerPath {
  std::uint64_t seed = 0;
  double dt_path = 0.0;
  std::vector<double> increments;  ///< W(t_{k+1}) − W(t_k)
  std::vector<double> w;           ///< W(t_k), w[0] = 0
};

/// Reproducible from (seed, dt_path, n_steps).
WienerPath sample_wiener(std::uint64_t seed, double dt_path, int n_steps);

struct ShiftPath {
  WienerPath wiener;
  std::vector<double> m;  ///< M(t_k), left-point sums Σ σ(t_l) ΔW_l

  double dt() const { return wiener.dt_path; }
  /// M at an arbitrary t in [0, T] (linear between nodes).
  double at(double t) const;
  double max_abs() const;
};

/// Left-point (Itô) sums. For deterministic σ these coincide with the
/// Stratonovich integral: the covariation correction ½Σ(σ(t_{l+1}) − σ(t_l))ΔW_l
/// vanishes as dt_path → 0 (see stratonovich_correction).
ShiftPath sample_shift(const NoiseModel& noise, std::uint64_t seed, double dt_path, double t_final);

/// M_Strat(T) − M_Itô(T) for the midpoint rule on the same path.
double stratonovich_correction(const NoiseModel& noise, const ShiftPath& path);

enum class ShiftMode {
  Conservative,  ///< integer cells + fractional linear (conservative) interpolation
  GridAligned,   ///< shift rounded to whole cells; norms preserved exactly
};

/// f(x) → f(x − delta) on cell averages. Mass leaving the grid raises
/// SupportOverflow (ZeroInflow); Extrapolate extends the boundary values.
std::vector<double> shift_cells(std::span<const double> values, double delta, double dx,
                                Boundary boundary, ShiftMode mode = ShiftMode::Conservative);

DensityField shift_density(const DensityField& rho, double delta, Boundary boundary,
                           ShiftMode mode = ShiftMode::Conservative);
KineticField shift_kinetic(const KineticField& u, double delta, Boundary boundary,
                           ShiftMode mode = ShiftMode::Conservative);

/// Applies the shift M(t_k) to every snapshot of a deterministic trajectory.
Trajectory shift_trajectory(const Trajectory& deterministic, const ShiftPath& shift,
                            const SolverConfig& config, ShiftMode mode = ShiftMode::Conservative);

/// One deterministic solve, then per-snapshot translation by M(t_k).
Trajectory solve_pathwise_shift(const SolverConfig& config, const DensityField& rho0,
                                const ShiftPath& shift, ShiftMode mode = ShiftMode::Conservative);

/// Per-step scheme: after the deterministic substeps of step k, translate by
/// ΔM_k = M(t_{k+1}) − M(t_k). Needs shift.dt() equal to the solver step.
Trajectory solve_pathwise_direct(const SolverConfig& config, const DensityField& rho0,
                                 const ShiftPath& shift);

struct EnsembleStats {
  int n_paths = 0;
  SpaceGrid grid;
  std::vector<double> times;
  std::vector<std::vector<double>> mean;      ///< [snapshot][cell]
  std::vector<std::vector<double>> variance;  ///< unbiased; 0 for n_paths = 1
  std::vector<double> mean_l1;
  std::vector<double> mean_linf;
  /// Least-squares slopes of log(mean norm) against t (exponential rate) and
  /// against log t (power law), over snapshots with t > 0.
  double decay_rate_l1 = 0.0;
  double decay_power_l1 = 0.0;
};

/// Path k uses seed base_seed + k. The deterministic trajectory is computed
/// once and shifted per path. Results do not depend on the thread count.
EnsembleStats ensemble(const SolverConfig& config, const DensityField& rho0, const NoiseModel& noise,
                       int n_paths, std::uint64_t base_seed, int n_threads = 0,
                       ShiftMode mode = ShiftMode::Conservative);

}  // namespace sbgk
