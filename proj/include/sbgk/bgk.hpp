#pragma once

// BGK relaxation scheme
//   ∂ₜu + b(v)∂ₓu + A(t, v)∂ᵥu = (χ_ρ − u)/ε,   ρ = ∫u dv,
// by operator splitting: upwind transport in x, cell-average remap along
// velocity characteristics, exact exponential relaxation. Each substep is a
// monotone map, so discrete comparison and L¹-contraction hold exactly.

#include <functional>
#include <optional>
#include <vector>

#include "sbgk/kinetic.hpp"
#include "sbgk/models.hpp"

namespace sbgk {

enum class Boundary {
  ZeroInflow,   ///< u = 0 in ghost cells; support must stay inside the grid.
  Extrapolate,  ///< ghost = boundary cell (for data with nonzero far states).
};

enum class Splitting { Lie, Strang };

struct SolverConfig {
  SpaceGrid space;
  VelocityGrid velocity;
  FluxModel flux;
  ForcingModel forcing;
  double eps = 1e-3;
  double t_final = 0.0;
  /// Upper bound on the step; 0 selects dt from the CFL target.
  double dt = 0.0;
  double cfl_target = 0.9;
  int record_every = 1;
  /// Characteristic substep as a fraction of dt.
  double h_char_fraction = 0.25;
  Boundary boundary = Boundary::ZeroInflow;
  Splitting splitting = Splitting::Lie;
  bool record_kinetic = true;
  bool record_defect = true;
  double defect_tol = 1e-10;
  /// Threshold for |u| in the outermost cells before SupportOverflow.
  double support_tol = 1e-10;
};

/// Throws ConfigError naming the offending field.
void validate(const SolverConfig& config);

struct TimeStep {
  double dt = 0.0;
  int n_steps = 0;
};

/// dt = cfl·Δx / max_j |b(v_j)| (capped by config.dt), shrunk to divide
/// t_final exactly.
TimeStep select_time_step(const SolverConfig& config);

struct Snapshot {
  double t = 0.0;
  DensityField rho;
  std::optional<KineticField> u;
  std::optional<DefectField> m;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  std::vector<double> times;
  std::vector<double> mass;
  std::vector<double> l1;
  std::vector<double> linf;
  std::vector<double> total_defect;
  double dt = 0.0;

  void push(Snapshot s);
  const Snapshot& back() const { return snapshots.back(); }
  std::size_t size() const { return snapshots.size(); }
};

KineticField step_transport(const KineticField& u, double dt, const FluxModel& flux,
                            Boundary boundary = Boundary::ZeroInflow);

KineticField step_forcing(const KineticField& u, double t, double dt, const ForcingModel& forcing,
                          double h_char);

KineticField step_relax(const KineticField& u, double dt, double eps);

/// Called after the deterministic substeps of step k (covering
/// [t, t + dt]); returns the field to continue from.
using StepHook = std::function<KineticField(KineticField u, int k, double t, double dt)>;

Trajectory run(const SolverConfig& config, const DensityField& rho0, const StepHook& post_step = {});

/// A time-indexed kinetic field sequence u(t_n), n = 0..N.
struct KineticSequence {
  std::vector<double> times;
  std::vector<KineticField> fields;
};

/// The mild-form map
///   (Su)(t) = (1/ε)∫₀ᵗ e^{(s−t)/ε} χ_{ρ^u(s, X_{t,s})}(V_{t,s}) ds + e^{−t/ε} χ_{ρ₀(X_{t,0})}(V_{t,0})
/// on the time nodes of `u_in`, by quadrature along inverse characteristics.
/// The s-integral uses exact exponential weights of the piecewise-linear
/// interpolant in s; χ is averaged over the back-traced velocity cells.
/// Cost O(n_t² n_x n_v): a verification path for small grids.
KineticSequence picard_map(const KineticSequence& u_in, const SolverConfig& config,
                           const DensityField& rho0);

/// `iterations` applications of picard_map starting from the frozen initial
/// state u(t) = χ_{ρ₀} on the solver's time grid.
KineticSequence picard_iterate(const SolverConfig& config, const DensityField& rho0, int iterations);

/// sup_n Δx Δv Σ |f(t_n) − g(t_n)|.
double sequence_distance(const KineticSequence& f, const KineticSequence& g);

}  // namespace sbgk
