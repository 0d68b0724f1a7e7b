#pragma once

// Reference solvers and checks for the a-priori estimates: Kruzkov entropy
// inequalities, comparison, L¹ contraction, L∞ growth, decay rates and
// BGK → entropy-solution convergence. All bound checks are one-sided.

#include <functional>
#include <string>
#include <vector>

#include "sbgk/bgk.hpp"
#include "sbgk/models.hpp"
#include "sbgk/profiles.hpp"

namespace sbgk {

/// Monotone finite-volume oracle for the deterministic balance law:
/// Godunov flux (min/max of B over the Riemann fan) plus an explicit Euler
/// source step ρ ← ρ + dt·A(t, ρ). dt = 0 picks dt from CFL 0.9.
Trajectory godunov_reference(const FluxModel& flux, const ForcingModel& forcing, const DensityField& rho0,
                             double dt, double t_final, Boundary boundary = Boundary::Extrapolate,
                             int record_every = 1);

/// Godunov numerical flux for scalar B.
double godunov_flux(const FluxModel& flux, double left, double right);

/// Exact self-similar solution of the Burgers Riemann problem (shock or
/// rarefaction), as a profile at time t.
Profile burgers_riemann_solution(double left, double right, double x0, double t);

/// Smooth nonnegative test function φ(t, x) with its derivatives.
struct TestFunction {
  double t_center, t_half_width, x_center, x_half_width;

  double operator()(double t, double x) const;
  double dt(double t, double x) const;
  double dx(double t, double x) const;
};

/// 12 tensor-product bumps: three scales × four centers over
/// [0, t_final] × [x_lo, x_hi].
std::vector<TestFunction> default_test_battery(double t_final, double x_lo, double x_hi);

/// 21 evenly spaced Kruzkov constants over [min ρ₀ − 0.5, max ρ₀ + 0.5].
std::vector<double> default_entropy_constants(const DensityField& rho0);

struct EntropyReport {
  std::vector<double> constants;
  std::vector<std::vector<double>> residuals;  ///< [constant][test function]
  double min_residual = 0.0;
  double tol = 0.0;
  bool pass = false;
};

/// Discrete weak entropy residual
///   Σₙ Σᵢ Δx φ(tₙ₊½, xᵢ)[−(ηᵢⁿ⁺¹ − ηᵢⁿ) + dt·hᵢⁿ] + Σₙ Σᵢ Δx dt·G_{i+½}ⁿ (φᵢ₊₁ − φᵢ)/Δx
/// with η = |ρ − c|, hᵢⁿ = A(tₙ, ρᵢⁿ⁺¹) sign(ρᵢⁿ⁺¹ − c) and the numerical entropy flux
/// G = F(a∨c, b∨c) − F(a∧c, b∧c) (F = Godunov flux). Consistent with
///   ∫∫ [η φₜ + Q φₓ + h φ] + ∫ η(ρ₀) φ(0) − ∫ η(ρ(T)) φ(T),
/// and nonnegative for unforced Godunov trajectories by monotonicity.
/// Test functions must vanish near the domain ends. Needs a snapshot at
/// every step.
EntropyReport entropy_residual(const Trajectory& traj, const FluxModel& flux, const ForcingModel& forcing,
                               const std::vector<double>& constants,
                               const std::vector<TestFunction>& tests, double tol);

struct BoundReport {
  std::string name;
  double claimed_factor = 0.0;  ///< at the worst time
  double measured_ratio = 0.0;  ///< at the worst time
  double slack = 0.0;
  double worst_time = 0.0;
  bool pass = false;
};

struct ContractionReport {
  BoundReport density;  ///< ‖ρ − ρ̃‖₁ ≤ e^{∫‖[∂ᵥA]⁺‖} ‖ρ₀ − ρ̃₀‖₁
  BoundReport kinetic;  ///< ‖[u − ũ]⁺‖₁ ≤ e^{∫‖[∂ᵥA]⁺‖} ‖[ρ₀ − ρ̃₀]⁺‖₁ (needs kinetic snapshots)
};

ContractionReport check_contraction_pair(const Trajectory& a, const Trajectory& b,
                                         const ForcingModel& forcing, double slack = 1e-10);

struct ComparisonReport {
  bool pass = false;
  double max_violation = 0.0;  ///< max over snapshots of (ρ − ρ̃)
  double max_kinetic_violation = 0.0;
};

/// ρ(t_k) ≤ ρ̃(t_k) + tol at every snapshot (and cellwise for u when stored).
ComparisonReport check_comparison(const Trajectory& lower, const Trajectory& upper, double tol = 1e-12);

/// ‖ρ(t)‖_∞ ≤ e^{∫‖[∂ᵥA]⁺‖}‖ρ₀‖_∞ + slack_abs.
BoundReport check_linf_bound(const Trajectory& traj, const ForcingModel& forcing, double slack_abs);

struct DefectReport {
  bool pass = false;
  double min_value = 0.0;
  double max_total = 0.0;
  std::size_t snapshots = 0;
};

DefectReport check_defect(const Trajectory& traj, double tol = 1e-10);

/// ‖ρ(t)‖_p ≤ e^{∫₀ᵗ ξ}‖ρ₀‖_p (1 + slack), p ∈ {1, ∞}.
BoundReport check_decay(const Trajectory& traj, const TimeFunction& xi, double p, double slack = 1e-6);

/// Same envelope on ensemble mean norms.
BoundReport check_decay(const std::vector<double>& times, const std::vector<double>& norms,
                        const TimeFunction& xi, double slack = 1e-6);

/// Least-squares slope of log‖ρ(t)‖_p against log t over t in (t_lo, T].
double fit_decay_slope(const Trajectory& traj, double p, double t_lo);

struct ConvergenceRow {
  int nx = 0;
  double eps = 0.0;
  double dx = 0.0;
  double error = 0.0;
};

struct ConvergenceSetup {
  FluxModel flux;
  ForcingModel forcing;
  Profile rho0 = Profile::box(-0.5, 0.5, 1.0);
  double x_min = -1.0, x_max = 1.0, t_final = 0.5;
  int n_v = 64;
  double cfl = 0.9;
  Boundary boundary = Boundary::Extrapolate;
  /// Exact solution at t_final when known; otherwise a Godunov run on a grid
  /// `reference_refinement` times finer than the finest entry, averaged down.
  std::function<Profile()> exact;
  int reference_refinement = 4;
};

/// L¹ error at t_final of the BGK solver for each (nx, eps) pair.
std::vector<ConvergenceRow> convergence_study(const ConvergenceSetup& setup, const std::vector<double>& eps_list,
                                              const std::vector<int>& nx_list);

/// Cell averages of a fine field onto a grid `factor` times coarser.
DensityField coarsen(const DensityField& fine, int factor);

}  // namespace sbgk
