#pragma once

// Characteristics of the kinetic transport operator
//   dX/dr = b(V),  dV/dr = A(r, V),
// integrated with classical RK4 at a fixed substep. The velocity part is
// x-independent, so callers back-trace velocities once per node and reuse
// them across space.

#include <limits>

#include "sbgk/models.hpp"

namespace sbgk {

struct FlowResult {
  double x = 0.0;
  double v = 0.0;
  /// |∂V/∂v| along the path.
  double jacobian = 1.0;
  /// ∫[∂ᵥA(r, V(r))]^± dr along the path (signed in the direction of
  /// integration, i.e. both nonnegative for forward flows).
  double growth_plus = 0.0;
  double growth_minus = 0.0;
};

struct FlowOptions {
  double h_char = 1e-3;
  double v_band = std::numeric_limits<double>::infinity();
};

/// Forward flow from time s to t ≥ s starting at (x, v).
FlowResult flow(const FluxModel& flux, const ForcingModel& forcing, double s, double t, double x,
                double v, const FlowOptions& opts = {});

/// Inverse of flow(s, t): integrates from t back to s.
FlowResult inverse_flow(const FluxModel& flux, const ForcingModel& forcing, double s, double t,
                        double x, double v, const FlowOptions& opts = {});

/// Velocity component only, integrated from `from` to `to` (either order).
double trace_velocity(const ForcingModel& forcing, double from, double to, double v,
                      const FlowOptions& opts = {});

}  // namespace sbgk
