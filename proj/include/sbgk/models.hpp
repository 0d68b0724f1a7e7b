#pragma once

// Problem data: flux B with kinetic speed b = B', forcing A(t, v) with
// A(t, 0) = 0, and the scalar noise intensity σ(t).

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sbgk {

/// Scalar function of time with its integrals. `integral` and
/// `positive_integral` fall back to adaptive quadrature when no closed form
/// is attached.
struct TimeFunction {
  std::string name = "constant:0";
  std::function<double(double)> value = [](double) { return 0.0; };
  std::function<double(double, double)> closed_integral;           // ∫_a^b f
  std::function<double(double, double)> closed_positive_integral;  // ∫_a^b [f]^+

  double operator()(double t) const { return value(t); }
  double integral(double a, double b) const;
  double positive_integral(double a, double b) const;
  double square_integral(double a, double b) const;

  static TimeFunction constant(double c);
  /// f(t) = slope · t.
  static TimeFunction linear(double slope);
  /// −α/t on (r₁, ∞), ξ₁ (constant) on [0, r₁].
  static TimeFunction inverse_time(double alpha, double r1, double xi1);
  static TimeFunction inverse_time(double alpha, double r1) {
    return inverse_time(alpha, r1, -alpha / r1);
  }
};

struct FluxModel {
  std::string name = "linear:c=0";
  std::function<double(double)> B = [](double) { return 0.0; };
  std::function<double(double)> b = [](double) { return 0.0; };
  double range_lo = -1e300;
  double range_hi = 1e300;
  /// Interior points where b changes sign; the extrema of B on any interval
  /// are attained there or at the interval ends.
  std::vector<double> critical_points;

  double min_on(double a, double b) const;
  double max_on(double a, double b) const;
  /// max |b| over [a, b] (sampled, plus critical points and ends).
  double max_speed(double a, double b) const;
};

struct ForcingModel {
  std::string name = "zero";
  std::function<double(double, double)> A = [](double, double) { return 0.0; };
  std::function<double(double, double)> dvA = [](double, double) { return 0.0; };
  /// ‖[∂ᵥA(t, ·)]^+‖_∞.
  std::function<double(double)> sup_dvA_plus = [](double) { return 0.0; };
  /// ‖∂ᵥA(t, ·)‖_∞.
  std::function<double(double)> sup_abs_dvA = [](double) { return 0.0; };
  /// ‖A(t, ·)‖_{W^{1,∞}} envelope.
  std::function<double(double)> lipschitz_bound = [](double) { return 0.0; };
  bool is_zero = true;
  /// Set for A = ξ(t) v.
  std::optional<TimeFunction> linear_rate;
  /// Closed form of ∫ sup_dvA_plus, when available.
  std::function<double(double, double)> closed_growth;
  std::function<double(double, double)> closed_abs_growth;

  /// ∫_a^b ‖[∂ᵥA]^+‖_∞ dt.
  double growth(double a, double b) const;
  /// ∫_a^b ‖∂ᵥA‖_∞ dt.
  double abs_growth(double a, double b) const;
};

struct NoiseModel {
  std::string name = "none";
  TimeFunction sigma = TimeFunction::constant(0.0);
  bool is_zero = true;

  double square_integral(double t) const { return sigma.square_integral(0.0, t); }
};

// Catalog.
FluxModel buckley_leverett_flux();
FluxModel burgers_flux();
FluxModel linear_flux(double c);
/// C¹ flux from samples, monotone cubic Hermite; b is the interpolant's
/// derivative. Extended linearly outside the table.
FluxModel tabulated_flux(std::string name, std::vector<double> rho, std::vector<double> B);

ForcingModel zero_forcing();
/// A(t, v) = ξ(t) v.
ForcingModel linear_decay_forcing(TimeFunction xi);
/// A(t, v) = θ(t) v² / (1 + v²).
ForcingModel bl_forcing(TimeFunction theta);

NoiseModel no_noise();
NoiseModel noise(TimeFunction sigma);

/// Identifiers: "burgers", "buckley_leverett", "linear:c=3", "zero".
FluxModel flux_from_id(const std::string& id);
/// "zero", "linear_decay:xi=-1", "linear_decay:alpha=2,r1=0.1[,xi1=..]",
/// "bl:theta=1".
ForcingModel forcing_from_id(const std::string& id);
/// "none", "constant:sigma=0.2", "linear:slope=1".
NoiseModel noise_from_id(const std::string& id);

}  // namespace sbgk
