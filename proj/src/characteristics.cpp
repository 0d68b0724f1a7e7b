#include "sbgk/characteristics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "sbgk/errors.hpp"

namespace sbgk {

namespace {

// State: X, V, log J, ∫[∂ᵥA]^+, ∫[∂ᵥA]^-.
using State = std::array<double, 5>;

int substeps(double span, double h_char) {
  if (!(h_char > 0.0)) throw ConfigError("h_char must be positive");
  return std::max(1, static_cast<int>(std::ceil(std::abs(span) / h_char - 1e-9)));
}

void check_band(double v, const FlowOptions& opts) {
  if (!(std::abs(v) <= opts.v_band)) {
    throw StepOverflow("characteristic velocity " + std::to_string(v) +
                       " left the band ±" + std::to_string(opts.v_band));
  }
}

State rhs(const FluxModel& flux, const ForcingModel& forcing, double r, const State& y, double dir) {
  const double d = forcing.dvA(r, y[1]);
  return {flux.b(y[1]), forcing.A(r, y[1]), d, dir * std::max(d, 0.0), dir * std::max(-d, 0.0)};
}

State integrate(const FluxModel& flux, const ForcingModel& forcing, double from, double to,
                State y, const FlowOptions& opts) {
  const int n = substeps(to - from, opts.h_char);
  const double h = (to - from) / n;
  const double dir = h < 0.0 ? -1.0 : 1.0;
  auto axpy = [](const State& a, double c, const State& k) {
    State out;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + c * k[i];
    return out;
  };
  for (int k = 0; k < n; ++k) {
    const double r = from + k * h;
    const State k1 = rhs(flux, forcing, r, y, dir);
    const State y2 = axpy(y, 0.5 * h, k1);
    check_band(y2[1], opts);
    const State k2 = rhs(flux, forcing, r + 0.5 * h, y2, dir);
    const State y3 = axpy(y, 0.5 * h, k2);
    check_band(y3[1], opts);
    const State k3 = rhs(flux, forcing, r + 0.5 * h, y3, dir);
    const State y4 = axpy(y, h, k3);
    check_band(y4[1], opts);
    const State k4 = rhs(flux, forcing, r + h, y4, dir);
    for (std::size_t i = 0; i < y.size(); ++i) {
      y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    check_band(y[1], opts);
  }
  return y;
}

FlowResult to_result(const State& y) {
  return {y[0], y[1], std::exp(y[2]), y[3], y[4]};
}

}  // namespace

FlowResult flow(const FluxModel& flux, const ForcingModel& forcing, double s, double t, double x,
                double v, const FlowOptions& opts) {
  if (t < s) throw ConfigError("flow needs s <= t");
  check_band(v, opts);
  if (forcing.is_zero) return {x + flux.b(v) * (t - s), v, 1.0, 0.0, 0.0};
  return to_result(integrate(flux, forcing, s, t, {x, v, 0.0, 0.0, 0.0}, opts));
}

FlowResult inverse_flow(const FluxModel& flux, const ForcingModel& forcing, double s, double t,
                        double x, double v, const FlowOptions& opts) {
  if (t < s) throw ConfigError("inverse_flow needs s <= t");
  check_band(v, opts);
  if (forcing.is_zero) return {x - flux.b(v) * (t - s), v, 1.0, 0.0, 0.0};
  return to_result(integrate(flux, forcing, t, s, {x, v, 0.0, 0.0, 0.0}, opts));
}

double trace_velocity(const ForcingModel& forcing, double from, double to, double v,
                      const FlowOptions& opts) {
  check_band(v, opts);
  if (forcing.is_zero || from == to) return v;
  if (forcing.linear_rate) {
    // A = ξ(t) v: V = v exp(∫ξ).
    const double e = from < to ? forcing.linear_rate->integral(from, to) : -forcing.linear_rate->integral(to, from);
    v *= std::exp(e);
    check_band(v, opts);
    return v;
  }
  const int n = substeps(to - from, opts.h_char);
  const double h = (to - from) / n;
  for (int k = 0; k < n; ++k) {
    const double r = from + k * h;
    const double k1 = forcing.A(r, v);
    const double k2 = forcing.A(r + 0.5 * h, v + 0.5 * h * k1);
    const double k3 = forcing.A(r + 0.5 * h, v + 0.5 * h * k2);
    const double k4 = forcing.A(r + h, v + h * k3);
    v += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    check_band(v, opts);
  }
  return v;
}

}  // namespace sbgk
