#include <cmath>
#include <vector>

#include "doctest.h"
#include "generators.hpp"
#include "sbgk/errors.hpp"
#include "sbgk/models.hpp"

using namespace sbgk;

namespace {

double central(const std::function<double(double)>& f, double x, double h = 1e-5) {
  return (f(x + h) - f(x - h)) / (2 * h);
}

// Derivative check at 200 sampled points of [lo, hi].
void check_flux_derivative(const FluxModel& f, double lo, double hi) {
  gen::Gen g(21);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double r = g.uniform(lo, hi);
    worst = std::max(worst, std::abs(f.b(r) - central(f.B, r)));
  }
  CHECK(worst <= 1e-6);
}

void check_forcing_derivative(const ForcingModel& f, double lo, double hi) {
  gen::Gen g(22);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double t = g.uniform(0.0, 2.0);
    const double v = g.uniform(lo, hi);
    worst = std::max(worst, std::abs(f.dvA(t, v) - central([&](double w) { return f.A(t, w); }, v)));
  }
  CHECK(worst <= 1e-6);
}

}  // namespace

TEST_CASE("buckley-leverett flux") {
  const FluxModel bl = buckley_leverett_flux();
  CHECK(bl.B(0.5) == doctest::Approx(0.5));
  CHECK(bl.B(-0.3) == 0.0);
  CHECK(bl.B(1.7) == 1.0);
  CHECK(bl.b(0.5) == doctest::Approx(2.0));
  CHECK(std::abs(bl.b(0.5) - central(bl.B, 0.5)) <= 1e-6);
  check_flux_derivative(bl, 0.0, 1.0);

  double prev = bl.B(-1.0);
  for (int k = 0; k <= 300; ++k) {
    const double r = -1.0 + 3.0 * k / 300;
    CHECK(bl.B(r) >= prev);
    CHECK(bl.b(r) >= 0.0);
    CHECK(bl.B(r) >= 0.0);
    CHECK(bl.B(r) <= 1.0);
    prev = bl.B(r);
  }
}

TEST_CASE("burgers and linear fluxes") {
  const FluxModel bu = burgers_flux();
  CHECK(bu.B(2.0) == 2.0);
  CHECK(bu.b(-1.0) == -1.0);
  check_flux_derivative(bu, -3.0, 3.0);
  CHECK(bu.min_on(-1.0, 2.0) == 0.0);
  CHECK(bu.max_on(-1.0, 2.0) == 2.0);
  CHECK(bu.max_speed(-1.0, 2.0) == doctest::Approx(2.0));

  const FluxModel lin = linear_flux(3.0);
  CHECK(lin.b(0.7) == 3.0);
  check_flux_derivative(lin, -3.0, 3.0);
}

TEST_CASE("tabulated flux reproduces a smooth flux") {
  std::vector<double> r, B;
  for (int k = 0; k <= 40; ++k) {
    r.push_back(-2.0 + 4.0 * k / 40);
    B.push_back(0.5 * r.back() * r.back());
  }
  const FluxModel t = tabulated_flux("table", r, B);
  for (double x : {-1.9, -0.3, 0.0, 0.77, 1.5}) {
    CHECK(t.B(x) == doctest::Approx(0.5 * x * x).epsilon(1e-2));
  }
  check_flux_derivative(t, -1.95, 1.95);
  CHECK_THROWS_AS(tabulated_flux("bad", {0.0, 1.0}, {0.0}), ConfigError);
}

TEST_CASE("forcing catalog") {
  const ForcingModel d = linear_decay_forcing(TimeFunction::constant(-1.0));
  CHECK(d.A(0.3, 2.0) == -2.0);
  CHECK(d.sup_dvA_plus(0.3) == 0.0);
  CHECK(d.growth(0.0, 1.0) == 0.0);
  CHECK(d.abs_growth(0.0, 1.0) == doctest::Approx(1.0));
  check_forcing_derivative(d, -3.0, 3.0);

  const ForcingModel bl = bl_forcing(TimeFunction::constant(1.0));
  CHECK(bl.A(0.0, 1.0) == doctest::Approx(0.5));
  CHECK(std::abs(central([&](double v) { return bl.A(0.0, v); }, 0.0)) <= 1e-8);
  CHECK(bl.dvA(0.0, 0.0) == 0.0);
  check_forcing_derivative(bl, -3.0, 3.0);
  // sup of 2v/(1+v²)² is 3√3/8
  CHECK(bl.sup_dvA_plus(0.0) == doctest::Approx(3.0 * std::sqrt(3.0) / 8.0).epsilon(1e-6));

  const ForcingModel z = zero_forcing();
  CHECK(z.is_zero);
  CHECK(z.A(1.0, 5.0) == 0.0);
}

TEST_CASE("forcing vanishes at v = 0") {
  for (const char* id : {"zero", "linear_decay:xi=-1", "linear_decay:alpha=2,r1=0.1", "bl:theta=1"}) {
    const ForcingModel f = forcing_from_id(id);
    for (double t : {0.0, 0.05, 0.5, 2.0}) CHECK(f.A(t, 0.0) == 0.0);
  }
}

TEST_CASE("time functions") {
  const TimeFunction c = TimeFunction::constant(-1.0);
  CHECK(c.integral(0.0, 2.0) == doctest::Approx(-2.0));
  CHECK(c.positive_integral(0.0, 2.0) == 0.0);
  CHECK(c.square_integral(0.0, 2.0) == doctest::Approx(2.0));

  const TimeFunction lin = TimeFunction::linear(1.0);
  CHECK(lin.square_integral(0.0, 1.0) == doctest::Approx(1.0 / 3.0));

  const TimeFunction inv = TimeFunction::inverse_time(2.0, 0.1);
  CHECK(inv(0.05) == doctest::Approx(-20.0));
  CHECK(inv(0.5) == doctest::Approx(-4.0));
  // ∫ξ over (r₁, t) = −α ln(t/r₁)
  CHECK(inv.integral(0.1, 2.0) == doctest::Approx(-2.0 * std::log(20.0)).epsilon(1e-10));
  CHECK(inv.integral(0.0, 0.1) == doctest::Approx(-2.0).epsilon(1e-10));

  // quadrature fallback
  TimeFunction s;
  s.value = [](double t) { return std::sin(t); };
  CHECK(s.integral(0.0, M_PI) == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(s.positive_integral(0.0, 2 * M_PI) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("catalog identifiers") {
  CHECK(flux_from_id("burgers").B(2.0) == 2.0);
  CHECK(flux_from_id("linear:c=3").b(0.1) == 3.0);
  CHECK(flux_from_id("buckley_leverett").B(0.5) == doctest::Approx(0.5));
  CHECK(forcing_from_id("linear_decay:xi=-1").A(0.0, 2.0) == -2.0);
  CHECK(noise_from_id("constant:sigma=0.2").sigma(0.7) == doctest::Approx(0.2));
  CHECK(noise_from_id("none").is_zero);
  CHECK_THROWS_AS(flux_from_id("nope"), ConfigError);
  CHECK_THROWS_AS(forcing_from_id("linear_decay:foo=1"), ConfigError);
  CHECK_THROWS_AS(noise_from_id("constant:sigma=abc"), ConfigError);
}
