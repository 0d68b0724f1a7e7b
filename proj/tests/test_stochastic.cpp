#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "generators.hpp"
#include "sbgk/errors.hpp"
#include "sbgk/stochastic.hpp"

using namespace sbgk;

namespace {

SolverConfig transport_config(double x_min, double x_max, int nx, double t_final, double dt) {
  SolverConfig c;
  c.space = SpaceGrid(x_min, x_max, nx);
  c.velocity = VelocityGrid::symmetric(1.2, 32);
  c.flux = linear_flux(0.0);
  c.t_final = t_final;
  c.dt = dt;
  return c;
}

// ρ₀(x − m) as exact cell averages.
DensityField translated(const Profile& p, double m, const SpaceGrid& g) {
  std::vector<double> v;
  for (int i = 0; i < g.size(); ++i) v.push_back(p.average(g.edge(i) - m, g.edge(i + 1) - m));
  return DensityField(g, std::move(v));
}

}  // namespace

TEST_CASE("wiener path sampling") {
  const WienerPath a = sample_wiener(9, 0.01, 100);
  const WienerPath b = sample_wiener(9, 0.01, 100);
  const WienerPath c = sample_wiener(10, 0.01, 100);
  REQUIRE(a.w.size() == 101);
  CHECK(a.w[0] == 0.0);
  CHECK(a.w == b.w);
  CHECK(a.w != c.w);
  for (std::size_t k = 0; k < a.increments.size(); ++k) CHECK(a.w[k + 1] - a.w[k] == doctest::Approx(a.increments[k]));
  CHECK_THROWS_AS(sample_wiener(1, 0.0, 10), ConfigError);

  // prefix stability: a longer path starts with the shorter one
  const WienerPath longer = sample_wiener(9, 0.01, 200);
  CHECK(std::equal(a.w.begin(), a.w.end(), longer.w.begin()));
}

TEST_CASE("shift path left-point sums") {
  const ShiftPath zero = sample_shift(no_noise(), 3, 0.01, 1.0);
  for (double m : zero.m) CHECK(m == 0.0);

  const ShiftPath unit = sample_shift(noise(TimeFunction::constant(1.0)), 3, 0.01, 1.0);
  CHECK(unit.m == unit.wiener.w);
  CHECK(unit.at(0.0) == 0.0);
  CHECK(unit.at(0.005) == doctest::Approx(0.5 * unit.m[1]));

  CHECK_THROWS_AS(sample_shift(no_noise(), 1, 0.3, 1.0), ConfigError);
}

TEST_CASE("ito isometry for sigma(t) = t") {
  const NoiseModel nm = noise(TimeFunction::linear(1.0));
  const int n = 10000;
  std::vector<double> m1;
  m1.reserve(n);
  for (int k = 0; k < n; ++k) m1.push_back(sample_shift(nm, 1000 + static_cast<std::uint64_t>(k), 0.01, 1.0).m.back());
  const double mean = std::accumulate(m1.begin(), m1.end(), 0.0) / n;
  double var = 0.0;
  for (double x : m1) var += (x - mean) * (x - mean);
  var /= n - 1;
  // left-point sums on a grid of 100 steps: E = Σ t_l² dt = 0.32835
  const double expected = 0.01 * 0.01 * 0.01 * 99.0 * 100.0 * 199.0 / 6.0;
  const double se = expected * std::sqrt(2.0 / (n - 1));
  CHECK(std::abs(var - expected) <= 3 * se);
  CHECK(std::abs(var - 1.0 / 3.0) <= 3 * se + 0.006);
}

TEST_CASE("stratonovich correction vanishes for deterministic sigma") {
  const NoiseModel nm = noise(TimeFunction::linear(1.0));
  double coarse = 0.0, fine = 0.0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    coarse += std::abs(stratonovich_correction(nm, sample_shift(nm, s, 0.01, 1.0)));
    fine += std::abs(stratonovich_correction(nm, sample_shift(nm, s, 0.0001, 1.0)));
  }
  CHECK(fine < 0.2 * coarse);
  CHECK(fine / 50 <= 1e-3);
  CHECK(stratonovich_correction(noise(TimeFunction::constant(2.0)), sample_shift(nm, 1, 0.01, 1.0)) == 0.0);
}

TEST_CASE("shift_cells") {
  const std::vector<double> v = {0, 0, 1, 2, 3, 0, 0, 0};
  const auto whole = shift_cells(v, 2.0, 1.0, Boundary::ZeroInflow);
  CHECK(whole == std::vector<double>{0, 0, 0, 0, 1, 2, 3, 0});
  const auto back = shift_cells(v, -1.0, 1.0, Boundary::ZeroInflow);
  CHECK(back == std::vector<double>{0, 1, 2, 3, 0, 0, 0, 0});

  gen::Gen g(51);
  for (int k = 0; k < 200; ++k) {
    const double d = g.uniform(-2.0, 2.0);
    const auto s = shift_cells(v, d, 1.0, Boundary::ZeroInflow);
    CHECK(std::accumulate(s.begin(), s.end(), 0.0) == doctest::Approx(6.0).epsilon(1e-14));
    for (double x : s) {
      CHECK(x >= 0.0);
      CHECK(x <= 3.0);
    }
    const auto a = shift_cells(v, d, 1.0, Boundary::ZeroInflow, ShiftMode::GridAligned);
    CHECK(a == shift_cells(v, std::round(d), 1.0, Boundary::ZeroInflow));
  }
  CHECK_THROWS_AS(shift_cells(v, 4.0, 1.0, Boundary::ZeroInflow), SupportOverflow);
  const auto ext = shift_cells(std::vector<double>{1, 1, 0, 0}, 1.0, 1.0, Boundary::Extrapolate);
  CHECK(ext == std::vector<double>{1, 1, 1, 0});
}

TEST_CASE("pathwise shift solution") {
  SolverConfig c = transport_config(-2, 2, 200, 0.5, 0.01);
  const Profile p = Profile::bump(0.0, 0.5, 1.0);
  const DensityField r0 = p.on(c.space);

  SUBCASE("sigma = 0 equals the deterministic run") {
    const ShiftPath sh = sample_shift(no_noise(), 1, 0.01, 0.5);
    const Trajectory det = run(c, r0);
    const Trajectory a = solve_pathwise_shift(c, r0, sh);
    const Trajectory b = solve_pathwise_direct(c, r0, sh);
    for (std::size_t k = 0; k < det.size(); ++k) {
      CHECK(std::equal(a.snapshots[k].rho.values().begin(), a.snapshots[k].rho.values().end(),
                       det.snapshots[k].rho.values().begin()));
      CHECK(std::equal(b.snapshots[k].rho.values().begin(), b.snapshots[k].rho.values().end(),
                       det.snapshots[k].rho.values().begin()));
    }
  }

  SUBCASE("pure transport translates by M(t)") {
    const ShiftPath sh = sample_shift(noise(TimeFunction::constant(0.5)), 7, 0.01, 0.5);
    const Trajectory a = solve_pathwise_shift(c, r0, sh);
    double tv = 0.0;
    for (int i = 1; i < r0.size(); ++i) tv += std::abs(r0[i] - r0[i - 1]);
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(l1_distance(a.snapshots[k].rho, translated(p, sh.at(a.times[k]), c.space)) <= c.space.dx() * tv);
    }
    // direct scheme: accumulated interpolation error ≤ C Δx √n
    const Trajectory b = solve_pathwise_direct(c, r0, sh);
    const double n = static_cast<double>(a.size() - 1);
    CHECK(l1_distance(a.back().rho, b.back().rho) <= 2.0 * c.space.dx() * std::sqrt(n));
  }
}

TEST_CASE("shift preserves the deterministic norms") {
  SolverConfig c;
  c.space = SpaceGrid(-3, 3, 300);
  c.velocity = VelocityGrid::for_support(1.0, std::exp(1.0), 48);
  c.flux = buckley_leverett_flux();
  c.forcing = bl_forcing(TimeFunction::constant(1.0));
  c.t_final = 0.5;
  const DensityField r0 = Profile::bump(0.0, 0.6, 0.8).on(c.space);
  const Trajectory det = run(c, r0);
  gen::Gen g(52);
  for (int k = 0; k < 5; ++k) {
    const ShiftPath sh = sample_shift(noise(TimeFunction::constant(0.3)), g.engine()(), det.dt, c.t_final);
    const Trajectory tr = shift_trajectory(det, sh, c);
    for (std::size_t n = 0; n < det.size(); ++n) {
      CHECK(std::abs(tr.l1[n] - det.l1[n]) <= 1e-10);
      CHECK(std::abs(tr.mass[n] - det.mass[n]) <= 1e-10);
      CHECK(tr.linf[n] <= det.linf[n] + 1e-15);
    }
    const Trajectory aligned = shift_trajectory(det, sh, c, ShiftMode::GridAligned);
    for (std::size_t n = 0; n < det.size(); ++n) CHECK(aligned.linf[n] == det.linf[n]);
  }
}

TEST_CASE("shift and direct schemes agree for burgers") {
  SolverConfig c;
  c.space = SpaceGrid(-2, 2, 400);
  c.velocity = VelocityGrid::for_support(1.0, 1.0, 64);
  c.flux = burgers_flux();
  c.t_final = 0.5;
  c.record_kinetic = false;
  const DensityField r0 = Profile::box(-0.5, 0.0, 1.0).on(c.space);
  const TimeStep ts = select_time_step(c);
  const ShiftPath sh = sample_shift(noise(TimeFunction::constant(0.2)), 2024, ts.dt, c.t_final);
  const Trajectory a = solve_pathwise_shift(c, r0, sh);
  const Trajectory b = solve_pathwise_direct(c, r0, sh);
  CHECK(l1_distance(a.back().rho, b.back().rho) <= 0.05);

  const ShiftPath wrong = sample_shift(noise(TimeFunction::constant(0.2)), 1, 0.5 * ts.dt, c.t_final);
  CHECK_THROWS_AS(solve_pathwise_direct(c, r0, wrong), ConfigError);
}

TEST_CASE("ensemble statistics") {
  SolverConfig c = transport_config(-4, 4, 160, 0.4, 0.02);
  c.record_kinetic = false;
  const Profile p = Profile::bump(0.0, 0.5, 1.0);
  const DensityField r0 = p.on(c.space);
  const NoiseModel nm = noise(TimeFunction::constant(1.0));

  SUBCASE("one path is the path") {
    const EnsembleStats st = ensemble(c, r0, nm, 1, 77);
    const ShiftPath sh = sample_shift(nm, 77, 0.02, 0.4);
    const Trajectory tr = solve_pathwise_shift(c, r0, sh);
    REQUIRE(st.times.size() == tr.size());
    for (std::size_t k = 0; k < tr.size(); ++k) {
      for (int i = 0; i < c.space.size(); ++i) {
        CHECK(st.mean[k][static_cast<std::size_t>(i)] == doctest::Approx(tr.snapshots[k].rho[i]).epsilon(1e-15));
        CHECK(st.variance[k][static_cast<std::size_t>(i)] == 0.0);
      }
    }
  }

  SUBCASE("variance nonnegative, thread count irrelevant") {
    const EnsembleStats a = ensemble(c, r0, nm, 37, 5, 1);
    const EnsembleStats b = ensemble(c, r0, nm, 37, 5, 4);
    CHECK(a.mean == b.mean);
    CHECK(a.variance == b.variance);
    CHECK(a.mean_l1 == b.mean_l1);
    for (const auto& row : a.variance)
      for (double v : row) CHECK(v >= 0.0);
    CHECK(a.n_paths == 37);
  }

  SUBCASE("mean is the heat-smoothed initial data") {
    const EnsembleStats st = ensemble(c, r0, nm, 1000, 1);
    const double sd = std::sqrt(c.t_final);
    // Gauss-Hermite-free oracle: fine midpoint sum over the shift density
    double err = 0.0;
    for (int i = 0; i < c.space.size(); ++i) {
      double ex = 0.0;
      const int q = 4000;
      const double span = 8 * sd, h = 2 * span / q;
      for (int k = 0; k < q; ++k) {
        const double m = -span + (k + 0.5) * h;
        ex += h * std::exp(-m * m / (2 * sd * sd)) / (sd * std::sqrt(2 * M_PI)) *
              p.average(c.space.edge(i) - m, c.space.edge(i + 1) - m);
      }
      err += c.space.dx() * std::abs(st.mean.back()[static_cast<std::size_t>(i)] - ex);
    }
    CHECK(err <= 0.05);
  }

  CHECK_THROWS_AS(ensemble(c, r0, nm, 0, 1), ConfigError);
}
