#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "generators.hpp"
#include "sbgk/errors.hpp"
#include "sbgk/kinetic.hpp"

using namespace sbgk;

namespace {

DensityField single(double rho) { return DensityField(SpaceGrid(0.0, 1.0, 1), {rho}); }

}  // namespace

TEST_CASE("chi point values") {
  CHECK(chi(2.0, 1.0) == 1);
  CHECK(chi(-1.0, -0.5) == -1);
  CHECK(chi(0.0, 0.3) == 0);
  // open ends
  CHECK(chi(2.0, 2.0) == 0);
  CHECK(chi(2.0, 0.0) == 0);
  CHECK(chi(1.0, -0.5) == 0);
}

TEST_CASE("chi is odd") {
  gen::Gen g(11);
  for (int k = 0; k < 500; ++k) {
    const double rho = g.uniform(-3, 3);
    const double v = g.uniform(-3, 3);
    CHECK(chi(-rho, -v) == -chi(rho, v));
  }
}

TEST_CASE("chi_cell_average") {
  CHECK(chi_cell_average(1.5, 1.0, 2.0) == doctest::Approx(0.5));
  CHECK(chi_cell_average(-0.25, -0.5, 0.0) == doctest::Approx(-0.5));
  CHECK(chi_cell_average(3.0, 0.0, 1.0) == 1.0);
  CHECK(chi_cell_average(3.0, -1.0, 0.0) == 0.0);
  CHECK(chi_cell_average(0.0, -1.0, 1.0) == 0.0);

  gen::Gen g(12);
  for (int k = 0; k < 500; ++k) {
    const double rho = g.uniform(-3, 3);
    const double lo = g.uniform(-3, 2.5);
    const double hi = lo + g.uniform(0.01, 1.0);
    const double a = chi_cell_average(rho, lo, hi);
    CHECK(std::abs(a) <= 1.0);
    const bool overlaps = std::min(hi, std::max(0.0, rho)) > std::max(lo, std::min(0.0, rho));
    if (!overlaps) CHECK(a == 0.0);
    else CHECK((a > 0) == (rho > 0));
  }
}

TEST_CASE("project_density examples") {
  const auto vg = VelocityGrid::symmetric(2.0, 8);
  REQUIRE(vg.dv() == 0.5);

  const KineticField u = project_density(single(1.5), vg);
  const std::vector<double> want = {0, 0, 0, 0, 1, 1, 1, 0};
  for (int j = 0; j < 8; ++j) CHECK(u(0, j) == want[static_cast<std::size_t>(j)]);

  const KineticField z = project_density(single(0.0), vg);
  for (double x : z.values()) CHECK(x == 0.0);

  CHECK_THROWS_AS(project_density(single(2.5), vg), SupportOverflow);
  CHECK_THROWS_AS(project_density(single(-2.5), vg), SupportOverflow);
}

TEST_CASE("reconstruct_density examples") {
  const auto vg = VelocityGrid::symmetric(2.0, 8);
  std::vector<double> u(8, 0.0);
  for (int j = 4; j < 8; ++j) u[static_cast<std::size_t>(j)] = 0.5;
  const DensityField rho = reconstruct_density(KineticField(SpaceGrid(0, 1, 1), vg, u));
  CHECK(rho[0] == doctest::Approx(1.0).epsilon(1e-15));

  const DensityField zero = reconstruct_density(KineticField(SpaceGrid(0, 1, 1), vg, std::vector<double>(8, 0.0)));
  CHECK(zero[0] == 0.0);
}

TEST_CASE("projection round trip on random data") {
  gen::Gen g(13);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const auto vg = g.velocity_grid();
    const SpaceGrid sg(-1.0, 1.0, g.integer(1, 20));
    const DensityField rho(sg, g.blocks(sg.size(), vg.v_min(), vg.v_max()));
    const DensityField back = reconstruct_density(project_density(rho, vg));
    for (int i = 0; i < sg.size(); ++i) worst = std::max(worst, std::abs(back[i] - rho[i]));
  }
  CHECK(worst <= 1e-13);
}

TEST_CASE("chi_positive_distance") {
  const auto vg = VelocityGrid::symmetric(2.0, 8);
  CHECK(chi_positive_distance(1.0, 0.25, vg) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(chi_positive_distance(0.25, 1.0, vg) == 0.0);
  CHECK(chi_positive_distance(-0.5, 0.5, vg) == 0.0);
  CHECK(chi_positive_distance(0.5, -0.5, vg) == doctest::Approx(1.0).epsilon(1e-15));

  gen::Gen g(14);
  for (int k = 0; k < 1000; ++k) {
    const auto grid = g.velocity_grid();
    const double a = g.uniform(grid.v_min(), grid.v_max());
    const double b = g.uniform(grid.v_min(), grid.v_max());
    CHECK(std::abs(chi_positive_distance(a, b, grid) - std::max(a - b, 0.0)) <= 1e-13);
  }
}

TEST_CASE("defect of an equilibrium vanishes") {
  gen::Gen g(15);
  const auto vg = VelocityGrid::symmetric(2.0, 32);
  const SpaceGrid sg(0.0, 1.0, 16);
  const DensityField rho(sg, g.blocks(16, -2.0, 2.0));
  const DefectField m = defect_measure(project_density(rho, vg), 1e-3);
  for (double x : m.values()) CHECK(std::abs(x) <= 1e-9);
}

TEST_CASE("defect tent") {
  const double eps = 0.1;
  const auto vg = VelocityGrid::symmetric(2.0, 8);
  std::vector<double> u(8, 0.0);
  for (int j = 4; j < 8; ++j) u[static_cast<std::size_t>(j)] = 0.5;
  const DefectField m = defect_measure(KineticField(SpaceGrid(0, 1, 1), vg, u), eps);
  // edges v = -2, -1.5, ..., 2; m(v) = 0.5 v/ε on (0, 1), 0.5(2 − v)/ε on (1, 2)
  for (int j = 0; j <= 8; ++j) {
    const double v = vg.edge(j);
    const double want = v <= 0 ? 0.0 : (v <= 1 ? 0.5 * v / eps : 0.5 * (2 - v) / eps);
    CHECK(m(0, j) == doctest::Approx(want).epsilon(1e-14));
  }
  CHECK(m.max_total_abs() <= 1e-12);
}

TEST_CASE("defect of a relaxing mixture is nonnegative with zero total") {
  // Any convex combination of χ_a and χ_b with same-sign data is a monotone
  // rearrangement below the χ envelope.
  gen::Gen g(16);
  const auto vg = VelocityGrid::symmetric(3.0, 48);
  for (int k = 0; k < 200; ++k) {
    const double a = g.uniform(-2.9, 2.9);
    const double b = g.coin() ? g.uniform(0, 2.9) * (a >= 0 ? 1 : -1) : a * g.uniform(0, 1);
    const double th = g.uniform(0, 1);
    const KineticField ua = project_density(single(a), vg);
    const KineticField ub = project_density(single(b), vg);
    std::vector<double> mix(ua.values().size());
    for (std::size_t j = 0; j < mix.size(); ++j) mix[j] = th * ua.values()[j] + (1 - th) * ub.values()[j];
    const DefectField m = defect_measure(KineticField(ua.space(), vg, mix), 1.0);
    CHECK(m.min_value() >= -1e-12);
    CHECK(m.max_total_abs() <= 1e-12);
  }
}

TEST_CASE("negative defect is reported") {
  const auto vg = VelocityGrid::symmetric(2.0, 8);
  // positive mass at negative velocities: χ_ρ − u integrates negative first.
  std::vector<double> u(8, 0.0);
  u[3] = 1.0;
  CHECK_THROWS_AS(defect_measure(KineticField(SpaceGrid(0, 1, 1), vg, u), 1.0), NegativeDefect);
  CHECK_THROWS_AS(defect_measure(KineticField(SpaceGrid(0, 1, 1), vg, u), 0.0), ConfigError);
}

TEST_CASE("grids") {
  const VelocityGrid vg(-1.0, 3.0, 8);
  CHECK(vg.edge(vg.zero_edge()) == 0.0);
  CHECK(vg.dv() == 0.5);
  CHECK_THROWS_AS(VelocityGrid(0.5, 3.0, 8), ConfigError);
  CHECK_THROWS_AS(VelocityGrid(-1.0, 2.0, 4), ConfigError);  // 0 not on an edge
  CHECK_THROWS_AS(VelocityGrid::symmetric(1.0, 7), ConfigError);
  CHECK_THROWS_AS(SpaceGrid(1.0, 1.0, 4), ConfigError);

  const auto fs = VelocityGrid::for_support(1.0, std::exp(1.0), 64);
  CHECK(fs.v_max() >= std::exp(1.0) + 2 * fs.dv() - 1e-12);
  CHECK(fs.v_min() == -fs.v_max());
}

TEST_CASE("distances and norms") {
  const SpaceGrid sg(0.0, 2.0, 4);
  const DensityField a(sg, {1, -1, 0, 2});
  const DensityField b(sg, {0, 0, 0, 0});
  CHECK(a.mass() == doctest::Approx(1.0));
  CHECK(a.l1() == doctest::Approx(2.0));
  CHECK(a.linf() == 2.0);
  CHECK(l1_distance(a, b) == doctest::Approx(2.0));

  const auto vg = VelocityGrid::symmetric(2.0, 16);
  const KineticField ua = project_density(a, vg);
  const KineticField ub = project_density(b, vg);
  // kinetic L¹ distance equals the density L¹ distance; the positive part
  // counts only cells where a > b.
  CHECK(kinetic_l1_distance(ua, ub) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(positive_part_distance(ua, ub) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(ua.l1() == doctest::Approx(2.0).epsilon(1e-14));
}
