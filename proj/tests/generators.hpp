#pragma once

// Small seeded generators for property tests.

#include <cstdint>
#include <random>
#include <vector>

#include "sbgk/kinetic.hpp"
#include "sbgk/profiles.hpp"

namespace gen {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  /// Symmetric velocity grid with an even cell count in [8, 96].
  sbgk::VelocityGrid velocity_grid() {
    const int n = 2 * integer(4, 48);
    return sbgk::VelocityGrid::symmetric(uniform(0.5, 4.0), n);
  }

  /// Cell values inside [lo, hi]; piecewise constant on a few random blocks
  /// so neighbouring cells often coincide.
  std::vector<double> blocks(int n, double lo, double hi) {
    std::vector<double> v(static_cast<std::size_t>(n));
    int i = 0;
    while (i < n) {
      const int len = integer(1, std::max(1, n / 4));
      const double x = uniform(lo, hi);
      for (int k = 0; k < len && i < n; ++k, ++i) v[static_cast<std::size_t>(i)] = x;
    }
    return v;
  }

  /// Compactly supported data: zero in the outer quarter on each side.
  sbgk::DensityField compact_density(const sbgk::SpaceGrid& grid, double lo, double hi) {
    std::vector<double> v = blocks(grid.size(), lo, hi);
    const int pad = grid.size() / 4;
    for (int i = 0; i < pad; ++i) {
      v[static_cast<std::size_t>(i)] = 0.0;
      v[static_cast<std::size_t>(grid.size() - 1 - i)] = 0.0;
    }
    return sbgk::DensityField(grid, std::move(v));
  }

  /// Random bump inside the middle half of [x_lo, x_hi].
  sbgk::Profile bump(double x_lo, double x_hi, double h_lo, double h_hi) {
    const double L = x_hi - x_lo;
    const double w = uniform(0.05, 0.15) * L;
    const double c = uniform(x_lo + 0.25 * L + w, x_hi - 0.25 * L - w);
    return sbgk::Profile::bump(c, w, uniform(h_lo, h_hi));
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace gen
