#pragma once

// Named initial-data profiles, evaluated as exact cell averages.

#include <functional>
#include <string>
#include <vector>

#include "sbgk/kinetic.hpp"

namespace sbgk {

class Profile {
 public:
  using Average = std::function<double(double lo, double hi)>;
  using Point = std::function<double(double x)>;

  Profile(std::string name, Average average, Point point)
      : name_(std::move(name)), average_(std::move(average)), point_(std::move(point)) {}

  const std::string& name() const { return name_; }
  double average(double lo, double hi) const { return average_(lo, hi); }
  double operator()(double x) const { return point_(x); }
  DensityField on(const SpaceGrid& grid) const;

  /// left for x < x0, right for x > x0.
  static Profile riemann(double left, double right, double x0);
  /// height · cos²(π(x − center) / (2 width)) on |x − center| < width.
  static Profile bump(double center, double width, double height);
  /// height on (lo, hi).
  static Profile box(double lo, double hi, double height);
  /// Sum of profiles.
  static Profile sum(std::vector<Profile> parts);
  /// Offset: p + c on the whole line.
  static Profile plus_constant(Profile p, double c);

 private:
  std::string name_;
  Average average_;
  Point point_;
};

}  // namespace sbgk
