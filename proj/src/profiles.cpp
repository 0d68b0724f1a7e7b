#include "sbgk/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

#include "sbgk/errors.hpp"

namespace sbgk {

namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

DensityField Profile::on(const SpaceGrid& grid) const {
  std::vector<double> v(static_cast<std::size_t>(grid.size()));
  for (int i = 0; i < grid.size(); ++i) {
    v[static_cast<std::size_t>(i)] = average(grid.edge(i), grid.edge(i + 1));
  }
  return DensityField(grid, std::move(v));
}

Profile Profile::riemann(double left, double right, double x0) {
  return Profile(
      "riemann(" + num(left) + "," + num(right) + "," + num(x0) + ")",
      [=](double lo, double hi) {
        const double wl = std::clamp(x0 - lo, 0.0, hi - lo);
        return (left * wl + right * (hi - lo - wl)) / (hi - lo);
      },
      [=](double x) { return x < x0 ? left : right; });
}

Profile Profile::bump(double center, double width, double height) {
  if (!(width > 0.0)) throw ConfigError("bump width must be positive");
  const double k = std::numbers::pi / width;
  // Antiderivative of cos²(k(x−c)/2) on the support: (x−c)/2 + sin(k(x−c))/(2k).
  auto prim = [=](double x) {
    const double y = std::clamp(x - center, -width, width);
    return 0.5 * y + std::sin(k * y) / (2.0 * k);
  };
  return Profile(
      "bump(" + num(center) + "," + num(width) + "," + num(height) + ")",
      [=](double lo, double hi) { return height * (prim(hi) - prim(lo)) / (hi - lo); },
      [=](double x) {
        const double y = x - center;
        if (std::abs(y) >= width) return 0.0;
        const double c = std::cos(0.5 * k * y);
        return height * c * c;
      });
}

Profile Profile::box(double a, double b, double height) {
  if (!(b > a)) throw ConfigError("box needs lo < hi");
  return Profile(
      "box(" + num(a) + "," + num(b) + "," + num(height) + ")",
      [=](double lo, double hi) {
        const double ov = std::max(0.0, std::min(b, hi) - std::max(a, lo));
        return height * ov / (hi - lo);
      },
      [=](double x) { return (x > a && x < b) ? height : 0.0; });
}

Profile Profile::sum(std::vector<Profile> parts) {
  std::string name = "sum(";
  for (std::size_t k = 0; k < parts.size(); ++k) name += (k ? "," : "") + parts[k].name();
  name += ")";
  auto shared = std::make_shared<const std::vector<Profile>>(std::move(parts));
  return Profile(
      name,
      [shared](double lo, double hi) {
        double s = 0.0;
        for (const auto& p : *shared) s += p.average(lo, hi);
        return s;
      },
      [shared](double x) {
        double s = 0.0;
        for (const auto& p : *shared) s += p(x);
        return s;
      });
}

Profile Profile::plus_constant(Profile p, double c) {
  auto shared = std::make_shared<const Profile>(std::move(p));
  return Profile(
      shared->name() + "+" + num(c),
      [shared, c](double lo, double hi) { return shared->average(lo, hi) + c; },
      [shared, c](double x) { return (*shared)(x) + c; });
}

}  // namespace sbgk
