#include "sbgk/models.hpp"

#include <algorithm>
#include <cmath>

// Boost 1.74 pchip calls unqualified isnan.
using std::isnan;

#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <map>
#include <memory>
#include <sstream>

#include "sbgk/errors.hpp"

namespace sbgk {

namespace {

template <class F>
double quad(F f, double a, double b) {
  if (b <= a) return 0.0;
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-12);
}

std::string fmt_num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// sup over v of 2v / (1 + v²)², attained at v = 1/√3.
const double kBlDerivativePeak = 9.0 / (8.0 * std::sqrt(3.0));

}  // namespace

double TimeFunction::integral(double a, double b) const {
  if (closed_integral) return closed_integral(a, b);
  return quad([this](double t) { return value(t); }, a, b);
}

double TimeFunction::positive_integral(double a, double b) const {
  if (closed_positive_integral) return closed_positive_integral(a, b);
  return quad([this](double t) { return std::max(0.0, value(t)); }, a, b);
}

double TimeFunction::square_integral(double a, double b) const {
  return quad(
      [this](double t) {
        const double s = value(t);
        return s * s;
      },
      a, b);
}

TimeFunction TimeFunction::constant(double c) {
  TimeFunction f;
  f.name = "constant:" + fmt_num(c);
  f.value = [c](double) { return c; };
  f.closed_integral = [c](double a, double b) { return c * (b - a); };
  f.closed_positive_integral = [c](double a, double b) { return std::max(c, 0.0) * (b - a); };
  return f;
}

TimeFunction TimeFunction::linear(double slope) {
  TimeFunction f;
  f.name = "linear:" + fmt_num(slope);
  f.value = [slope](double t) { return slope * t; };
  f.closed_integral = [slope](double a, double b) { return 0.5 * slope * (b * b - a * a); };
  return f;
}

TimeFunction TimeFunction::inverse_time(double alpha, double r1, double xi1) {
  if (!(r1 > 0.0)) throw ConfigError("inverse_time needs r1 > 0");
  TimeFunction f;
  f.name = "inverse_time:alpha=" + fmt_num(alpha) + ",r1=" + fmt_num(r1) + ",xi1=" + fmt_num(xi1);
  f.value = [=](double t) { return t > r1 ? -alpha / t : xi1; };
  f.closed_integral = [=](double a, double b) {
    double s = 0.0;
    if (a < r1) s += xi1 * (std::min(b, r1) - a);
    if (b > r1) s += -alpha * std::log(b / std::max(a, r1));
    return s;
  };
  f.closed_positive_integral = [=](double a, double b) {
    double s = 0.0;
    if (a < r1) s += std::max(xi1, 0.0) * (std::min(b, r1) - a);
    if (b > r1 && alpha < 0.0) s += -alpha * std::log(b / std::max(a, r1));
    return s;
  };
  return f;
}

double FluxModel::min_on(double lo, double hi) const {
  if (lo > hi) std::swap(lo, hi);
  double m = std::min(B(lo), B(hi));
  for (double c : critical_points) {
    if (c > lo && c < hi) m = std::min(m, B(c));
  }
  return m;
}

double FluxModel::max_on(double lo, double hi) const {
  if (lo > hi) std::swap(lo, hi);
  double m = std::max(B(lo), B(hi));
  for (double c : critical_points) {
    if (c > lo && c < hi) m = std::max(m, B(c));
  }
  return m;
}

double FluxModel::max_speed(double lo, double hi) const {
  if (lo > hi) std::swap(lo, hi);
  double m = std::max(std::abs(b(lo)), std::abs(b(hi)));
  constexpr int kSamples = 1024;
  for (int k = 1; k < kSamples; ++k) {
    m = std::max(m, std::abs(b(lo + (hi - lo) * k / kSamples)));
  }
  return m;
}

double ForcingModel::growth(double a, double b) const {
  if (is_zero || b <= a) return 0.0;
  if (closed_growth) return closed_growth(a, b);
  return quad([this](double t) { return sup_dvA_plus(t); }, a, b);
}

double ForcingModel::abs_growth(double a, double b) const {
  if (is_zero || b <= a) return 0.0;
  if (closed_abs_growth) return closed_abs_growth(a, b);
  return quad([this](double t) { return sup_abs_dvA(t); }, a, b);
}

FluxModel buckley_leverett_flux() {
  FluxModel f;
  f.name = "buckley_leverett";
  f.B = [](double r) {
    if (r < 0.0) return 0.0;
    if (r > 1.0) return 1.0;
    return r * r / (r * r + (1.0 - r) * (1.0 - r));
  };
  f.b = [](double r) {
    if (r <= 0.0 || r >= 1.0) return 0.0;
    const double d = r * r + (1.0 - r) * (1.0 - r);
    return 2.0 * r * (1.0 - r) / (d * d);
  };
  return f;
}

FluxModel burgers_flux() {
  FluxModel f;
  f.name = "burgers";
  f.B = [](double r) { return 0.5 * r * r; };
  f.b = [](double r) { return r; };
  f.critical_points = {0.0};
  return f;
}

FluxModel linear_flux(double c) {
  FluxModel f;
  f.name = "linear:c=" + fmt_num(c);
  f.B = [c](double r) { return c * r; };
  f.b = [c](double) { return c; };
  return f;
}

FluxModel tabulated_flux(std::string name, std::vector<double> rho, std::vector<double> B) {
  if (rho.size() != B.size() || rho.size() < 4) {
    throw ConfigError("tabulated flux needs at least 4 matching samples");
  }
  if (!std::is_sorted(rho.begin(), rho.end()) ||
      std::adjacent_find(rho.begin(), rho.end()) != rho.end()) {
    throw ConfigError("tabulated flux abscissae must be strictly increasing");
  }
  const double lo = rho.front();
  const double hi = rho.back();
  using Pchip = boost::math::interpolators::pchip<std::vector<double>>;
  auto interp = std::make_shared<const Pchip>(std::move(rho), std::move(B));
  const double b_lo = interp->prime(lo);
  const double b_hi = interp->prime(hi);
  const double B_lo = (*interp)(lo);
  const double B_hi = (*interp)(hi);

  FluxModel f;
  f.name = std::move(name);
  f.range_lo = lo;
  f.range_hi = hi;
  f.B = [=](double r) {
    if (r < lo) return B_lo + b_lo * (r - lo);
    if (r > hi) return B_hi + b_hi * (r - hi);
    return (*interp)(r);
  };
  f.b = [=](double r) {
    if (r < lo) return b_lo;
    if (r > hi) return b_hi;
    return interp->prime(r);
  };
  // Sign changes of b between samples of a fine grid.
  constexpr int kScan = 4096;
  double prev = f.b(lo);
  for (int k = 1; k <= kScan; ++k) {
    const double r = lo + (hi - lo) * k / kScan;
    const double cur = f.b(r);
    if ((prev < 0.0 && cur >= 0.0) || (prev > 0.0 && cur <= 0.0)) f.critical_points.push_back(r);
    prev = cur;
  }
  return f;
}

ForcingModel zero_forcing() { return ForcingModel{}; }

ForcingModel linear_decay_forcing(TimeFunction xi) {
  ForcingModel f;
  f.name = "linear_decay:" + xi.name;
  f.is_zero = false;
  f.A = [xi](double t, double v) { return xi(t) * v; };
  f.dvA = [xi](double t, double) { return xi(t); };
  f.sup_dvA_plus = [xi](double t) { return std::max(0.0, xi(t)); };
  f.sup_abs_dvA = [xi](double t) { return std::abs(xi(t)); };
  // Unbounded in v; the envelope is the derivative part, which is what the
  // flow and growth bounds use.
  f.lipschitz_bound = [xi](double t) { return std::abs(xi(t)); };
  f.closed_growth = [xi](double a, double b) { return xi.positive_integral(a, b); };
  f.closed_abs_growth = [xi](double a, double b) {
    return 2.0 * xi.positive_integral(a, b) - xi.integral(a, b);
  };
  f.linear_rate = xi;
  return f;
}

ForcingModel bl_forcing(TimeFunction theta) {
  ForcingModel f;
  f.name = "bl:" + theta.name;
  f.is_zero = false;
  f.A = [theta](double t, double v) { return theta(t) * v * v / (1.0 + v * v); };
  f.dvA = [theta](double t, double v) {
    const double d = 1.0 + v * v;
    return theta(t) * 2.0 * v / (d * d);
  };
  f.sup_dvA_plus = [theta](double t) { return std::abs(theta(t)) * kBlDerivativePeak; };
  f.sup_abs_dvA = f.sup_dvA_plus;
  f.lipschitz_bound = [theta](double t) { return std::abs(theta(t)) * (1.0 + kBlDerivativePeak); };
  f.closed_growth = [theta](double a, double b) {
    return kBlDerivativePeak * (2.0 * theta.positive_integral(a, b) - theta.integral(a, b));
  };
  f.closed_abs_growth = f.closed_growth;
  return f;
}

NoiseModel no_noise() { return NoiseModel{}; }

NoiseModel noise(TimeFunction sigma) {
  NoiseModel n;
  n.name = sigma.name;
  n.sigma = std::move(sigma);
  n.is_zero = false;
  return n;
}

namespace {

struct ParsedId {
  std::string head;
  std::map<std::string, double> params;
};

ParsedId parse_id(const std::string& id) {
  ParsedId p;
  const auto colon = id.find(':');
  p.head = id.substr(0, colon);
  if (colon == std::string::npos) return p;
  std::istringstream rest(id.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("malformed model parameter '" + item + "' in '" + id + "'");
    const std::string key = item.substr(0, eq);
    try {
      std::size_t used = 0;
      const std::string val = item.substr(eq + 1);
      p.params[key] = std::stod(val, &used);
      if (used != val.size()) throw std::invalid_argument(val);
    } catch (const std::exception&) {
      throw ConfigError("non-numeric value for '" + key + "' in '" + id + "'");
    }
  }
  return p;
}

double require(const ParsedId& p, const std::string& key, const std::string& id) {
  auto it = p.params.find(key);
  if (it == p.params.end()) throw ConfigError("model '" + id + "' needs parameter '" + key + "'");
  return it->second;
}

void reject_extra(const ParsedId& p, std::initializer_list<const char*> allowed, const std::string& id) {
  for (const auto& [k, v] : p.params) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw ConfigError("unknown parameter '" + k + "' for model '" + id + "'");
  }
}

}  // namespace

FluxModel flux_from_id(const std::string& id) {
  const ParsedId p = parse_id(id);
  if (p.head == "burgers") {
    reject_extra(p, {}, id);
    return burgers_flux();
  }
  if (p.head == "buckley_leverett") {
    reject_extra(p, {}, id);
    return buckley_leverett_flux();
  }
  if (p.head == "linear") {
    reject_extra(p, {"c"}, id);
    return linear_flux(require(p, "c", id));
  }
  if (p.head == "zero") {
    reject_extra(p, {}, id);
    return linear_flux(0.0);
  }
  throw ConfigError("unknown flux '" + id + "'");
}

ForcingModel forcing_from_id(const std::string& id) {
  const ParsedId p = parse_id(id);
  if (p.head == "zero") {
    reject_extra(p, {}, id);
    return zero_forcing();
  }
  if (p.head == "linear_decay") {
    reject_extra(p, {"xi", "alpha", "r1", "xi1"}, id);
    if (p.params.count("xi")) return linear_decay_forcing(TimeFunction::constant(p.params.at("xi")));
    const double alpha = require(p, "alpha", id);
    const double r1 = require(p, "r1", id);
    auto xi1 = p.params.find("xi1");
    return linear_decay_forcing(xi1 == p.params.end()
                                    ? TimeFunction::inverse_time(alpha, r1)
                                    : TimeFunction::inverse_time(alpha, r1, xi1->second));
  }
  if (p.head == "bl" || p.head == "buckley_leverett") {
    reject_extra(p, {"theta"}, id);
    return bl_forcing(TimeFunction::constant(require(p, "theta", id)));
  }
  throw ConfigError("unknown forcing '" + id + "'");
}

NoiseModel noise_from_id(const std::string& id) {
  const ParsedId p = parse_id(id);
  if (p.head == "none") {
    reject_extra(p, {}, id);
    return no_noise();
  }
  if (p.head == "constant") {
    reject_extra(p, {"sigma"}, id);
    const double s = require(p, "sigma", id);
    return s == 0.0 ? no_noise() : noise(TimeFunction::constant(s));
  }
  if (p.head == "linear") {
    reject_extra(p, {"slope"}, id);
    return noise(TimeFunction::linear(require(p, "slope", id)));
  }
  throw ConfigError("unknown noise '" + id + "'");
}

}  // namespace sbgk
