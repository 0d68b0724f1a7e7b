#include "sbgk/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sbgk/errors.hpp"

namespace sbgk {

double godunov_flux(const FluxModel& flux, double left, double right) {
  return left <= right ? flux.min_on(left, right) : flux.max_on(right, left);
}

Trajectory godunov_reference(const FluxModel& flux, const ForcingModel& forcing, const DensityField& rho0,
                             double dt, double t_final, Boundary boundary, int record_every) {
  if (!(t_final >= 0.0)) throw ConfigError("t_final must be nonnegative");
  if (record_every < 1) throw ConfigError("record_every must be at least 1");
  const SpaceGrid& g = rho0.grid();
  const int nx = g.size();
  std::vector<double> rho(rho0.values().begin(), rho0.values().end());
  auto range = [&]() {
    const auto [lo, hi] = std::minmax_element(rho.begin(), rho.end());
    double a = *lo, b = *hi;
    if (boundary == Boundary::ZeroInflow) {
      a = std::min(a, 0.0);
      b = std::max(b, 0.0);
    }
    return std::pair{a, b};
  };
  int n_steps = 0;
  if (t_final > 0.0) {
    if (!(dt > 0.0)) {
      const auto [a, b] = range();
      const double s = flux.max_speed(a, b);
      if (!(s > 0.0)) throw ConfigError("dt must be given when the flux speed vanishes");
      dt = 0.9 * g.dx() / s;
    }
    n_steps = std::max(1, static_cast<int>(std::ceil(t_final / dt - 1e-9)));
    dt = t_final / n_steps;
  }

  Trajectory traj;
  traj.dt = dt;
  traj.push(Snapshot{0.0, rho0, std::nullopt, std::nullopt});
  std::vector<double> f(static_cast<std::size_t>(nx) + 1);
  const double lambda = dt / g.dx();
  for (int k = 0; k < n_steps; ++k) {
    const double t = k * dt;
    const auto [a, b] = range();
    if (lambda * flux.max_speed(a, b) > 1.0 + 1e-12) {
      throw CflViolation("Godunov CFL exceeded at t = " + std::to_string(t));
    }
    const double gl = boundary == Boundary::Extrapolate ? rho.front() : 0.0;
    const double gr = boundary == Boundary::Extrapolate ? rho.back() : 0.0;
    for (int i = 0; i <= nx; ++i) {
      const double l = i > 0 ? rho[static_cast<std::size_t>(i) - 1] : gl;
      const double r = i < nx ? rho[static_cast<std::size_t>(i)] : gr;
      f[static_cast<std::size_t>(i)] = godunov_flux(flux, l, r);
    }
    for (int i = 0; i < nx; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      rho[ii] -= lambda * (f[ii + 1] - f[ii]);
    }
    if (!forcing.is_zero) {
      for (double& r : rho) r += dt * forcing.A(t, r);
    }
    const double t_next = k + 1 == n_steps ? t_final : (k + 1) * dt;
    if ((k + 1) % record_every == 0 || k + 1 == n_steps) {
      traj.push(Snapshot{t_next, DensityField(g, rho), std::nullopt, std::nullopt});
    }
  }
  return traj;
}

Profile burgers_riemann_solution(double left, double right, double x0, double t) {
  if (t <= 0.0 || left == right) return Profile::riemann(left, right, x0);
  if (left > right) return Profile::riemann(left, right, x0 + 0.5 * (left + right) * t);
  const double xa = x0 + left * t;
  const double xb = x0 + right * t;
  auto prim = [=](double x) {
    if (x <= xa) return left * (x - xa);
    const double pb = ((xb - x0) * (xb - x0) - (xa - x0) * (xa - x0)) / (2.0 * t);
    if (x >= xb) return pb + right * (x - xb);
    return ((x - x0) * (x - x0) - (xa - x0) * (xa - x0)) / (2.0 * t);
  };
  return Profile(
      "burgers_fan",
      [=](double lo, double hi) { return (prim(hi) - prim(lo)) / (hi - lo); },
      [=](double x) { return x <= xa ? left : (x >= xb ? right : (x - x0) / t); });
}

namespace {

double bump(double z) {
  if (std::abs(z) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - z * z));
}

double bump_prime(double z) {
  if (std::abs(z) >= 1.0) return 0.0;
  const double q = 1.0 - z * z;
  return bump(z) * (-2.0 * z / (q * q));
}

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// Bound reports describe the worst snapshot after t = 0 (where every ratio is
// 1 by construction); the pass flag still covers all snapshots.
bool reportable(std::size_t k, std::size_t n) { return k > 0 || n == 1; }

}  // namespace

double TestFunction::operator()(double t, double x) const {
  return bump((t - t_center) / t_half_width) * bump((x - x_center) / x_half_width);
}

double TestFunction::dt(double t, double x) const {
  return bump_prime((t - t_center) / t_half_width) / t_half_width * bump((x - x_center) / x_half_width);
}

double TestFunction::dx(double t, double x) const {
  return bump((t - t_center) / t_half_width) * bump_prime((x - x_center) / x_half_width) / x_half_width;
}

// Battery version 1: fixed so residual numbers stay comparable across runs.
std::vector<TestFunction> default_test_battery(double t_final, double x_lo, double x_hi) {
  const double L = x_hi - x_lo;
  const double t_scale[3] = {0.5, 0.35, 0.2};
  // x supports stay inside (x_lo, x_hi): the residual has no boundary terms.
  const double x_scale[3] = {0.25, 0.18, 0.1};
  const double t_center[4] = {0.2, 0.4, 0.6, 0.8};
  const double x_center[4] = {0.3, 0.43, 0.57, 0.7};
  std::vector<TestFunction> out;
  for (int s = 0; s < 3; ++s) {
    for (int c = 0; c < 4; ++c) {
      out.push_back({t_center[c] * t_final, t_scale[s] * t_final, x_lo + x_center[c] * L, x_scale[s] * L});
    }
  }
  return out;
}

std::vector<double> default_entropy_constants(const DensityField& rho0) {
  const auto [lo, hi] = std::minmax_element(rho0.values().begin(), rho0.values().end());
  const double a = *lo - 0.5;
  const double b = *hi + 0.5;
  std::vector<double> cs;
  for (int k = 0; k < 21; ++k) cs.push_back(a + (b - a) * k / 20.0);
  return cs;
}

EntropyReport entropy_residual(const Trajectory& traj, const FluxModel& flux, const ForcingModel& forcing,
                               const std::vector<double>& constants, const std::vector<TestFunction>& tests,
                               double tol) {
  EntropyReport rep;
  rep.constants = constants;
  rep.tol = tol;
  if (traj.size() < 2) throw ConfigError("entropy residual needs at least two snapshots");
  const SpaceGrid& g = traj.snapshots.front().rho.grid();
  const int nx = g.size();
  const auto nxs = static_cast<std::size_t>(nx);
  const std::size_t nt = traj.size();
  const std::size_t nphi = tests.size();

  // Separable test functions: x factors at cell centers (and their forward
  // differences), t factors at interval midpoints.
  std::vector<std::vector<double>> px(nphi), dpx(nphi), pt(nphi);
  for (std::size_t f = 0; f < nphi; ++f) {
    const TestFunction& tf = tests[f];
    for (int i = 0; i < nx; ++i) px[f].push_back(bump((g.center(i) - tf.x_center) / tf.x_half_width));
    for (std::size_t i = 0; i + 1 < nxs; ++i) dpx[f].push_back((px[f][i + 1] - px[f][i]) / g.dx());
    for (std::size_t n = 0; n + 1 < nt; ++n) {
      const double tm = 0.5 * (traj.times[n] + traj.times[n + 1]);
      pt[f].push_back(bump((tm - tf.t_center) / tf.t_half_width));
    }
  }

  rep.min_residual = std::numeric_limits<double>::infinity();
  std::vector<double> eta_prev(nxs), eta(nxs), h(nxs), G(nxs > 0 ? nxs - 1 : 0);
  for (double c : constants) {
    std::vector<double> res(nphi, 0.0);
    auto fill_eta = [&](std::size_t n, std::vector<double>& e) {
      const DensityField& r = traj.snapshots[n].rho;
      for (int i = 0; i < nx; ++i) e[static_cast<std::size_t>(i)] = std::abs(r[i] - c);
    };
    fill_eta(0, eta_prev);
    for (std::size_t n = 0; n + 1 < nt; ++n) {
      fill_eta(n + 1, eta);
      const DensityField& r = traj.snapshots[n].rho;
      const double t = traj.times[n];
      const double step = traj.times[n + 1] - t;
      // Numerical Kruzkov entropy flux at interior edges.
      for (std::size_t i = 0; i + 1 < nxs; ++i) {
        const double a = r[static_cast<int>(i)];
        const double b = r[static_cast<int>(i) + 1];
        G[i] = godunov_flux(flux, std::max(a, c), std::max(b, c)) - godunov_flux(flux, std::min(a, c), std::min(b, c));
      }
      // The source is explicit at t but acts after transport, so its sign is
      // taken from the new level.
      const DensityField& r1 = traj.snapshots[n + 1].rho;
      for (int i = 0; i < nx; ++i) {
        h[static_cast<std::size_t>(i)] = forcing.is_zero ? 0.0 : forcing.A(t, r1[i]) * sign(r1[i] - c);
      }
      for (std::size_t f = 0; f < nphi; ++f) {
        const double tfac = pt[f][n];
        if (tfac == 0.0) continue;
        double s = 0.0;
        for (std::size_t i = 0; i < nxs; ++i) {
          const double phi = px[f][i];
          if (phi != 0.0) s += -phi * (eta[i] - eta_prev[i]) + step * h[i] * phi;
          if (i + 1 < nxs) s += step * G[i] * dpx[f][i];
        }
        res[f] += tfac * s * g.dx();
      }
      std::swap(eta, eta_prev);
    }
    for (double v : res) rep.min_residual = std::min(rep.min_residual, v);
    rep.residuals.push_back(std::move(res));
  }
  rep.pass = rep.min_residual >= -tol;
  return rep;
}

ContractionReport check_contraction_pair(const Trajectory& a, const Trajectory& b, const ForcingModel& forcing,
                                         double slack) {
  if (a.size() != b.size() || a.size() == 0) throw ConfigError("trajectories must have matching snapshots");
  ContractionReport rep;
  rep.density.name = "l1_contraction";
  rep.kinetic.name = "kinetic_positive_part";
  rep.density.slack = rep.kinetic.slack = slack;
  rep.density.pass = rep.kinetic.pass = true;

  const DensityField& ra0 = a.snapshots[0].rho;
  const DensityField& rb0 = b.snapshots[0].rho;
  const double d0 = l1_distance(ra0, rb0);
  double p0 = 0.0;
  for (int i = 0; i < ra0.size(); ++i) p0 += std::max(0.0, ra0[i] - rb0[i]);
  p0 *= ra0.grid().dx();

  auto ratio = [](double d, double base) {
    if (base > 0.0) return d / base;
    return d > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  };
  double worst_d = -1.0, worst_k = -1.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a.times[k] - b.times[k]) > 1e-12 * std::max(1.0, a.times[k])) {
      throw ConfigError("snapshot times differ between trajectories");
    }
    const double claimed = std::exp(forcing.growth(0.0, a.times[k]));
    const double rd = ratio(l1_distance(a.snapshots[k].rho, b.snapshots[k].rho), d0);
    if (reportable(k, a.size()) && rd / claimed > worst_d) {
      worst_d = rd / claimed;
      rep.density.claimed_factor = claimed;
      rep.density.measured_ratio = rd;
      rep.density.worst_time = a.times[k];
    }
    if (rd > claimed * (1.0 + slack)) rep.density.pass = false;
    if (a.snapshots[k].u && b.snapshots[k].u) {
      const double rk = ratio(positive_part_distance(*a.snapshots[k].u, *b.snapshots[k].u), p0);
      if (reportable(k, a.size()) && rk / claimed > worst_k) {
        worst_k = rk / claimed;
        rep.kinetic.claimed_factor = claimed;
        rep.kinetic.measured_ratio = rk;
        rep.kinetic.worst_time = a.times[k];
      }
      if (rk > claimed * (1.0 + slack)) rep.kinetic.pass = false;
    }
  }
  return rep;
}

ComparisonReport check_comparison(const Trajectory& lower, const Trajectory& upper, double tol) {
  if (lower.size() != upper.size()) throw ConfigError("trajectories must have matching snapshots");
  ComparisonReport rep;
  rep.max_violation = -std::numeric_limits<double>::infinity();
  rep.max_kinetic_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < lower.size(); ++k) {
    const DensityField& a = lower.snapshots[k].rho;
    const DensityField& b = upper.snapshots[k].rho;
    for (int i = 0; i < a.size(); ++i) rep.max_violation = std::max(rep.max_violation, a[i] - b[i]);
    if (lower.snapshots[k].u && upper.snapshots[k].u) {
      const auto ua = lower.snapshots[k].u->values();
      const auto ub = upper.snapshots[k].u->values();
      for (std::size_t q = 0; q < ua.size(); ++q) {
        rep.max_kinetic_violation = std::max(rep.max_kinetic_violation, ua[q] - ub[q]);
      }
    }
  }
  rep.pass = rep.max_violation <= tol && rep.max_kinetic_violation <= tol;
  return rep;
}

BoundReport check_linf_bound(const Trajectory& traj, const ForcingModel& forcing, double slack_abs) {
  BoundReport rep;
  rep.name = "linf_bound";
  rep.pass = true;
  const double n0 = traj.snapshots.front().rho.linf();
  rep.slack = n0 > 0.0 ? slack_abs / n0 : slack_abs;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double claimed = std::exp(forcing.growth(0.0, traj.times[k]));
    const double linf = traj.snapshots[k].rho.linf();
    const double margin = linf - (claimed * n0 + slack_abs);
    if (reportable(k, traj.size()) && margin > worst) {
      worst = margin;
      rep.claimed_factor = claimed;
      rep.measured_ratio = n0 > 0.0 ? linf / n0 : linf;
      rep.worst_time = traj.times[k];
    }
    if (margin > 0.0) rep.pass = false;
  }
  return rep;
}

DefectReport check_defect(const Trajectory& traj, double tol) {
  DefectReport rep;
  rep.min_value = std::numeric_limits<double>::infinity();
  for (const Snapshot& s : traj.snapshots) {
    if (!s.m) continue;
    ++rep.snapshots;
    rep.min_value = std::min(rep.min_value, s.m->min_value());
    rep.max_total = std::max(rep.max_total, s.m->max_total_abs());
  }
  if (rep.snapshots == 0) rep.min_value = 0.0;
  rep.pass = rep.min_value >= -tol && rep.max_total <= tol;
  return rep;
}

BoundReport check_decay(const std::vector<double>& times, const std::vector<double>& norms,
                        const TimeFunction& xi, double slack) {
  BoundReport rep;
  rep.name = "decay_envelope";
  rep.slack = slack;
  rep.pass = true;
  const double n0 = norms.front();
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double claimed = std::exp(xi.integral(0.0, times[k]));
    const double measured = n0 > 0.0 ? norms[k] / n0 : 0.0;
    if (reportable(k, times.size()) && measured / claimed > worst) {
      worst = measured / claimed;
      rep.claimed_factor = claimed;
      rep.measured_ratio = measured;
      rep.worst_time = times[k];
    }
    if (measured > claimed * (1.0 + slack)) rep.pass = false;
  }
  return rep;
}

BoundReport check_decay(const Trajectory& traj, const TimeFunction& xi, double p, double slack) {
  std::vector<double> norms;
  for (const Snapshot& s : traj.snapshots) norms.push_back(s.rho.lp(p));
  BoundReport rep = check_decay(traj.times, norms, xi, slack);
  rep.name = std::isinf(p) ? "decay_envelope_linf" : "decay_envelope_l1";
  return rep;
}

double fit_decay_slope(const Trajectory& traj, double p, double t_lo) {
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double n = traj.snapshots[k].rho.lp(p);
    if (traj.times[k] > t_lo && n > 0.0) {
      xs.push_back(std::log(traj.times[k]));
      ys.push_back(std::log(n));
    }
  }
  if (xs.size() < 2) throw ConfigError("decay fit needs at least two snapshots after t_lo");
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }
  return sxy / sxx;
}

DensityField coarsen(const DensityField& fine, int factor) {
  const SpaceGrid& g = fine.grid();
  if (factor < 1 || g.size() % factor != 0) throw ConfigError("coarsening factor must divide the grid size");
  const SpaceGrid coarse(g.x_min(), g.x_max(), g.size() / factor);
  std::vector<double> v(static_cast<std::size_t>(coarse.size()), 0.0);
  for (int i = 0; i < g.size(); ++i) v[static_cast<std::size_t>(i / factor)] += fine[i] / factor;
  return DensityField(coarse, std::move(v));
}

std::vector<ConvergenceRow> convergence_study(const ConvergenceSetup& setup, const std::vector<double>& eps_list,
                                              const std::vector<int>& nx_list) {
  if (eps_list.empty() || nx_list.empty()) throw ConfigError("convergence study needs eps and nx values");
  const std::size_t n = std::max(eps_list.size(), nx_list.size());
  if ((eps_list.size() != 1 && eps_list.size() != n) || (nx_list.size() != 1 && nx_list.size() != n)) {
    throw ConfigError("eps and nx lists must have equal length (or length 1)");
  }
  const int nx_max = *std::max_element(nx_list.begin(), nx_list.end());

  std::optional<DensityField> fine_ref;
  if (!setup.exact) {
    const SpaceGrid fine(setup.x_min, setup.x_max, nx_max * setup.reference_refinement);
    fine_ref = godunov_reference(setup.flux, setup.forcing, setup.rho0.on(fine), 0.0, setup.t_final,
                                 setup.boundary, 1 << 30)
                   .back()
                   .rho;
  }

  std::vector<ConvergenceRow> rows;
  for (std::size_t k = 0; k < n; ++k) {
    const int nx = nx_list.size() == 1 ? nx_list[0] : nx_list[k];
    const double eps = eps_list.size() == 1 ? eps_list[0] : eps_list[k];
    SolverConfig c;
    c.space = SpaceGrid(setup.x_min, setup.x_max, nx);
    const DensityField rho0 = setup.rho0.on(c.space);
    const double growth = std::exp(setup.forcing.growth(0.0, setup.t_final));
    c.velocity = VelocityGrid::for_support(rho0.linf(), growth, setup.n_v);
    c.flux = setup.flux;
    c.forcing = setup.forcing;
    c.eps = eps;
    c.t_final = setup.t_final;
    c.cfl_target = setup.cfl;
    c.boundary = setup.boundary;
    c.record_every = 1 << 30;
    c.record_kinetic = false;
    c.record_defect = false;
    const Trajectory traj = run(c, rho0);

    DensityField ref;
    if (setup.exact) {
      ref = setup.exact().on(c.space);
    } else {
      const int factor = fine_ref->size() / nx;
      if (factor * nx != fine_ref->size()) throw ConfigError("nx values must divide the reference grid");
      ref = coarsen(*fine_ref, factor);
    }
    rows.push_back({nx, eps, c.space.dx(), l1_distance(traj.back().rho, ref)});
  }
  return rows;
}

}  // namespace sbgk
