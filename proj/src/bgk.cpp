#include "sbgk/bgk.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sbgk/characteristics.hpp"
#include "sbgk/errors.hpp"

namespace sbgk {

void validate(const SolverConfig& c) {
  if (!(c.eps > 0.0)) throw ConfigError("eps must be positive (got " + std::to_string(c.eps) + ")");
  if (!(c.t_final >= 0.0)) throw ConfigError("t_final must be nonnegative");
  if (!(c.dt >= 0.0)) throw ConfigError("dt must be nonnegative (0 = from CFL)");
  if (!(c.cfl_target > 0.0 && c.cfl_target <= 1.0)) throw ConfigError("cfl_target must lie in (0, 1]");
  if (c.record_every < 1) throw ConfigError("record_every must be at least 1");
  if (!(c.h_char_fraction > 0.0 && c.h_char_fraction <= 1.0)) {
    throw ConfigError("h_char_fraction must lie in (0, 1]");
  }
}

TimeStep select_time_step(const SolverConfig& c) {
  validate(c);
  if (c.t_final == 0.0) return {c.dt > 0.0 ? c.dt : 0.0, 0};
  double max_b = 0.0;
  for (int j = 0; j < c.velocity.size(); ++j) {
    max_b = std::max(max_b, std::abs(c.flux.b(c.velocity.center(j))));
  }
  double dt = c.dt;
  if (max_b > 0.0) {
    const double dt_cfl = c.cfl_target * c.space.dx() / max_b;
    dt = dt > 0.0 ? std::min(dt, dt_cfl) : dt_cfl;
  } else if (!(dt > 0.0)) {
    throw ConfigError("dt must be given when all kinetic speeds vanish");
  }
  const int n = std::max(1, static_cast<int>(std::ceil(c.t_final / dt - 1e-9)));
  return {c.t_final / n, n};
}

void Trajectory::push(Snapshot s) {
  times.push_back(s.t);
  mass.push_back(s.rho.mass());
  l1.push_back(s.rho.l1());
  linf.push_back(s.rho.linf());
  total_defect.push_back(s.m ? s.m->integral() : 0.0);
  snapshots.push_back(std::move(s));
}

KineticField step_transport(const KineticField& u, double dt, const FluxModel& flux,
                            Boundary boundary) {
  const SpaceGrid& xg = u.space();
  const VelocityGrid& vg = u.velocity();
  const int nx = xg.size();
  const int nv = vg.size();
  std::vector<double> out(u.values().begin(), u.values().end());
  auto at = [nv](int i, int j) { return static_cast<std::size_t>(i) * nv + j; };
  const auto in = u.values();
  for (int j = 0; j < nv; ++j) {
    double nu = dt * flux.b(vg.center(j)) / xg.dx();
    if (std::abs(nu) > 1.0 + 1e-12) {
      throw CflViolation("dt·|b(v)|/dx = " + std::to_string(std::abs(nu)) + " at v = " +
                         std::to_string(vg.center(j)));
    }
    nu = std::clamp(nu, -1.0, 1.0);
    if (nu == 0.0) continue;
    if (nu > 0.0) {
      const double ghost = boundary == Boundary::Extrapolate ? in[at(0, j)] : 0.0;
      for (int i = 0; i < nx; ++i) {
        const double upstream = i > 0 ? in[at(i - 1, j)] : ghost;
        out[at(i, j)] = (1.0 - nu) * in[at(i, j)] + nu * upstream;
      }
    } else {
      const double a = -nu;
      const double ghost = boundary == Boundary::Extrapolate ? in[at(nx - 1, j)] : 0.0;
      for (int i = 0; i < nx; ++i) {
        const double upstream = i + 1 < nx ? in[at(i + 1, j)] : ghost;
        out[at(i, j)] = (1.0 - a) * in[at(i, j)] + a * upstream;
      }
    }
  }
  return KineticField(xg, vg, std::move(out));
}

namespace {

struct Weight {
  int k;
  double w;
};

// Weights of the average over [lo, hi] of a piecewise-constant field on the
// velocity cells; cells outside the grid carry u = 0.
std::vector<Weight> remap_weights(const VelocityGrid& vg, double lo, double hi) {
  std::vector<Weight> ws;
  const double len = hi - lo;
  const int k_lo = std::max(0, static_cast<int>(std::floor((lo - vg.edge(0)) / vg.dv())) - 1);
  const int k_hi = std::min(vg.size() - 1, static_cast<int>(std::floor((hi - vg.edge(0)) / vg.dv())) + 1);
  for (int k = k_lo; k <= k_hi; ++k) {
    const double ov = std::min(hi, vg.edge(k + 1)) - std::max(lo, vg.edge(k));
    if (ov > 0.0) ws.push_back({k, ov / len});
  }
  return ws;
}

double interpolate_density(const DensityField& rho, double x, Boundary boundary) {
  const SpaceGrid& g = rho.grid();
  const double p = (x - g.x_min()) / g.dx() - 0.5;
  const double kf = std::floor(p);
  const double a = p - kf;
  auto value = [&](double idx) {
    if (idx < 0.0 || idx > g.size() - 1) {
      if (boundary == Boundary::ZeroInflow) return 0.0;
      return idx < 0.0 ? rho[0] : rho[g.size() - 1];
    }
    return rho[static_cast<int>(idx)];
  };
  const double v0 = value(kf);
  return a == 0.0 ? v0 : (1.0 - a) * v0 + a * value(kf + 1.0);
}

void check_support(const KineticField& u, const SolverConfig& c, double t) {
  const int nx = u.space().size();
  const int nv = u.velocity().size();
  const double tol = c.support_tol;
  if (c.boundary == Boundary::ZeroInflow) {
    for (int j = 0; j < nv; ++j) {
      if (std::abs(u(0, j)) > tol || std::abs(u(nx - 1, j)) > tol) {
        throw SupportOverflow("solution reached the spatial boundary at t = " + std::to_string(t));
      }
    }
  }
  for (int i = 0; i < nx; ++i) {
    if (std::abs(u(i, 0)) > tol || std::abs(u(i, nv - 1)) > tol) {
      throw SupportOverflow("solution reached the velocity band edge at t = " + std::to_string(t));
    }
  }
}

Snapshot make_snapshot(double t, const KineticField& u, const SolverConfig& c) {
  Snapshot s;
  s.t = t;
  s.rho = reconstruct_density(u);
  if (c.record_defect) s.m = defect_measure(u, c.eps, c.defect_tol);
  if (c.record_kinetic) s.u = u;
  return s;
}

}  // namespace

KineticField step_forcing(const KineticField& u, double t, double dt, const ForcingModel& forcing,
                          double h_char) {
  if (forcing.is_zero || dt == 0.0) return u;
  const VelocityGrid& vg = u.velocity();
  const int nv = vg.size();
  const FlowOptions opts{h_char};
  std::vector<double> back(static_cast<std::size_t>(nv) + 1);
  for (int j = 0; j <= nv; ++j) {
    back[static_cast<std::size_t>(j)] =
        j == vg.zero_edge() ? 0.0 : trace_velocity(forcing, t + dt, t, vg.edge(j), opts);
  }
  std::vector<std::vector<Weight>> weights(static_cast<std::size_t>(nv));
  for (int j = 0; j < nv; ++j) {
    const double lo = back[static_cast<std::size_t>(j)];
    const double hi = back[static_cast<std::size_t>(j) + 1];
    if (!(hi > lo)) throw StepOverflow("velocity characteristics crossed; reduce dt");
    weights[static_cast<std::size_t>(j)] = remap_weights(vg, lo, hi);
  }
  const int nx = u.space().size();
  std::vector<double> out(u.values().size());
  for (int i = 0; i < nx; ++i) {
    const auto row = u.row(i);
    double* dst = out.data() + static_cast<std::size_t>(i) * nv;
    for (int j = 0; j < nv; ++j) {
      double s = 0.0;
      for (const Weight& w : weights[static_cast<std::size_t>(j)]) s += w.w * row[static_cast<std::size_t>(w.k)];
      dst[j] = s;
    }
  }
  return KineticField(u.space(), vg, std::move(out));
}

KineticField step_relax(const KineticField& u, double dt, double eps) {
  if (!(eps > 0.0)) throw ConfigError("eps must be positive");
  const double w = std::exp(-dt / eps);
  const KineticField eq = project_density(reconstruct_density(u), u.velocity());
  const auto a = u.values();
  const auto b = eq.values();
  std::vector<double> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = w * a[k] + (1.0 - w) * b[k];
  return KineticField(u.space(), u.velocity(), std::move(out));
}

Trajectory run(const SolverConfig& c, const DensityField& rho0, const StepHook& post_step) {
  const TimeStep ts = select_time_step(c);
  if (!(rho0.grid() == c.space)) throw ConfigError("initial density grid differs from config.space");
  const double dt = ts.dt;
  const double h_char = c.h_char_fraction * dt;
  KineticField u = project_density(rho0, c.velocity);
  check_support(u, c, 0.0);

  Trajectory traj;
  traj.dt = dt;
  traj.push(make_snapshot(0.0, u, c));
  for (int k = 0; k < ts.n_steps; ++k) {
    const double t = k * dt;
    if (c.splitting == Splitting::Lie) {
      u = step_transport(u, dt, c.flux, c.boundary);
      u = step_forcing(u, t, dt, c.forcing, h_char);
      u = step_relax(u, dt, c.eps);
    } else {
      const double half = 0.5 * dt;
      u = step_transport(u, half, c.flux, c.boundary);
      u = step_forcing(u, t, half, c.forcing, 0.5 * h_char);
      u = step_relax(u, dt, c.eps);
      u = step_forcing(u, t + half, half, c.forcing, 0.5 * h_char);
      u = step_transport(u, half, c.flux, c.boundary);
    }
    if (post_step) u = post_step(std::move(u), k, t, dt);
    const double t_next = k + 1 == ts.n_steps ? c.t_final : (k + 1) * dt;
    check_support(u, c, t_next);
    if ((k + 1) % c.record_every == 0 || k + 1 == ts.n_steps) traj.push(make_snapshot(t_next, u, c));
  }
  return traj;
}

namespace {

// Exact ∫ (1/ε) e^{(s−t)/ε} φ_m(s) ds for the hat functions φ_m on `nodes`,
// restricted to [0, t_n]. Positive, summing to 1 − e^{−t_n/ε}.
std::vector<double> kernel_weights(const std::vector<double>& nodes, int n, double eps) {
  std::vector<double> w(static_cast<std::size_t>(n) + 1, 0.0);
  const double t = nodes[static_cast<std::size_t>(n)];
  for (int m = 0; m < n; ++m) {
    const double a = nodes[static_cast<std::size_t>(m)];
    const double b = nodes[static_cast<std::size_t>(m) + 1];
    const double r = (b - a) / eps;
    const double ea = std::exp((a - t) / eps);
    const double eb = std::exp((b - t) / eps);
    double wl, wr;
    if (r < 1e-6) {
      wl = ea * (0.5 * r + r * r / 6.0);
      wr = eb * (0.5 * r - r * r / 6.0);
    } else {
      wl = ea * (std::expm1(r) / r - 1.0);
      wr = eb * (1.0 + std::expm1(-r) / r);
    }
    w[static_cast<std::size_t>(m)] += wl;
    w[static_cast<std::size_t>(m) + 1] += wr;
  }
  return w;
}

}  // namespace

KineticSequence picard_map(const KineticSequence& u_in, const SolverConfig& c,
                           const DensityField& rho0) {
  validate(c);
  if (u_in.times.size() != u_in.fields.size() || u_in.times.empty()) {
    throw ConfigError("picard_map needs a nonempty, consistent sequence");
  }
  const SpaceGrid& xg = c.space;
  const VelocityGrid& vg = c.velocity;
  const int nx = xg.size();
  const int nv = vg.size();
  const std::size_t nt = u_in.times.size();

  std::vector<DensityField> rho(nt);
  for (std::size_t m = 0; m < nt; ++m) rho[m] = reconstruct_density(u_in.fields[m]);

  KineticSequence out;
  out.times = u_in.times;
  out.fields.reserve(nt);
  const double h_step = nt > 1 ? u_in.times[1] - u_in.times[0] : 1.0;
  const FlowOptions opts{c.h_char_fraction * h_step};

  std::vector<double> lo(static_cast<std::size_t>(nv)), hi(static_cast<std::size_t>(nv)),
      shift(static_cast<std::size_t>(nv));
  // Accumulates weight · χ̄(ρ(s, x + X-shift), back-traced cell) into acc.
  auto accumulate = [&](std::vector<double>& acc, const DensityField& r, double t, double s, double weight) {
    for (int j = 0; j < nv; ++j) {
      const auto jj = static_cast<std::size_t>(j);
      lo[jj] = j == vg.zero_edge() ? 0.0 : trace_velocity(c.forcing, t, s, vg.edge(j), opts);
      hi[jj] = j + 1 == vg.zero_edge() ? 0.0 : trace_velocity(c.forcing, t, s, vg.edge(j + 1), opts);
      shift[jj] = inverse_flow(c.flux, c.forcing, s, t, 0.0, vg.center(j), opts).x;
    }
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < nv; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        const double r_at = interpolate_density(r, xg.center(i) + shift[jj], c.boundary);
        acc[static_cast<std::size_t>(i) * nv + jj] += weight * chi_cell_average(r_at, lo[jj], hi[jj]);
      }
    }
  };

  for (std::size_t n = 0; n < nt; ++n) {
    const double t = u_in.times[n];
    std::vector<double> acc(static_cast<std::size_t>(nx) * nv, 0.0);
    if (n > 0) {
      const auto w = kernel_weights(u_in.times, static_cast<int>(n), c.eps);
      for (std::size_t m = 0; m <= n; ++m) {
        if (w[m] > 0.0) accumulate(acc, rho[m], t, u_in.times[m], w[m]);
      }
    }
    accumulate(acc, rho0, t, u_in.times[0], std::exp(-(t - u_in.times[0]) / c.eps));
    out.fields.emplace_back(xg, vg, std::move(acc));
  }
  return out;
}

KineticSequence picard_iterate(const SolverConfig& c, const DensityField& rho0, int iterations) {
  const TimeStep ts = select_time_step(c);
  KineticSequence seq;
  const KineticField u0 = project_density(rho0, c.velocity);
  for (int n = 0; n <= ts.n_steps; ++n) {
    seq.times.push_back(n == ts.n_steps ? c.t_final : n * ts.dt);
    seq.fields.push_back(u0);
  }
  for (int k = 0; k < iterations; ++k) seq = picard_map(seq, c, rho0);
  return seq;
}

double sequence_distance(const KineticSequence& f, const KineticSequence& g) {
  if (f.fields.size() != g.fields.size()) throw ConfigError("sequences differ in length");
  double d = 0.0;
  for (std::size_t n = 0; n < f.fields.size(); ++n) {
    d = std::max(d, kinetic_l1_distance(f.fields[n], g.fields[n]));
  }
  return d;
}

}  // namespace sbgk
