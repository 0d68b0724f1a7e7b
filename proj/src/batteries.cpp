#include "sbgk/batteries.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sbgk/errors.hpp"
#include "sbgk/stochastic.hpp"
#include "sbgk/verify.hpp"

namespace sbgk {

double CheckResult::metric(const std::string& key) const {
  for (const auto& [k, v] : metrics) {
    if (k == key) return v;
  }
  throw ConfigError("no metric '" + key + "' in check " + name);
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"contraction", "comparison",  "entropy",
                                                 "decay",       "convergence", "stochastic-consistency"};
  return names;
}

bool all_pass(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.pass; });
}

namespace {

using Metrics = std::vector<std::pair<std::string, double>>;

CheckResult make(const std::string& suite, std::string name, bool pass, Metrics m, std::string detail = {}) {
  return CheckResult{suite, std::move(name), pass, std::move(m), std::move(detail)};
}

SolverConfig make_config(FluxModel flux, ForcingModel forcing, SpaceGrid space, double t_final, double k_max,
                         int n_v, Boundary boundary, double eps = 1e-3) {
  SolverConfig c;
  c.space = space;
  c.velocity = VelocityGrid::for_support(k_max, std::exp(forcing.growth(0.0, t_final)), n_v);
  c.flux = std::move(flux);
  c.forcing = std::move(forcing);
  c.t_final = t_final;
  c.eps = eps;
  c.boundary = boundary;
  return c;
}

CheckResult defect_check(const std::string& suite, const std::string& label, const Trajectory& traj) {
  const DefectReport d = check_defect(traj, 1e-10);
  return make(suite, "defect:" + label, d.pass,
              {{"min_value", d.min_value},
               {"max_total", d.max_total},
               {"snapshots", static_cast<double>(d.snapshots)}});
}

CheckResult bound_check(const std::string& suite, const std::string& name, const BoundReport& b) {
  return make(suite, name, b.pass,
              {{"claimed_factor", b.claimed_factor},
               {"measured_ratio", b.measured_ratio},
               {"slack", b.slack},
               {"worst_time", b.worst_time}});
}

double min_value(const Trajectory& traj) {
  double m = std::numeric_limits<double>::infinity();
  for (const Snapshot& s : traj.snapshots) {
    for (double v : s.rho.values()) m = std::min(m, v);
  }
  return m;
}

// Random smooth data: a sum of `n` cos² bumps with heights in [h_lo, h_hi].
Profile random_bumps(std::mt19937_64& rng, int n, double c_lo, double c_hi, double h_lo, double h_hi) {
  std::uniform_real_distribution<double> center(c_lo, c_hi), width(0.15, 0.5), height(h_lo, h_hi);
  std::vector<Profile> parts;
  for (int k = 0; k < n; ++k) {
    const double c = center(rng);
    const double w = width(rng);
    parts.push_back(Profile::bump(c, w, height(rng)));
  }
  return Profile::sum(std::move(parts));
}

Profile shifted(const Profile& p, double m) {
  return Profile(
      p.name(), [p, m](double lo, double hi) { return p.average(lo - m, hi - m); },
      [p, m](double x) { return p(x - m); });
}

}  // namespace

// Contraction: χ identities, L¹ / kinetic contraction, L∞ growth, sign
// preservation, defect nonnegativity.
std::vector<CheckResult> contraction_suite() {
  const std::string S = "contraction";
  std::vector<CheckResult> out;

  {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> vmax_d(0.25, 4.0), unit(-1.0, 1.0);
    std::uniform_int_distribution<int> half_cells(1, 64), cells(1, 8);
    double worst_rec = 0.0, worst_dist = 0.0;
    const int samples = 1000;
    for (int s = 0; s < samples; ++s) {
      const VelocityGrid vg = VelocityGrid::symmetric(vmax_d(rng), 2 * half_cells(rng));
      const SpaceGrid xg(0.0, 1.0, cells(rng));
      std::vector<double> vals;
      for (int i = 0; i < xg.size(); ++i) vals.push_back(vg.v_max() * unit(rng));
      const DensityField rho(xg, vals);
      const DensityField back = reconstruct_density(project_density(rho, vg));
      const double a = vg.v_max() * unit(rng);
      const double b = vg.v_max() * unit(rng);
      const double scale = std::max(1.0, vg.v_max());
      for (int i = 0; i < xg.size(); ++i) worst_rec = std::max(worst_rec, std::abs(back[i] - rho[i]) / scale);
      worst_dist = std::max(worst_dist, std::abs(chi_positive_distance(a, b, vg) - std::max(a - b, 0.0)) / scale);
    }
    const double tol = 1e-13;
    out.push_back(make(S, "chi_identities", worst_rec <= tol && worst_dist <= tol,
                       {{"samples", samples},
                        {"max_reconstruction_error", worst_rec},
                        {"max_distance_error", worst_dist},
                        {"tol", tol}}));
  }

  struct Case {
    std::string label;
    FluxModel flux;
    ForcingModel forcing;
    double t_final;
    double slack;
    bool nonnegative;
  };
  const std::vector<Case> cases = {
      {"burgers_unforced", burgers_flux(), zero_forcing(), 1.0, 1e-10, false},
      {"buckley_leverett_unforced", buckley_leverett_flux(), zero_forcing(), 1.0, 1e-10, true},
      {"burgers_linear_growth", burgers_flux(), linear_decay_forcing(TimeFunction::constant(1.0)), 1.0, 1e-6, true},
      {"buckley_leverett_forced", buckley_leverett_flux(), bl_forcing(TimeFunction::constant(1.0)), 1.0, 1e-6,
       true},
  };
  std::mt19937_64 rng(2);
  const SpaceGrid grid(-3.0, 3.0, 200);
  for (const Case& cs : cases) {
    const double h_lo = cs.nonnegative ? 0.1 : -0.8;
    const Profile pa = random_bumps(rng, 2, -0.8, 0.8, h_lo, 0.45);
    const Profile pb = random_bumps(rng, 2, -0.8, 0.8, h_lo, 0.45);
    const DensityField ra = pa.on(grid), rb = pb.on(grid);
    const double k = std::max(ra.linf(), rb.linf());
    const SolverConfig c = make_config(cs.flux, cs.forcing, grid, cs.t_final, k, 64, Boundary::ZeroInflow);
    const Trajectory ta = run(c, ra);
    const Trajectory tb = run(c, rb);
    const ContractionReport rep = check_contraction_pair(ta, tb, c.forcing, cs.slack);
    CheckResult l1 = bound_check(S, "l1_contraction:" + cs.label, rep.density);
    l1.metrics.emplace_back("t_final", cs.t_final);
    l1.metrics.emplace_back("final_ratio", l1_distance(ta.back().rho, tb.back().rho) / l1_distance(ra, rb));
    l1.metrics.emplace_back("final_claimed", std::exp(c.forcing.growth(0.0, cs.t_final)));
    out.push_back(std::move(l1));
    out.push_back(bound_check(S, "kinetic_contraction:" + cs.label, rep.kinetic));
    out.push_back(bound_check(S, "linf_bound:" + cs.label, check_linf_bound(ta, c.forcing, c.velocity.dv())));
    if (cs.nonnegative) {
      const double m = std::min(min_value(ta), min_value(tb));
      out.push_back(make(S, "sign_preservation:" + cs.label, m >= -1e-12, {{"min_rho", m}, {"tol", 1e-12}}));
    }
    out.push_back(defect_check(S, cs.label, ta));

    if (cs.forcing.is_zero) {
      // Translation by one cell: the distance never exceeds the initial one.
      const DensityField rs = shifted(pa, grid.dx()).on(grid);
      const Trajectory ts = run(c, rs);
      const ContractionReport tr = check_contraction_pair(ta, ts, c.forcing, cs.slack);
      out.push_back(bound_check(S, "translation:" + cs.label, tr.density));
    }
  }
  return out;
}

// 20 ordered pairs over Burgers / Buckley-Leverett, with and without forcing.
std::vector<CheckResult> comparison_suite() {
  const std::string S = "comparison";
  std::vector<CheckResult> out;
  std::mt19937_64 rng(3);
  const SpaceGrid grid(-2.0, 3.0, 200);
  for (int k = 0; k < 20; ++k) {
    const int kind = k % 4;
    const bool bl = kind >= 2;
    const bool forced = kind % 2 == 1;
    const FluxModel flux = bl ? buckley_leverett_flux() : burgers_flux();
    ForcingModel forcing = zero_forcing();
    if (forced) {
      forcing = bl ? bl_forcing(TimeFunction::constant(1.0)) : linear_decay_forcing(TimeFunction::constant(0.5));
    }
    const double h_lo = bl ? 0.0 : -0.6;
    const Profile lower = random_bumps(rng, 2, -0.8, 0.8, h_lo, 0.4);
    const Profile upper = Profile::sum({lower, random_bumps(rng, 1, -0.8, 0.8, 0.0, 0.3)});
    const DensityField rl = lower.on(grid), ru = upper.on(grid);
    const SolverConfig c = make_config(flux, forcing, grid, 0.5, std::max(rl.linf(), ru.linf()), 48,
                                       Boundary::ZeroInflow);
    const Trajectory tl = run(c, rl);
    const Trajectory tu = run(c, ru);
    const ComparisonReport rep = check_comparison(tl, tu, 1e-12);
    const std::string label = std::string(bl ? "buckley_leverett" : "burgers") + (forced ? "_forced_" : "_") +
                              std::to_string(k);
    out.push_back(make(S, "ordering:" + label, rep.pass,
                       {{"max_violation", rep.max_violation},
                        {"max_kinetic_violation", rep.max_kinetic_violation},
                        {"tol", 1e-12}}));
    out.push_back(defect_check(S, label, tu));
  }
  return out;
}

namespace {

struct EntropyCase {
  std::string label;
  FluxModel flux;
  ForcingModel forcing;
  Profile rho0;
};

std::vector<EntropyCase> entropy_cases() {
  return {
      {"burgers_shock", burgers_flux(), zero_forcing(), Profile::riemann(1.0, 0.0, 0.0)},
      {"burgers_rarefaction", burgers_flux(), zero_forcing(), Profile::riemann(0.0, 1.0, 0.0)},
      {"burgers_bump", burgers_flux(), zero_forcing(), Profile::bump(0.2, 0.6, 1.0)},
      {"burgers_decay", burgers_flux(), linear_decay_forcing(TimeFunction::constant(-1.0)),
       Profile::riemann(1.0, 0.0, 0.0)},
      {"buckley_leverett_box", buckley_leverett_flux(), zero_forcing(), Profile::box(-0.5, 0.3, 0.9)},
      {"buckley_leverett_forced", buckley_leverett_flux(), bl_forcing(TimeFunction::constant(1.0)),
       Profile::bump(0.0, 0.6, 0.5)},
  };
}

constexpr double kEntropyT = 0.5, kEntropyXlo = -1.0, kEntropyXhi = 2.0;
constexpr int kEntropyNx = 400;

}  // namespace

double entropy_tolerance() {
  const SpaceGrid grid(kEntropyXlo, kEntropyXhi, kEntropyNx);
  const std::vector<TestFunction> tests = default_test_battery(kEntropyT, kEntropyXlo, kEntropyXhi);
  double calib = 0.0;
  for (const EntropyCase& cs : entropy_cases()) {
    const DensityField r0 = cs.rho0.on(grid);
    const Trajectory god = godunov_reference(cs.flux, cs.forcing, r0, 0.0, kEntropyT, Boundary::Extrapolate);
    const EntropyReport g =
        entropy_residual(god, cs.flux, cs.forcing, default_entropy_constants(r0), tests, 0.0);
    calib = std::max(calib, -g.min_residual);
  }
  return 10.0 * calib;
}

// Kruzkov residuals on BGK trajectories, with the tolerance calibrated on
// Godunov runs of the same cases.
std::vector<CheckResult> entropy_suite() {
  const std::string S = "entropy";
  std::vector<CheckResult> out;
  const std::vector<EntropyCase> cases = entropy_cases();
  const double T = kEntropyT;
  const SpaceGrid grid(kEntropyXlo, kEntropyXhi, kEntropyNx);
  const std::vector<TestFunction> tests = default_test_battery(T, kEntropyXlo, kEntropyXhi);

  const double tol = entropy_tolerance();
  std::vector<EntropyReport> bgk_reports;
  for (const EntropyCase& cs : cases) {
    const DensityField r0 = cs.rho0.on(grid);
    const std::vector<double> constants = default_entropy_constants(r0);
    SolverConfig c = make_config(cs.flux, cs.forcing, grid, T, r0.linf(), 64, Boundary::Extrapolate);
    c.record_kinetic = false;
    bgk_reports.push_back(entropy_residual(run(c, r0), cs.flux, cs.forcing, constants, tests, 0.0));
  }
  out.push_back(make(S, "calibration", std::isfinite(tol) && tol > 0.0,
                     {{"godunov_worst_negative", tol / 10.0}, {"tol_entropy", tol}},
                     "tol_entropy = 10 x worst negative Godunov residual over the battery"));
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const double m = bgk_reports[k].min_residual;
    out.push_back(make(S, "residuals:" + cases[k].label, m >= -tol,
                       {{"min_residual", m},
                        {"tol_entropy", tol},
                        {"constants", static_cast<double>(bgk_reports[k].constants.size())},
                        {"test_functions", static_cast<double>(tests.size())}}));
  }

  // A non-entropic weak solution: the 0 | 1 expansion shock at speed 1/2.
  Trajectory planted;
  const int n = 100;
  for (int k = 0; k <= n; ++k) {
    const double t = T * k / n;
    planted.push(Snapshot{t, Profile::riemann(0.0, 1.0, 0.5 * t).on(grid), std::nullopt, std::nullopt});
  }
  const EntropyReport e = entropy_residual(planted, burgers_flux(), zero_forcing(),
                                           default_entropy_constants(planted.snapshots[0].rho), tests, tol);
  out.push_back(make(S, "expansion_shock_flagged", !e.pass,
                     {{"min_residual", e.min_residual}, {"tol_entropy", tol}}));
  return out;
}

std::vector<CheckResult> decay_suite(int n_threads) {
  const std::string S = "decay";
  std::vector<CheckResult> out;
  const SpaceGrid grid(-3.0, 3.0, 300);
  const Profile p0 = Profile::bump(0.0, 0.8, 1.0);
  const DensityField r0 = p0.on(grid);

  {
    const TimeFunction xi = TimeFunction::constant(-1.0);
    SolverConfig c = make_config(burgers_flux(), linear_decay_forcing(xi), grid, 1.0, r0.linf(), 64,
                                 Boundary::ZeroInflow);
    c.record_kinetic = false;
    const Trajectory tr = run(c, r0);
    out.push_back(bound_check(S, "envelope_l1:constant", check_decay(tr, xi, 1.0, 1e-6)));
    out.push_back(bound_check(S, "envelope_linf:constant",
                              check_decay(tr, xi, std::numeric_limits<double>::infinity(), 1e-6)));
    out.push_back(defect_check(S, "constant", tr));

    // Ensemble means under transport noise obey the same envelope.
    c.record_every = 10;
    const EnsembleStats st = ensemble(c, r0, noise(TimeFunction::constant(0.2)), 64, 11, n_threads);
    out.push_back(bound_check(S, "envelope_l1:ensemble_mean", check_decay(st.times, st.mean_l1, xi, 1e-6)));
  }
  {
    const double alpha = 2.0, r1 = 0.1, T = 3.0;
    const TimeFunction xi = TimeFunction::inverse_time(alpha, r1);
    SolverConfig c = make_config(burgers_flux(), linear_decay_forcing(xi), grid, T, r0.linf(), 64,
                                 Boundary::ZeroInflow);
    c.record_kinetic = false;
    const Trajectory tr = run(c, r0);
    out.push_back(bound_check(S, "envelope_l1:inverse_time", check_decay(tr, xi, 1.0, 1e-6)));
    const double slope = fit_decay_slope(tr, 1.0, r1);
    out.push_back(make(S, "power_law_slope:inverse_time", slope >= -alpha * 1.1 && slope <= -alpha * 0.9,
                       {{"slope_l1", slope},
                        {"expected", -alpha},
                        {"lo", -alpha * 1.1},
                        {"hi", -alpha * 0.9},
                        {"slope_linf", fit_decay_slope(tr, std::numeric_limits<double>::infinity(), r1)}}));
    out.push_back(defect_check(S, "inverse_time", tr));
  }
  return out;
}

std::vector<CheckResult> convergence_suite() {
  const std::string S = "convergence";
  std::vector<CheckResult> out;

  auto study = [&](const std::string& label, const ConvergenceSetup& setup, double abs_tol, int abs_row) {
    const std::vector<ConvergenceRow> rows =
        convergence_study(setup, {4e-3, 2e-3, 1e-3, 1e-3}, {200, 400, 800, 400});
    Metrics m;
    bool decreasing = true;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      char tag[64];
      std::snprintf(tag, sizeof tag, "nx%d_eps%g", rows[k].nx, rows[k].eps);
      m.emplace_back(std::string("error_") + tag, rows[k].error);
    }
    for (std::size_t k = 1; k < 3; ++k) decreasing = decreasing && rows[k].error < rows[k - 1].error;
    out.push_back(make(S, "refinement:" + label, decreasing, m,
                       "errors along (200, 4e-3) -> (400, 2e-3) -> (800, 1e-3) strictly decrease"));
    out.push_back(make(S, "error_bound:" + label, rows[static_cast<std::size_t>(abs_row)].error <= abs_tol,
                       {{"nx", rows[static_cast<std::size_t>(abs_row)].nx},
                        {"eps", rows[static_cast<std::size_t>(abs_row)].eps},
                        {"error", rows[static_cast<std::size_t>(abs_row)].error},
                        {"tol", abs_tol}}));
  };

  {
    ConvergenceSetup s;
    s.flux = burgers_flux();
    s.rho0 = Profile::riemann(1.0, 0.0, 0.0);
    s.x_min = -1.0;
    s.x_max = 2.0;
    s.t_final = 0.5;
    s.exact = [] { return burgers_riemann_solution(1.0, 0.0, 0.0, 0.5); };
    study("burgers_shock", s, 0.05, 3);
  }
  {
    ConvergenceSetup s;
    s.flux = buckley_leverett_flux();
    s.rho0 = Profile::box(-0.5, 0.3, 0.9);
    s.x_min = -1.0;
    s.x_max = 2.0;
    s.t_final = 0.5;
    study("buckley_leverett_box", s, 0.05, 3);
  }

  // Mild-form (Picard) map on a tiny grid.
  {
    SolverConfig c;
    c.space = SpaceGrid(-1.0, 1.0, 32);
    c.velocity = VelocityGrid::symmetric(1.2, 16);
    c.flux = burgers_flux();
    c.eps = 0.1;
    c.t_final = 0.2;
    const DensityField r0 = Profile::bump(0.0, 0.5, 0.8).on(c.space);
    const TimeStep ts = select_time_step(c);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto random_sequence = [&]() {
      KineticSequence seq;
      for (int n = 0; n <= ts.n_steps; ++n) {
        std::vector<double> vals;
        for (int i = 0; i < c.space.size(); ++i) {
          for (int j = 0; j < c.velocity.size(); ++j) {
            const double u = unit(rng);
            vals.push_back(c.velocity.center(j) > 0.0 ? u : -u);
          }
        }
        seq.times.push_back(n == ts.n_steps ? c.t_final : n * ts.dt);
        seq.fields.emplace_back(c.space, c.velocity, std::move(vals));
      }
      return seq;
    };
    const double bound = 1.0 - std::exp(-c.t_final / c.eps);
    double worst = 0.0;
    const int pairs = 5;
    for (int k = 0; k < pairs; ++k) {
      const KineticSequence a = random_sequence();
      const KineticSequence b = random_sequence();
      const double d = sequence_distance(a, b);
      worst = std::max(worst, sequence_distance(picard_map(a, c, r0), picard_map(b, c, r0)) / d);
    }
    out.push_back(make(S, "picard_contraction", worst <= bound,
                       {{"pairs", pairs}, {"worst_factor", worst}, {"bound", bound}}));

    const Trajectory tr = run(c, r0);
    const KineticSequence pic = picard_iterate(c, r0, 10);
    double dist = 0.0;
    for (std::size_t n = 0; n < tr.size(); ++n) {
      dist = std::max(dist, l1_distance(tr.snapshots[n].rho, reconstruct_density(pic.fields[n])));
    }
    const double tol = 5.0 * (c.space.dx() + c.velocity.dv() + tr.dt);
    out.push_back(make(S, "picard_vs_splitting", dist <= tol,
                       {{"iterations", 10}, {"l1_distance", dist}, {"tol", tol}}));
    out.push_back(defect_check(S, "picard_grid", tr));
  }
  return out;
}

std::vector<CheckResult> stochastic_suite(int n_threads) {
  const std::string S = "stochastic-consistency";
  std::vector<CheckResult> out;

  // (a) pure transport: ρ(t) = ρ₀(x − M(t)).
  {
    SolverConfig c;
    c.space = SpaceGrid(-2.0, 2.0, 400);
    c.velocity = VelocityGrid::symmetric(1.2, 32);
    c.flux = linear_flux(0.0);
    c.t_final = 0.5;
    c.dt = 0.005;
    const Profile p = Profile::bump(0.0, 0.5, 1.0);
    const DensityField r0 = p.on(c.space);
    const ShiftPath sh = sample_shift(noise(TimeFunction::constant(0.5)), 7, 0.005, 0.5);
    double tv = 0.0;
    for (int i = 1; i < r0.size(); ++i) tv += std::abs(r0[i] - r0[i - 1]);
    double worst = 0.0, worst_aligned = 0.0;
    const Trajectory tr = solve_pathwise_shift(c, r0, sh);
    const Trajectory ta = solve_pathwise_shift(c, r0, sh, ShiftMode::GridAligned);
    for (std::size_t k = 0; k < tr.size(); ++k) {
      const double m = sh.at(tr.times[k]);
      worst = std::max(worst, l1_distance(tr.snapshots[k].rho, shifted(p, m).on(c.space)));
      const double cells = std::round(m / c.space.dx());
      worst_aligned = std::max(
          worst_aligned, l1_distance(ta.snapshots[k].rho, shifted(p, cells * c.space.dx()).on(c.space)));
    }
    const double tol = c.space.dx() * tv;
    out.push_back(make(S, "pure_transport_shift", worst <= tol,
                       {{"l1_error", worst}, {"tol", tol}, {"dx", c.space.dx()}, {"max_abs_shift", sh.max_abs()}}));
    out.push_back(make(S, "pure_transport_grid_aligned", worst_aligned <= 1e-12,
                       {{"l1_error", worst_aligned}, {"tol", 1e-12}}));
  }

  // (b) shift reduction vs per-step translation, Burgers.
  {
    SolverConfig c = make_config(burgers_flux(), zero_forcing(), SpaceGrid(-2.0, 2.0, 400), 0.5, 1.0, 64,
                                 Boundary::ZeroInflow);
    c.record_kinetic = false;
    c.record_defect = false;
    const DensityField r0 = Profile::box(-0.5, 0.0, 1.0).on(c.space);
    const TimeStep ts = select_time_step(c);
    const NoiseModel nm = noise(TimeFunction::constant(0.2));
    double worst = 0.0;
    const int seeds = 10;
    for (int s = 0; s < seeds; ++s) {
      const ShiftPath sh = sample_shift(nm, 100 + static_cast<std::uint64_t>(s), ts.dt, c.t_final);
      const Trajectory a = solve_pathwise_shift(c, r0, sh);
      const Trajectory b = solve_pathwise_direct(c, r0, sh);
      worst = std::max(worst, l1_distance(a.back().rho, b.back().rho));
    }
    out.push_back(make(S, "shift_vs_direct", worst <= 0.05,
                       {{"seeds", seeds}, {"worst_l1", worst}, {"tol", 0.05}}));
  }

  // (c) ensemble mean of pure noise transport = Gaussian smoothing.
  {
    SolverConfig c;
    c.space = SpaceGrid(-8.0, 8.0, 800);
    c.velocity = VelocityGrid::symmetric(1.2, 32);
    c.flux = linear_flux(0.0);
    c.t_final = 0.5;
    c.dt = 0.01;
    c.record_every = 1000;
    c.record_kinetic = false;
    c.record_defect = false;
    const Profile p = Profile::bump(0.0, 0.5, 0.5);
    const double sigma = 1.0;
    const int paths = 1000;
    const EnsembleStats st = ensemble(c, p.on(c.space), noise(TimeFunction::constant(sigma)), paths, 1, n_threads);
    const double sd = sigma * std::sqrt(c.t_final);
    double err = 0.0;
    for (int i = 0; i < c.space.size(); ++i) {
      const double lo = c.space.edge(i), hi = c.space.edge(i + 1);
      auto f = [&](double m) {
        return p.average(lo - m, hi - m) * std::exp(-m * m / (2.0 * sd * sd)) / (sd * std::sqrt(2.0 * std::numbers::pi));
      };
      const double ex = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, -8.0 * sd, 8.0 * sd, 10, 1e-12);
      err += std::abs(st.mean.back()[static_cast<std::size_t>(i)] - ex) * c.space.dx();
    }
    out.push_back(make(S, "ensemble_gaussian_smoothing", err <= 0.05,
                       {{"paths", paths}, {"l1_error", err}, {"tol", 0.05}}));

    // Same statistics for any thread count.
    const EnsembleStats one = ensemble(c, p.on(c.space), noise(TimeFunction::constant(sigma)), 40, 1, 1);
    const EnsembleStats many = ensemble(c, p.on(c.space), noise(TimeFunction::constant(sigma)), 40, 1, 3);
    const bool same = one.mean == many.mean && one.variance == many.variance;
    out.push_back(make(S, "ensemble_thread_invariance", same, {{"paths", 40}}));
  }

  // Same seed, same path.
  {
    const NoiseModel nm = noise(TimeFunction::linear(1.0));
    const ShiftPath a = sample_shift(nm, 42, 0.01, 1.0);
    const ShiftPath b = sample_shift(nm, 42, 0.01, 1.0);
    out.push_back(make(S, "path_reproducibility", a.m == b.m && a.wiener.w == b.wiener.w,
                       {{"steps", static_cast<double>(a.m.size() - 1)}}));
  }
  return out;
}

std::vector<CheckResult> run_suite(const std::string& name, int n_threads) {
  if (name == "contraction") return contraction_suite();
  if (name == "comparison") return comparison_suite();
  if (name == "entropy") return entropy_suite();
  if (name == "decay") return decay_suite(n_threads);
  if (name == "convergence") return convergence_suite();
  if (name == "stochastic-consistency") return stochastic_suite(n_threads);
  if (name == "all") {
    std::vector<CheckResult> all;
    for (const std::string& s : suite_names()) {
      auto part = run_suite(s, n_threads);
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  throw ConfigError("unknown suite '" + name + "'");
}

}  // namespace sbgk
