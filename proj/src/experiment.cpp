#include "sbgk/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "sbgk/errors.hpp"
#include "sbgk/verify.hpp"

namespace sbgk {

using json = nlohmann::json;

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json number(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

double get_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("field '" + key + "' must be a number");
  return v.get<double>();
}

int get_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError("field '" + key + "' must be an integer");
  return v.get<int>();
}

std::string get_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError("field '" + key + "' must be a string");
  return v.get<std::string>();
}

json parse_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception&) {
    return text;
  }
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "' must have the form key=value");
  }
  const std::string key = assignment.substr(0, eq);
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("override key '" + key + "' has an empty component");
    if (!node->is_object()) throw ConfigError("override key '" + key + "' does not name an object field");
    if (dot == std::string::npos) {
      (*node)[part] = parse_value(assignment.substr(eq + 1));
      break;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["flux"] = c.flux;
  j["forcing"] = c.forcing;
  j["noise"] = c.noise;
  j["x_min"] = c.x_min;
  j["x_max"] = c.x_max;
  j["nx"] = c.nx;
  j["nv"] = c.nv;
  j["v_max"] = c.v_max;
  j["eps"] = c.eps;
  j["t_final"] = c.t_final;
  j["dt"] = c.dt;
  j["cfl"] = c.cfl;
  j["record_every"] = c.record_every;
  j["boundary"] = c.boundary;
  j["splitting"] = c.splitting;
  j["initial"] = json::parse(c.initial);
  j["seed"] = c.seed;
  j["n_paths"] = c.n_paths;
  j["shift_mode"] = c.shift_mode;
  j["threads"] = c.threads;
  j["checks"] = c.checks;
  j["bounds"] = json::array({number(c.bound_lo), number(c.bound_hi)});
  j["entropy_tol"] = c.entropy_tol;
  j["out"] = c.out;
  return j;
}

void check_choice(const std::string& key, const std::string& value, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (value == a) return;
  }
  std::string msg = "field '" + key + "' must be one of";
  for (const char* a : allowed) msg += std::string(" ") + a;
  throw ConfigError(msg + " (got '" + value + "')");
}

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> k = {"defect", "mass", "linf_bound", "sign", "bounds", "decay", "entropy"};
  return k;
}

ExperimentConfig from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  for (const auto& [key, v] : j.items()) {
    if (key == "flux") c.flux = get_string(v, key);
    else if (key == "forcing") c.forcing = get_string(v, key);
    else if (key == "noise") c.noise = get_string(v, key);
    else if (key == "x_min") c.x_min = get_number(v, key);
    else if (key == "x_max") c.x_max = get_number(v, key);
    else if (key == "nx") c.nx = get_int(v, key);
    else if (key == "nv") c.nv = get_int(v, key);
    else if (key == "v_max") c.v_max = get_number(v, key);
    else if (key == "eps") c.eps = get_number(v, key);
    else if (key == "t_final") c.t_final = get_number(v, key);
    else if (key == "dt") c.dt = get_number(v, key);
    else if (key == "cfl") c.cfl = get_number(v, key);
    else if (key == "record_every") c.record_every = get_int(v, key);
    else if (key == "boundary") c.boundary = get_string(v, key);
    else if (key == "splitting") c.splitting = get_string(v, key);
    else if (key == "initial") {
      if (!v.is_object()) throw ConfigError("field 'initial' must be an object");
      c.initial = v.dump();
    } else if (key == "seed") {
      if (!v.is_number_unsigned()) throw ConfigError("field 'seed' must be a nonnegative integer");
      c.seed = v.get<std::uint64_t>();
    } else if (key == "n_paths") c.n_paths = get_int(v, key);
    else if (key == "shift_mode") c.shift_mode = get_string(v, key);
    else if (key == "threads") c.threads = get_int(v, key);
    else if (key == "checks") {
      if (!v.is_array()) throw ConfigError("field 'checks' must be an array of names");
      c.checks.clear();
      for (const json& e : v) c.checks.push_back(get_string(e, "checks"));
    } else if (key == "bounds") {
      if (!v.is_array() || v.size() != 2) throw ConfigError("field 'bounds' must be [lo, hi]");
      c.bound_lo = get_number(v[0], "bounds");
      c.bound_hi = get_number(v[1], "bounds");
    } else if (key == "entropy_tol") c.entropy_tol = get_number(v, key);
    else if (key == "out") c.out = get_string(v, key);
    else throw ConfigError("unknown config field '" + key + "'");
  }

  if (!(c.eps > 0.0)) throw ConfigError("field 'eps' must be positive (got " + format_number(c.eps) + ")");
  if (!(c.x_max > c.x_min)) throw ConfigError("fields 'x_min' < 'x_max' required");
  if (c.nx < 1) throw ConfigError("field 'nx' must be positive");
  if (c.nv < 6 || c.nv % 2 != 0) throw ConfigError("field 'nv' must be even and at least 6");
  if (!(c.v_max >= 0.0)) throw ConfigError("field 'v_max' must be nonnegative (0 = automatic)");
  if (!(c.t_final >= 0.0)) throw ConfigError("field 't_final' must be nonnegative");
  if (!(c.dt >= 0.0)) throw ConfigError("field 'dt' must be nonnegative (0 = from CFL)");
  if (!(c.cfl > 0.0 && c.cfl <= 1.0)) throw ConfigError("field 'cfl' must lie in (0, 1]");
  if (c.record_every < 1) throw ConfigError("field 'record_every' must be at least 1");
  if (c.n_paths < 0) throw ConfigError("field 'n_paths' must be nonnegative");
  if (c.threads < 0) throw ConfigError("field 'threads' must be nonnegative");
  if (!(c.bound_lo <= c.bound_hi)) throw ConfigError("field 'bounds' needs lo <= hi");
  if (!(c.entropy_tol >= 0.0)) throw ConfigError("field 'entropy_tol' must be nonnegative");
  check_choice("boundary", c.boundary, {"zero_inflow", "extrapolate"});
  check_choice("splitting", c.splitting, {"lie", "strang"});
  check_choice("shift_mode", c.shift_mode, {"conservative", "grid_aligned"});
  for (const std::string& k : c.checks) {
    if (std::find(known_checks().begin(), known_checks().end(), k) == known_checks().end()) {
      throw ConfigError("field 'checks' names unknown check '" + k + "'");
    }
  }
  // Resolve models now so unknown identifiers fail as config errors.
  flux_from_id(c.flux);
  forcing_from_id(c.forcing);
  noise_from_id(c.noise);
  return c;
}

// Piecewise-linear interpolant of (x, ρ) samples, zero outside the samples.
Profile sampled_profile(std::vector<double> xs, std::vector<double> ys, std::string name) {
  auto prim = [xs, ys](double x) {
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
      const double a = xs[k], b = xs[k + 1];
      if (x <= a) break;
      const double hi = std::min(x, b);
      const double slope = (ys[k + 1] - ys[k]) / (b - a);
      const double y_hi = ys[k] + slope * (hi - a);
      s += 0.5 * (ys[k] + y_hi) * (hi - a);
    }
    return s;
  };
  auto point = [xs, ys](double x) {
    if (x < xs.front() || x > xs.back()) return 0.0;
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    if (it == xs.end()) return ys.back();
    const auto k = static_cast<std::size_t>(it - xs.begin()) - 1;
    return ys[k] + (ys[k + 1] - ys[k]) * (x - xs[k]) / (xs[k + 1] - xs[k]);
  };
  return Profile(
      std::move(name), [prim](double lo, double hi) { return (prim(hi) - prim(lo)) / (hi - lo); }, point);
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path initial_file(const ExperimentConfig& c, const json& init) {
  std::filesystem::path p = get_string(init.value("path", json()), "initial.path");
  if (p.is_relative() && !c.base_dir.empty()) p = c.base_dir / p;
  return p;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("IoError", "cannot write '" + p.string() + "'");
  out << text;
  if (!out) throw Error("IoError", "write failed for '" + p.string() + "'");
}

std::string snapshots_csv(const Trajectory& traj) {
  std::string s = "t,x,rho\n";
  for (const Snapshot& snap : traj.snapshots) {
    const SpaceGrid& g = snap.rho.grid();
    const std::string t = format_number(snap.t);
    for (int i = 0; i < g.size(); ++i) {
      s += t + ',' + format_number(g.center(i)) + ',' + format_number(snap.rho[i]) + '\n';
    }
  }
  return s;
}

std::string norms_csv(const Trajectory& traj) {
  std::string s = "t,mass,l1,linf,total_defect\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    s += format_number(traj.times[k]) + ',' + format_number(traj.mass[k]) + ',' + format_number(traj.l1[k]) + ',' +
         format_number(traj.linf[k]) + ',' + format_number(traj.total_defect[k]) + '\n';
  }
  return s;
}

CheckResult simple(std::string name, bool pass, std::vector<std::pair<std::string, double>> m,
                   std::string detail = {}) {
  return CheckResult{"run", std::move(name), pass, std::move(m), std::move(detail)};
}

CheckResult from_bound(const std::string& name, const BoundReport& b) {
  return simple(name, b.pass,
                {{"claimed_factor", b.claimed_factor},
                 {"measured_ratio", b.measured_ratio},
                 {"slack", b.slack},
                 {"worst_time", b.worst_time}});
}

std::vector<CheckResult> run_checks(const ExperimentConfig& cfg, const SolverConfig& sc, const Trajectory& traj,
                                    bool stochastic) {
  std::vector<CheckResult> out;
  const DensityField& r0 = traj.snapshots.front().rho;
  for (const std::string& name : cfg.checks) {
    if (name == "defect") {
      const DefectReport d = check_defect(traj, 1e-10);
      out.push_back(simple(name, d.pass,
                           {{"min_value", d.min_value},
                            {"max_total", d.max_total},
                            {"snapshots", static_cast<double>(d.snapshots)}}));
    } else if (name == "mass") {
      if (!sc.forcing.is_zero || sc.boundary != Boundary::ZeroInflow) {
        throw ConfigError("check 'mass' needs zero forcing and boundary zero_inflow");
      }
      double worst = 0.0;
      for (double m : traj.mass) worst = std::max(worst, std::abs(m - traj.mass.front()));
      const double tol = 1e-10 * std::max(1.0, std::abs(traj.mass.front()));
      out.push_back(simple(name, worst <= tol, {{"max_drift", worst}, {"tol", tol}}));
    } else if (name == "linf_bound") {
      out.push_back(from_bound(name, check_linf_bound(traj, sc.forcing, sc.velocity.dv())));
    } else if (name == "sign") {
      double m0 = std::numeric_limits<double>::infinity(), m = m0;
      for (double v : r0.values()) m0 = std::min(m0, v);
      for (const Snapshot& s : traj.snapshots) {
        for (double v : s.rho.values()) m = std::min(m, v);
      }
      const bool applies = m0 >= 0.0;
      out.push_back(simple(name, !applies || m >= -1e-12, {{"min_rho0", m0}, {"min_rho", m}, {"tol", 1e-12}},
                           applies ? "" : "initial data takes negative values; nothing to check"));
    } else if (name == "bounds") {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (const Snapshot& s : traj.snapshots) {
        for (double v : s.rho.values()) {
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      }
      out.push_back(simple(name, lo >= cfg.bound_lo - 1e-12 && hi <= cfg.bound_hi + 1e-12,
                           {{"min_rho", lo}, {"max_rho", hi}, {"lo", cfg.bound_lo}, {"hi", cfg.bound_hi}}));
    } else if (name == "decay") {
      if (!sc.forcing.linear_rate) throw ConfigError("check 'decay' needs a linear_decay forcing");
      out.push_back(from_bound(name + "_l1", check_decay(traj, *sc.forcing.linear_rate, 1.0, 1e-6)));
      out.push_back(from_bound(name + "_linf", check_decay(traj, *sc.forcing.linear_rate,
                                                           std::numeric_limits<double>::infinity(), 1e-6)));
    } else if (name == "entropy") {
      if (stochastic) throw ConfigError("check 'entropy' applies to deterministic runs (noise 'none')");
      if (cfg.record_every != 1) throw ConfigError("check 'entropy' needs record_every = 1");
      const double tol = cfg.entropy_tol > 0.0 ? cfg.entropy_tol : entropy_tolerance();
      const EntropyReport e =
          entropy_residual(traj, sc.flux, sc.forcing, default_entropy_constants(r0),
                           default_test_battery(sc.t_final, sc.space.x_min(), sc.space.x_max()), tol);
      out.push_back(simple(name, e.pass, {{"min_residual", e.min_residual}, {"tol_entropy", tol}}));
    }
  }
  return out;
}

std::string checks_json(const std::vector<CheckResult>& checks) {
  json arr = json::array();
  for (const CheckResult& c : checks) arr.push_back(json::parse(check_to_json(c)));
  json j;
  j["schema"] = kSchema;
  j["pass"] = all_pass(checks);
  j["checks"] = arr;
  return j.dump(2) + "\n";
}

std::string file_stem(const CheckResult& c) {
  std::string s = c.suite + "__" + c.name;
  for (char& ch : s) {
    if (ch == ':' || ch == '/' || ch == ' ') ch = '.';
  }
  return s;
}

}  // namespace

std::string check_to_json(const CheckResult& check) {
  json m = json::object();
  for (const auto& [k, v] : check.metrics) m[k] = number(v);
  json j;
  j["schema"] = kSchema;
  j["suite"] = check.suite;
  j["name"] = check.name;
  j["pass"] = check.pass;
  j["metrics"] = m;
  if (!check.detail.empty()) j["detail"] = check.detail;
  return j.dump();
}

std::string ExperimentConfig::canonical() const { return to_json(*this).dump(); }

ExperimentConfig parse_config(std::string_view text, const std::vector<std::string>& overrides,
                              std::optional<std::uint64_t> seed) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const std::string& o : overrides) apply_override(doc, o);
  if (seed) doc["seed"] = *seed;
  return from_json(doc);
}

ExperimentConfig load_config(const std::filesystem::path& file, const std::vector<std::string>& overrides,
                             std::optional<std::uint64_t> seed) {
  ExperimentConfig c = parse_config(read_file(file), overrides, seed);
  c.base_dir = file.parent_path();
  return c;
}

Profile make_profile(const ExperimentConfig& c) {
  const json init = json::parse(c.initial);
  const std::string type = get_string(init.value("type", json()), "initial.type");
  auto num = [&](const char* key) {
    if (!init.contains(key)) throw ConfigError(std::string("field 'initial.") + key + "' is required");
    return get_number(init[key], std::string("initial.") + key);
  };
  auto allow = [&](std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : init.items()) {
      if (k == "type") continue;
      if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; })) {
        throw ConfigError("unknown field 'initial." + k + "' for type '" + type + "'");
      }
    }
  };
  if (type == "riemann") {
    allow({"left", "right", "x0"});
    return Profile::riemann(num("left"), num("right"), init.contains("x0") ? num("x0") : 0.0);
  }
  if (type == "bump") {
    allow({"center", "width", "height"});
    if (!(num("width") > 0.0)) throw ConfigError("field 'initial.width' must be positive");
    return Profile::bump(num("center"), num("width"), num("height"));
  }
  if (type == "box") {
    allow({"lo", "hi", "height"});
    if (!(num("hi") > num("lo"))) throw ConfigError("fields 'initial.lo' < 'initial.hi' required");
    return Profile::box(num("lo"), num("hi"), num("height"));
  }
  if (type == "file") {
    allow({"path"});
    const std::filesystem::path p = initial_file(c, init);
    std::istringstream in(read_file(p));
    std::vector<double> xs, ys;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty() || line[0] == '#') continue;
      double x = 0.0, y = 0.0;
      if (std::sscanf(line.c_str(), "%lf,%lf", &x, &y) != 2) {
        if (xs.empty() && line_no == 1) continue;  // header
        throw ConfigError("initial data file line " + std::to_string(line_no) + " is not 'x,rho'");
      }
      if (!xs.empty() && !(x > xs.back())) throw ConfigError("initial data file x values must increase");
      xs.push_back(x);
      ys.push_back(y);
    }
    if (xs.size() < 2) throw ConfigError("initial data file needs at least two samples");
    return sampled_profile(std::move(xs), std::move(ys), "file:" + p.filename().string());
  }
  throw ConfigError("field 'initial.type' must be one of riemann bump box file (got '" + type + "')");
}

SolverConfig make_solver_config(const ExperimentConfig& c, const DensityField& rho0) {
  SolverConfig s;
  s.space = SpaceGrid(c.x_min, c.x_max, c.nx);
  s.flux = flux_from_id(c.flux);
  s.forcing = forcing_from_id(c.forcing);
  s.velocity = c.v_max > 0.0 ? VelocityGrid::symmetric(c.v_max, c.nv)
                             : VelocityGrid::for_support(rho0.linf(), std::exp(s.forcing.growth(0.0, c.t_final)), c.nv);
  s.eps = c.eps;
  s.t_final = c.t_final;
  s.dt = c.dt;
  s.cfl_target = c.cfl;
  s.record_every = c.record_every;
  s.boundary = c.boundary == "extrapolate" ? Boundary::Extrapolate : Boundary::ZeroInflow;
  s.splitting = c.splitting == "strang" ? Splitting::Strang : Splitting::Lie;
  s.record_kinetic = false;
  s.record_defect = true;
  validate(s);
  return s;
}

int run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log,
                   std::ostream& err) {
  try {
    const Profile profile = make_profile(cfg);
    const SpaceGrid grid(cfg.x_min, cfg.x_max, cfg.nx);
    const DensityField rho0 = profile.on(grid);
    const SolverConfig sc = make_solver_config(cfg, rho0);
    const NoiseModel nm = noise_from_id(cfg.noise);
    const ShiftMode mode = cfg.shift_mode == "grid_aligned" ? ShiftMode::GridAligned : ShiftMode::Conservative;
    const bool stochastic = !nm.is_zero && cfg.n_paths > 0;

    std::filesystem::create_directories(out_dir);
    std::vector<std::string> artifacts;
    auto emit = [&](const std::string& name, const std::string& text) {
      write_file(out_dir / name, text);
      artifacts.push_back(name);
    };

    Trajectory traj;
    if (stochastic && cfg.n_paths == 1) {
      const TimeStep ts = select_time_step(sc);
      const ShiftPath sh = sample_shift(nm, cfg.seed, ts.dt, sc.t_final);
      traj = solve_pathwise_shift(sc, rho0, sh, mode);
      std::string p = "t,w,m\n";
      for (std::size_t k = 0; k < sh.m.size(); ++k) {
        const double t = k + 1 == sh.m.size() ? sc.t_final : static_cast<double>(k) * sh.dt();
        p += format_number(t) + ',' + format_number(sh.wiener.w[k]) + ',' + format_number(sh.m[k]) + '\n';
      }
      emit("path.csv", p);
    } else {
      traj = run(sc, rho0);
    }
    emit("snapshots.csv", snapshots_csv(traj));
    emit("norms.csv", norms_csv(traj));

    if (stochastic && cfg.n_paths > 1) {
      const EnsembleStats st = ensemble(sc, rho0, nm, cfg.n_paths, cfg.seed, cfg.threads, mode);
      std::string e = "t,x,mean,variance\n";
      std::string n = "t,mean_l1,mean_linf\n";
      for (std::size_t k = 0; k < st.times.size(); ++k) {
        const std::string t = format_number(st.times[k]);
        for (int i = 0; i < st.grid.size(); ++i) {
          const auto ii = static_cast<std::size_t>(i);
          e += t + ',' + format_number(st.grid.center(i)) + ',' + format_number(st.mean[k][ii]) + ',' +
               format_number(st.variance[k][ii]) + '\n';
        }
        n += t + ',' + format_number(st.mean_l1[k]) + ',' + format_number(st.mean_linf[k]) + '\n';
      }
      emit("ensemble.csv", e);
      emit("ensemble_norms.csv", n);
    }

    const std::vector<CheckResult> checks = run_checks(cfg, sc, traj, stochastic);
    emit("checks.json", checks_json(checks));

    json manifest;
    manifest["schema"] = kSchema;
    manifest["version"] = kVersion;
    manifest["config"] = json::parse(cfg.canonical());
    manifest["config_hash"] = "fnv1a64:" + hex64(fnv1a64(cfg.canonical()));
    manifest["seed"] = cfg.seed;
    manifest["dt"] = traj.dt;
    manifest["velocity_grid"] = {{"v_min", sc.velocity.v_min()}, {"v_max", sc.velocity.v_max()},
                                 {"n_cells", sc.velocity.size()}};
    const json init = json::parse(cfg.initial);
    if (init.value("type", "") == "file") {
      manifest["initial_file_hash"] = "fnv1a64:" + hex64(fnv1a64(read_file(initial_file(cfg, init))));
    }
    std::sort(artifacts.begin(), artifacts.end());
    manifest["artifacts"] = artifacts;
    write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");

    for (const CheckResult& c : checks) log << (c.pass ? "PASS " : "FAIL ") << c.name << '\n';
    log << "wrote " << artifacts.size() + 1 << " artifacts to " << out_dir.string() << '\n';
    return all_pass(checks) ? kExitOk : kExitCheckFailed;
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return kExitConfigError;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kExitRuntimeError;
  } catch (const std::exception& e) {
    err << "InternalError: " << e.what() << '\n';
    return kExitRuntimeError;
  }
}

int run_verify(const std::string& suite, const std::filesystem::path& out_dir, std::ostream& log, std::ostream& err,
               int n_threads) {
  const auto& names = suite_names();
  if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end()) {
    err << "ConfigError: unknown suite '" << suite << "' (expected one of";
    for (const std::string& n : names) err << ' ' << n;
    err << " all)\n";
    return kExitConfigError;
  }
  try {
    const std::vector<CheckResult> checks = run_suite(suite, n_threads);
    std::filesystem::create_directories(out_dir);
    json summary;
    summary["schema"] = kSchema;
    summary["suite"] = suite;
    summary["version"] = kVersion;
    summary["pass"] = all_pass(checks);
    json list = json::array();
    for (const CheckResult& c : checks) {
      const std::string stem = file_stem(c);
      write_file(out_dir / (stem + ".json"), json::parse(check_to_json(c)).dump(2) + "\n");
      list.push_back({{"suite", c.suite}, {"name", c.name}, {"pass", c.pass}, {"report", stem + ".json"}});
      log << (c.pass ? "PASS " : "FAIL ") << c.suite << '/' << c.name << '\n';
    }
    summary["checks"] = list;
    write_file(out_dir / "summary.json", summary.dump(2) + "\n");
    return all_pass(checks) ? kExitOk : kExitCheckFailed;
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return kExitConfigError;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kExitRuntimeError;
  } catch (const std::exception& e) {
    err << "InternalError: " << e.what() << '\n';
    return kExitRuntimeError;
  }
}

}  // namespace sbgk
