// Acceptance run: one PASS/FAIL line per criterion, with the measured
// numbers and the wall time spent on it. Exit status 0 iff every line passes.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "sbgk/batteries.hpp"
#include "sbgk/experiment.hpp"

using namespace sbgk;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Timed {
  std::vector<CheckResult> checks;
  double seconds = 0.0;
};

Timed timed(const std::function<std::vector<CheckResult>()>& f) {
  const auto t0 = Clock::now();
  Timed r{f(), 0.0};
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return r;
}

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

// Checks whose name starts with any of the prefixes.
std::vector<const CheckResult*> select(const std::vector<CheckResult>& all, const std::vector<std::string>& prefixes) {
  std::vector<const CheckResult*> out;
  for (const CheckResult& c : all) {
    for (const std::string& p : prefixes) {
      if (starts_with(c.name, p)) {
        out.push_back(&c);
        break;
      }
    }
  }
  return out;
}

const CheckResult& find(const std::vector<CheckResult>& all, const std::string& name) {
  for (const CheckResult& c : all)
    if (c.name == name) return c;
  throw std::runtime_error("missing check " + name);
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

int failures = 0;

void report(int id, const std::string& title, bool pass, double seconds, double budget, const std::string& detail) {
  const bool in_budget = budget <= 0.0 || seconds < budget;
  const bool ok = pass && in_budget;
  if (!ok) ++failures;
  std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << id << ": " << title << "  [" << detail << "; "
            << num(seconds) << " s";
  if (budget > 0.0) std::cout << " < " << num(budget) << " s";
  if (!in_budget) std::cout << " OVER BUDGET";
  std::cout << "]\n";
}

bool every(const std::vector<const CheckResult*>& cs) {
  if (cs.empty()) return false;
  for (const CheckResult* c : cs)
    if (!c->pass) return false;
  return true;
}

std::map<std::string, std::string> read_tree(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    files[fs::relative(e.path(), dir).string()] = s.str();
  }
  return files;
}

}  // namespace

int main() {
  const Timed contraction = timed([] { return contraction_suite(); });
  const Timed comparison = timed([] { return comparison_suite(); });
  const Timed entropy = timed([] { return entropy_suite(); });
  const Timed decay = timed([] { return decay_suite(); });
  const Timed convergence = timed([] { return convergence_suite(); });
  const Timed stochastic = timed([] { return stochastic_suite(); });

  {
    const CheckResult& c = find(contraction.checks, "chi_identities");
    report(1, "chi identities", c.pass, contraction.seconds, 1.0,
           "samples " + num(c.metric("samples")) + ", round trip " + num(c.metric("max_reconstruction_error")) +
               ", positive part " + num(c.metric("max_distance_error")));
  }
  {
    const auto cs = select(convergence.checks, {"refinement:burgers_shock", "error_bound:burgers_shock"});
    const CheckResult& r = find(convergence.checks, "refinement:burgers_shock");
    const CheckResult& e = find(convergence.checks, "error_bound:burgers_shock");
    report(2, "BGK to entropy solution, Burgers shock", every(cs), convergence.seconds, 60.0,
           "L1 error " + num(e.metric("error")) + " <= 0.05; refinement " + num(r.metric("error_nx200_eps0.004")) +
               " > " + num(r.metric("error_nx400_eps0.002")) + " > " + num(r.metric("error_nx800_eps0.001")));
  }
  {
    const auto cs = select(comparison.checks, {"ordering:"});
    double worst = 0.0;
    for (const CheckResult* c : cs) worst = std::max(worst, c->metric("max_violation"));
    report(3, "comparison principle", every(cs) && cs.size() == 20, comparison.seconds, 60.0,
           num(static_cast<double>(cs.size())) + " pairs, worst violation " + num(worst) + " <= 1e-12");
  }
  {
    const auto cs = select(contraction.checks, {"l1_contraction:", "kinetic_contraction:"});
    const CheckResult& u = find(contraction.checks, "l1_contraction:burgers_unforced");
    const CheckResult& g = find(contraction.checks, "l1_contraction:burgers_linear_growth");
    report(4, "L1 contraction", every(cs), contraction.seconds, 30.0,
           "A=0 ratio " + num(u.metric("measured_ratio")) + " <= 1+1e-10; xi=1 ratio at t=1 " +
               num(g.metric("final_ratio")) + " <= e");
  }
  {
    const auto cs = select(contraction.checks, {"linf_bound:", "sign_preservation:"});
    double min_rho = 1e300;
    for (const CheckResult* c : cs)
      if (starts_with(c->name, "sign")) min_rho = std::min(min_rho, c->metric("min_rho"));
    report(5, "L-infinity bound and sign preservation", every(cs), contraction.seconds, 20.0,
           num(static_cast<double>(cs.size())) + " checks, min rho for rho0 >= 0: " + num(min_rho));
  }
  {
    std::vector<const CheckResult*> cs;
    for (const Timed* t : {&contraction, &comparison, &decay, &convergence}) {
      const auto part = select(t->checks, {"defect"});
      cs.insert(cs.end(), part.begin(), part.end());
    }
    double min_m = 0.0, max_total = 0.0;
    for (const CheckResult* c : cs) {
      min_m = std::min(min_m, c->metric("min_value"));
      max_total = std::max(max_total, c->metric("max_total"));
    }
    report(6, "defect measure", every(cs), 0.0, 0.0,
           num(static_cast<double>(cs.size())) + " trajectories, min m " + num(min_m) + ", max |total| " +
               num(max_total));
  }
  {
    const CheckResult& c = find(convergence.checks, "picard_contraction");
    const CheckResult& s = find(convergence.checks, "picard_vs_splitting");
    report(7, "Picard map", c.pass && s.pass, convergence.seconds, 120.0,
           "factor " + num(c.metric("worst_factor")) + " <= " + num(c.metric("bound")) + "; 10 iterates vs splitting " +
               num(s.metric("l1_distance")) + " <= " + num(s.metric("tol")));
  }
  {
    const CheckResult& a = find(stochastic.checks, "pure_transport_shift");
    const CheckResult& b = find(stochastic.checks, "shift_vs_direct");
    const CheckResult& c = find(stochastic.checks, "ensemble_gaussian_smoothing");
    report(8, "stochastic consistency", every(select(stochastic.checks, {""})), stochastic.seconds, 300.0,
           "(a) " + num(a.metric("l1_error")) + " <= " + num(a.metric("tol")) + "; (b) " + num(b.metric("worst_l1")) +
               " <= 0.05 over " + num(b.metric("seeds")) + " seeds; (c) " + num(c.metric("l1_error")) + " <= 0.05");
  }
  {
    const auto cs = select(decay.checks, {"envelope", "power_law"});
    const CheckResult& s = find(decay.checks, "power_law_slope:inverse_time");
    report(9, "decay", every(cs), decay.seconds, 30.0,
           "envelopes within 1e-6; slope " + num(s.metric("slope_l1")) + " in [-2.2, -1.8]");
  }
  {
    const auto cs = select(entropy.checks, {""});
    double worst = 0.0;
    for (const CheckResult* c : select(entropy.checks, {"residuals:"})) worst = std::min(worst, c->metric("min_residual"));
    const CheckResult& x = find(entropy.checks, "expansion_shock_flagged");
    report(10, "entropy residuals", every(cs), entropy.seconds, 60.0,
           "worst BGK residual " + num(worst) + " >= -" + num(x.metric("tol_entropy")) + "; expansion shock " +
               num(x.metric("min_residual")));
  }
  {
    const auto t0 = Clock::now();
    const fs::path root = fs::temp_directory_path() / ("sbgk_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    bool same = true;
    std::size_t n_files = 0;
    std::ostringstream log, err;
    const fs::path config_dir = SBGK_CONFIG_DIR;
    for (const char* name : {"buckley_leverett_demo.json", "decay_ensemble.json", "burgers_riemann.json"}) {
      const ExperimentConfig cfg = load_config(config_dir / name);
      for (const char* run : {"a", "b"}) run_experiment(cfg, root / run / name, log, err);
    }
    for (const char* run : {"a", "b"}) run_verify("stochastic-consistency", root / run / "verify", log, err, run[0] == 'a' ? 1 : 3);
    const auto a = read_tree(root / "a");
    const auto b = read_tree(root / "b");
    same = !a.empty() && a == b;
    n_files = a.size();
    fs::remove_all(root);
    const double s = std::chrono::duration<double>(Clock::now() - t0).count();
    report(11, "reproducibility", same, s, 0.0, num(static_cast<double>(n_files)) + " artifacts byte-identical across reruns");
  }

  std::cout << (failures == 0 ? "ALL CRITERIA PASS" : std::to_string(failures) + " CRITERIA FAILED") << '\n';
  return failures == 0 ? 0 : 1;
}
