#include "sbgk/stochastic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <string>
#include <thread>

#include "sbgk/errors.hpp"

namespace sbgk {

WienerPath sample_wiener(std::uint64_t seed, double dt_path, int n_steps) {
  if (!(dt_path > 0.0)) throw ConfigError("dt_path must be positive");
  if (n_steps < 0) throw ConfigError("n_steps must be nonnegative");
  WienerPath p;
  p.seed = seed;
  p.dt_path = dt_path;
  p.increments.resize(static_cast<std::size_t>(n_steps));
  p.w.resize(static_cast<std::size_t>(n_steps) + 1, 0.0);
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(dt_path));
  for (std::size_t k = 0; k < p.increments.size(); ++k) {
    p.increments[k] = normal(gen);
    p.w[k + 1] = p.w[k] + p.increments[k];
  }
  return p;
}

double ShiftPath::at(double t) const {
  if (m.size() < 2) return m.empty() ? 0.0 : m.front();
  const double q = t / dt();
  const double kf = std::floor(q);
  if (kf < 0.0) return m.front();
  const auto k = static_cast<std::size_t>(kf);
  if (k + 1 >= m.size()) return m.back();
  const double a = q - kf;
  return a == 0.0 ? m[k] : (1.0 - a) * m[k] + a * m[k + 1];
}

double ShiftPath::max_abs() const {
  double r = 0.0;
  for (double x : m) r = std::max(r, std::abs(x));
  return r;
}

ShiftPath sample_shift(const NoiseModel& noise, std::uint64_t seed, double dt_path, double t_final) {
  if (!(dt_path > 0.0)) throw ConfigError("dt_path must be positive");
  const double q = t_final / dt_path;
  const long n = std::lround(q);
  if (std::abs(q - static_cast<double>(n)) > 1e-9 * std::max(1.0, q)) {
    throw ConfigError("dt_path must divide t_final");
  }
  ShiftPath s;
  s.wiener = sample_wiener(seed, dt_path, static_cast<int>(n));
  s.m.assign(s.wiener.w.size(), 0.0);
  for (std::size_t k = 0; k < s.wiener.increments.size(); ++k) {
    const double sigma = noise.is_zero ? 0.0 : noise.sigma(static_cast<double>(k) * dt_path);
    s.m[k + 1] = s.m[k] + sigma * s.wiener.increments[k];
  }
  return s;
}

double stratonovich_correction(const NoiseModel& noise, const ShiftPath& path) {
  if (noise.is_zero) return 0.0;
  double c = 0.0;
  const double dt = path.dt();
  for (std::size_t k = 0; k < path.wiener.increments.size(); ++k) {
    const double t = static_cast<double>(k) * dt;
    c += 0.5 * (noise.sigma(t + dt) - noise.sigma(t)) * path.wiener.increments[k];
  }
  return c;
}

std::vector<double> shift_cells(std::span<const double> values, double delta, double dx,
                                Boundary boundary, ShiftMode mode) {
  const int n = static_cast<int>(values.size());
  std::vector<double> out(values.begin(), values.end());
  if (delta == 0.0 || n == 0) return out;
  const double q = delta / dx;
  long s = 0;
  double a = 0.0;
  if (mode == ShiftMode::GridAligned) {
    s = std::lround(q);
  } else {
    const double f = std::floor(q);
    s = static_cast<long>(f);
    a = q - f;
  }
  auto old = [&](long k) {
    if (k >= 0 && k < n) return values[static_cast<std::size_t>(k)];
    if (boundary == Boundary::ZeroInflow) return 0.0;
    return k < 0 ? values.front() : values.back();
  };
  for (long i = 0; i < n; ++i) {
    const double base = old(i - s);
    out[static_cast<std::size_t>(i)] = a == 0.0 ? base : (1.0 - a) * base + a * old(i - s - 1);
  }
  if (boundary == Boundary::ZeroInflow) {
    double lost = 0.0;
    double peak = 0.0;
    for (long k = 0; k < n; ++k) {
      const double v = std::abs(values[static_cast<std::size_t>(k)]);
      peak = std::max(peak, v);
      if (v == 0.0) continue;
      if (k + s < 0 || k + s >= n) lost += (1.0 - a) * v;
      if (a > 0.0 && (k + s + 1 < 0 || k + s + 1 >= n)) lost += a * v;
    }
    if (lost > 1e-10 * std::max(1.0, peak)) {
      throw SupportOverflow("shift by " + std::to_string(delta) + " pushes the support off the grid");
    }
  }
  return out;
}

DensityField shift_density(const DensityField& rho, double delta, Boundary boundary, ShiftMode mode) {
  return DensityField(rho.grid(), shift_cells(rho.values(), delta, rho.grid().dx(), boundary, mode));
}

namespace {

// Shifts each of `cols` columns of an n_rows × cols row-major array in the
// row (x) direction.
std::vector<double> shift_columns(std::span<const double> values, int rows, int cols, double delta,
                                  double dx, Boundary boundary, ShiftMode mode) {
  std::vector<double> out(values.size());
  std::vector<double> column(static_cast<std::size_t>(rows));
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      column[static_cast<std::size_t>(i)] = values[static_cast<std::size_t>(i) * cols + j];
    }
    const auto shifted = shift_cells(column, delta, dx, boundary, mode);
    for (int i = 0; i < rows; ++i) {
      out[static_cast<std::size_t>(i) * cols + j] = shifted[static_cast<std::size_t>(i)];
    }
  }
  return out;
}

}  // namespace

KineticField shift_kinetic(const KineticField& u, double delta, Boundary boundary, ShiftMode mode) {
  if (delta == 0.0) return u;
  return KineticField(u.space(), u.velocity(),
                      shift_columns(u.values(), u.space().size(), u.velocity().size(), delta,
                                    u.space().dx(), boundary, mode));
}

Trajectory shift_trajectory(const Trajectory& det, const ShiftPath& shift, const SolverConfig& c,
                            ShiftMode mode) {
  Trajectory out;
  out.dt = det.dt;
  for (const Snapshot& s : det.snapshots) {
    const double delta = shift.at(s.t);
    Snapshot p;
    p.t = s.t;
    p.rho = shift_density(s.rho, delta, c.boundary, mode);
    if (s.u) p.u = shift_kinetic(*s.u, delta, c.boundary, mode);
    if (s.m) {
      // The defect measure is carried along with the field (pullback by the
      // translation), not recomputed from the shifted density.
      const DefectField& m = *s.m;
      const int cols = m.velocity().size() + 1;
      p.m = DefectField(m.space(), m.velocity(), m.eps(),
                        delta == 0.0 ? std::vector<double>(m.values().begin(), m.values().end())
                                     : shift_columns(m.values(), m.space().size(), cols, delta,
                                                     m.space().dx(), c.boundary, mode));
    }
    out.push(std::move(p));
  }
  return out;
}

Trajectory solve_pathwise_shift(const SolverConfig& c, const DensityField& rho0, const ShiftPath& shift,
                                ShiftMode mode) {
  return shift_trajectory(run(c, rho0), shift, c, mode);
}

Trajectory solve_pathwise_direct(const SolverConfig& c, const DensityField& rho0, const ShiftPath& shift) {
  const TimeStep ts = select_time_step(c);
  if (ts.n_steps > 0) {
    if (std::abs(shift.dt() - ts.dt) > 1e-12 * ts.dt) {
      throw ConfigError("shift path dt " + std::to_string(shift.dt()) + " differs from solver dt " +
                        std::to_string(ts.dt));
    }
    if (shift.m.size() < static_cast<std::size_t>(ts.n_steps) + 1) {
      throw ConfigError("shift path shorter than the solve");
    }
  }
  // Step k only reads M up to t_{k+1}.
  StepHook hook = [&](KineticField u, int k, double, double) {
    const double dm = shift.m[static_cast<std::size_t>(k) + 1] - shift.m[static_cast<std::size_t>(k)];
    return shift_kinetic(u, dm, c.boundary);
  };
  return run(c, rho0, hook);
}

namespace {

struct ChunkStats {
  int count = 0;
  std::vector<std::vector<double>> mean, m2;
  std::vector<double> sum_l1, sum_linf;
};

void combine(ChunkStats& acc, const ChunkStats& b) {
  if (b.count == 0) return;
  if (acc.count == 0) {
    acc = b;
    return;
  }
  const double na = acc.count, nb = b.count, n = na + nb;
  for (std::size_t s = 0; s < acc.mean.size(); ++s) {
    for (std::size_t i = 0; i < acc.mean[s].size(); ++i) {
      const double d = b.mean[s][i] - acc.mean[s][i];
      acc.mean[s][i] += d * nb / n;
      acc.m2[s][i] += b.m2[s][i] + d * d * na * nb / n;
    }
    acc.sum_l1[s] += b.sum_l1[s];
    acc.sum_linf[s] += b.sum_linf[s];
  }
  acc.count += b.count;
}

double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  if (n < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

EnsembleStats ensemble(const SolverConfig& config, const DensityField& rho0, const NoiseModel& noise,
                       int n_paths, std::uint64_t base_seed, int n_threads, ShiftMode mode) {
  if (n_paths < 1) throw ConfigError("n_paths must be at least 1");
  SolverConfig c = config;
  c.record_kinetic = false;
  c.record_defect = false;
  const TimeStep ts = select_time_step(c);
  const Trajectory det = run(c, rho0);
  const std::size_t n_snap = det.size();
  const auto nx = static_cast<std::size_t>(c.space.size());
  const double dt_path = ts.n_steps > 0 ? ts.dt : std::max(c.t_final, 1.0);

  constexpr int kChunk = 16;
  const int n_chunks = (n_paths + kChunk - 1) / kChunk;
  std::vector<ChunkStats> chunks(static_cast<std::size_t>(n_chunks));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};

  auto worker = [&]() {
    for (int ch = next++; ch < n_chunks && !failed; ch = next++) {
      try {
        ChunkStats st;
        st.mean.assign(n_snap, std::vector<double>(nx, 0.0));
        st.m2.assign(n_snap, std::vector<double>(nx, 0.0));
        st.sum_l1.assign(n_snap, 0.0);
        st.sum_linf.assign(n_snap, 0.0);
        const int first = ch * kChunk;
        const int last = std::min(n_paths, first + kChunk);
        for (int k = first; k < last; ++k) {
          const ShiftPath path = sample_shift(noise, base_seed + static_cast<std::uint64_t>(k), dt_path,
                                              ts.n_steps > 0 ? c.t_final : 0.0);
          ++st.count;
          for (std::size_t s = 0; s < n_snap; ++s) {
            const DensityField r =
                shift_density(det.snapshots[s].rho, path.at(det.snapshots[s].t), c.boundary, mode);
            for (std::size_t i = 0; i < nx; ++i) {
              const double d = r[static_cast<int>(i)] - st.mean[s][i];
              st.mean[s][i] += d / st.count;
              st.m2[s][i] += d * (r[static_cast<int>(i)] - st.mean[s][i]);
            }
            st.sum_l1[s] += r.l1();
            st.sum_linf[s] += r.linf();
          }
        }
        chunks[static_cast<std::size_t>(ch)] = std::move(st);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };

  int threads = n_threads > 0 ? n_threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, n_chunks);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  ChunkStats total;
  for (const ChunkStats& ch : chunks) combine(total, ch);

  EnsembleStats out;
  out.n_paths = n_paths;
  out.grid = c.space;
  out.times = det.times;
  out.mean = total.mean;
  out.variance = total.m2;
  for (auto& row : out.variance) {
    for (double& v : row) v = n_paths > 1 ? std::max(0.0, v / (n_paths - 1)) : 0.0;
  }
  for (std::size_t s = 0; s < n_snap; ++s) {
    out.mean_l1.push_back(total.sum_l1[s] / n_paths);
    out.mean_linf.push_back(total.sum_linf[s] / n_paths);
  }
  std::vector<double> t, logt, logn;
  for (std::size_t s = 0; s < n_snap; ++s) {
    if (out.times[s] > 0.0 && out.mean_l1[s] > 0.0) {
      t.push_back(out.times[s]);
      logt.push_back(std::log(out.times[s]));
      logn.push_back(std::log(out.mean_l1[s]));
    }
  }
  out.decay_rate_l1 = slope(t, logn);
  out.decay_power_l1 = slope(logt, logn);
  return out;
}

}  // namespace sbgk
