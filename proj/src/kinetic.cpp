#include "sbgk/kinetic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sbgk/errors.hpp"

namespace sbgk {

VelocityGrid::VelocityGrid(double v_min, double v_max, int n_cells)
    : v_min_(v_min), v_max_(v_max), n_(n_cells) {
  if (!(v_min < 0.0 && 0.0 < v_max)) {
    throw ConfigError("velocity grid must straddle 0 (v_min < 0 < v_max)");
  }
  if (n_cells <= 0) throw ConfigError("velocity grid needs a positive cell count");
  dv_ = (v_max - v_min) / n_cells;
  const double k0 = -v_min / dv_;
  zero_edge_ = static_cast<int>(std::lround(k0));
  if (std::abs(k0 - zero_edge_) > 1e-9 || zero_edge_ <= 0 || zero_edge_ >= n_cells) {
    throw ConfigError("velocity grid must have v = 0 on a cell edge");
  }
}

VelocityGrid VelocityGrid::symmetric(double v_max, int n_cells) {
  if (n_cells <= 0 || n_cells % 2 != 0) {
    throw ConfigError("symmetric velocity grid needs an even positive cell count");
  }
  return VelocityGrid(-v_max, v_max, n_cells);
}

VelocityGrid VelocityGrid::for_support(double k, double growth, int n_cells) {
  if (n_cells <= 4) throw ConfigError("velocity grid needs more than 4 cells");
  // v_max = K·G + 2Δv with Δv = 2 v_max / n.
  const double kg = std::max(k * growth, 1e-3);
  return symmetric(kg / (1.0 - 4.0 / n_cells), n_cells);
}

SpaceGrid::SpaceGrid(double x_min, double x_max, int n_cells)
    : x_min_(x_min), x_max_(x_max), n_(n_cells) {
  if (!(x_max > x_min)) throw ConfigError("space grid needs x_max > x_min");
  if (n_cells <= 0) throw ConfigError("space grid needs a positive cell count");
  dx_ = (x_max - x_min) / n_cells;
}

DensityField::DensityField(SpaceGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid_.size()) {
    throw ConfigError("density size " + std::to_string(values_.size()) +
                      " does not match grid size " + std::to_string(grid_.size()));
  }
}

double DensityField::mass() const {
  double s = 0.0;
  for (double r : values_) s += r;
  return s * grid_.dx();
}

double DensityField::l1() const {
  double s = 0.0;
  for (double r : values_) s += std::abs(r);
  return s * grid_.dx();
}

double DensityField::linf() const {
  double m = 0.0;
  for (double r : values_) m = std::max(m, std::abs(r));
  return m;
}

double DensityField::lp(double p) const {
  if (std::isinf(p)) return linf();
  double s = 0.0;
  for (double r : values_) s += std::pow(std::abs(r), p);
  return std::pow(s * grid_.dx(), 1.0 / p);
}

KineticField::KineticField(SpaceGrid xgrid, VelocityGrid vgrid, std::vector<double> values)
    : xgrid_(xgrid), vgrid_(vgrid), values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(xgrid_.size()) * vgrid_.size()) {
    throw ConfigError("kinetic field size does not match its grids");
  }
}

std::span<const double> KineticField::row(int i) const {
  const auto nv = static_cast<std::size_t>(vgrid_.size());
  return std::span<const double>(values_).subspan(static_cast<std::size_t>(i) * nv, nv);
}

double KineticField::l1() const {
  double s = 0.0;
  for (double u : values_) s += std::abs(u);
  return s * xgrid_.dx() * vgrid_.dv();
}

double KineticField::linf() const {
  double m = 0.0;
  for (double u : values_) m = std::max(m, std::abs(u));
  return m;
}

DefectField::DefectField(SpaceGrid xgrid, VelocityGrid vgrid, double eps,
                         std::vector<double> values)
    : xgrid_(xgrid), vgrid_(vgrid), eps_(eps), values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(xgrid_.size()) * (vgrid_.size() + 1)) {
    throw ConfigError("defect field size does not match its grids");
  }
}

double DefectField::min_value() const {
  return values_.empty() ? 0.0 : *std::min_element(values_.begin(), values_.end());
}

double DefectField::max_total_abs() const {
  double m = 0.0;
  for (int i = 0; i < xgrid_.size(); ++i) m = std::max(m, std::abs((*this)(i, vgrid_.size())));
  return m;
}

double DefectField::integral() const {
  const int nv = vgrid_.size();
  double s = 0.0;
  for (int i = 0; i < xgrid_.size(); ++i) {
    double row = 0.5 * ((*this)(i, 0) + (*this)(i, nv));
    for (int j = 1; j < nv; ++j) row += (*this)(i, j);
    s += row;
  }
  return s * xgrid_.dx() * vgrid_.dv();
}

int chi(double rho, double v) {
  if (0.0 < v && v < rho) return 1;
  if (rho < v && v < 0.0) return -1;
  return 0;
}

double chi_cell_average(double rho, double v_lo, double v_hi) {
  if (rho == 0.0) return 0.0;
  const double a = std::min(0.0, rho);
  const double b = std::max(0.0, rho);
  const double overlap = std::min(b, v_hi) - std::max(a, v_lo);
  if (overlap <= 0.0) return 0.0;
  const double frac = overlap / (v_hi - v_lo);
  return rho > 0.0 ? frac : -frac;
}

namespace {

void check_fits(double rho, const VelocityGrid& vg) {
  if (rho > vg.v_max() || rho < vg.v_min()) {
    throw SupportOverflow("density " + std::to_string(rho) + " outside velocity grid [" +
                          std::to_string(vg.v_min()) + ", " + std::to_string(vg.v_max()) + "]");
  }
}

// Writes χ̄_ρ for one x into `out` (size n_v), touching only cells of the
// support.
void project_row(double rho, const VelocityGrid& vg, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  if (rho == 0.0) return;
  const int z = vg.zero_edge();
  if (rho > 0.0) {
    for (int j = z; j < vg.size() && vg.edge(j) < rho; ++j) {
      out[static_cast<std::size_t>(j)] = chi_cell_average(rho, vg.edge(j), vg.edge(j + 1));
    }
  } else {
    for (int j = z - 1; j >= 0 && vg.edge(j + 1) > rho; --j) {
      out[static_cast<std::size_t>(j)] = chi_cell_average(rho, vg.edge(j), vg.edge(j + 1));
    }
  }
}

}  // namespace

KineticField project_density(const DensityField& rho, const VelocityGrid& vgrid) {
  const auto nv = static_cast<std::size_t>(vgrid.size());
  std::vector<double> u(static_cast<std::size_t>(rho.size()) * nv);
  for (int i = 0; i < rho.size(); ++i) {
    check_fits(rho[i], vgrid);
    project_row(rho[i], vgrid, std::span<double>(u).subspan(static_cast<std::size_t>(i) * nv, nv));
  }
  return KineticField(rho.grid(), vgrid, std::move(u));
}

DensityField reconstruct_density(const KineticField& u) {
  std::vector<double> rho(static_cast<std::size_t>(u.space().size()));
  const double dv = u.velocity().dv();
  for (int i = 0; i < u.space().size(); ++i) {
    double s = 0.0;
    for (double x : u.row(i)) s += x;
    rho[static_cast<std::size_t>(i)] = dv * s;
  }
  return DensityField(u.space(), std::move(rho));
}

double chi_positive_distance(double a, double b, const VelocityGrid& vgrid) {
  check_fits(a, vgrid);
  check_fits(b, vgrid);
  double s = 0.0;
  for (int j = 0; j < vgrid.size(); ++j) {
    const double lo = vgrid.edge(j);
    const double hi = vgrid.edge(j + 1);
    s += std::max(0.0, chi_cell_average(a, lo, hi) - chi_cell_average(b, lo, hi));
  }
  return s * vgrid.dv();
}

DefectField defect_measure(const KineticField& u, double eps, double tol) {
  if (!(eps > 0.0)) throw ConfigError("eps must be positive");
  const VelocityGrid& vg = u.velocity();
  const int nv = vg.size();
  const DensityField rho = reconstruct_density(u);
  const double scale = vg.dv() / eps;
  std::vector<double> m(static_cast<std::size_t>(u.space().size()) * (nv + 1));
  std::vector<double> eq(static_cast<std::size_t>(nv));
  for (int i = 0; i < u.space().size(); ++i) {
    // ρ may sit a hair beyond v_max through round-off; χ̄ is still exact.
    project_row(rho[i], vg, eq);
    const auto urow = u.row(i);
    double* mrow = m.data() + static_cast<std::size_t>(i) * (nv + 1);
    double acc = 0.0;
    double peak = 0.0;
    mrow[0] = 0.0;
    for (int j = 0; j < nv; ++j) {
      acc += eq[static_cast<std::size_t>(j)] - urow[static_cast<std::size_t>(j)];
      mrow[j + 1] = scale * acc;
      peak = std::max(peak, std::abs(mrow[j + 1]));
    }
    const double floor = -tol * std::max(1.0, peak);
    for (int j = 0; j <= nv; ++j) {
      if (mrow[j] < floor) {
        throw NegativeDefect("m = " + std::to_string(mrow[j]) + " at x index " +
                             std::to_string(i) + ", edge " + std::to_string(j));
      }
    }
  }
  return DefectField(u.space(), vg, eps, std::move(m));
}

double positive_part_distance(const KineticField& u, const KineticField& w) {
  double s = 0.0;
  auto a = u.values();
  auto b = w.values();
  for (std::size_t k = 0; k < a.size(); ++k) s += std::max(0.0, a[k] - b[k]);
  return s * u.space().dx() * u.velocity().dv();
}

double kinetic_l1_distance(const KineticField& u, const KineticField& w) {
  double s = 0.0;
  auto a = u.values();
  auto b = w.values();
  for (std::size_t k = 0; k < a.size(); ++k) s += std::abs(a[k] - b[k]);
  return s * u.space().dx() * u.velocity().dv();
}

double l1_distance(const DensityField& rho, const DensityField& sigma) {
  double s = 0.0;
  for (int i = 0; i < rho.size(); ++i) s += std::abs(rho[i] - sigma[i]);
  return s * rho.grid().dx();
}

}  // namespace sbgk
