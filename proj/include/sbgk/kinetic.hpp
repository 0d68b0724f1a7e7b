#pragma once

// Kinetic (χ-function) representation of a scalar density on a tensor
// (x, v) grid: construction, density reconstruction, distances and the
// BGK defect measure.

#include <cstddef>
#include <span>
#include <vector>

namespace sbgk {

/// Uniform velocity grid. v = 0 is always a cell edge, so no cell mixes the
/// positive and negative branches of χ.
class VelocityGrid {
 public:
  VelocityGrid() : VelocityGrid(-1.0, 1.0, 2) {}
  VelocityGrid(double v_min, double v_max, int n_cells);

  /// Symmetric grid [-v_max, v_max]; n_cells must be even.
  static VelocityGrid symmetric(double v_max, int n_cells);

  /// Symmetric grid wide enough for data bounded by `k` growing by at most
  /// `growth` (= exp(∫‖[∂ᵥA]⁺‖), the L∞ growth factor), plus two cells of
  /// padding on each side.
  static VelocityGrid for_support(double k, double growth, int n_cells);

  double v_min() const { return v_min_; }
  double v_max() const { return v_max_; }
  int size() const { return n_; }
  double dv() const { return dv_; }
  int zero_edge() const { return zero_edge_; }
  double edge(int j) const { return (j - zero_edge_) * dv_; }
  double center(int j) const { return (j - zero_edge_ + 0.5) * dv_; }

  bool operator==(const VelocityGrid&) const = default;

 private:
  double v_min_, v_max_;
  int n_;
  double dv_;
  int zero_edge_;
};

class SpaceGrid {
 public:
  SpaceGrid() : SpaceGrid(-1.0, 1.0, 2) {}
  SpaceGrid(double x_min, double x_max, int n_cells);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  int size() const { return n_; }
  double dx() const { return dx_; }
  double edge(int i) const { return x_min_ + i * dx_; }
  double center(int i) const { return x_min_ + (i + 0.5) * dx_; }

  bool operator==(const SpaceGrid&) const = default;

 private:
  double x_min_, x_max_;
  int n_;
  double dx_;
};

/// Cell averages ρ(x_i).
class DensityField {
 public:
  DensityField() = default;
  DensityField(SpaceGrid grid, std::vector<double> values);

  const SpaceGrid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
  int size() const { return grid_.size(); }

  double mass() const;
  double l1() const;
  double linf() const;
  double lp(double p) const;

 private:
  SpaceGrid grid_;
  std::vector<double> values_;
};

/// Cell averages u(x_i, v_j), stored row-major in x.
class KineticField {
 public:
  KineticField() = default;
  KineticField(SpaceGrid xgrid, VelocityGrid vgrid, std::vector<double> values);

  const SpaceGrid& space() const { return xgrid_; }
  const VelocityGrid& velocity() const { return vgrid_; }
  std::span<const double> values() const { return values_; }
  std::span<const double> row(int i) const;
  double operator()(int i, int j) const {
    return values_[static_cast<std::size_t>(i) * static_cast<std::size_t>(vgrid_.size()) +
                   static_cast<std::size_t>(j)];
  }

  /// ∫∫|u| dx dv.
  double l1() const;
  double linf() const;

 private:
  SpaceGrid xgrid_;
  VelocityGrid vgrid_;
  std::vector<double> values_;
};

/// m_ε at velocity edges: values (i, j) for j = 0..n_v, with edge 0 at v_min.
class DefectField {
 public:
  DefectField() = default;
  DefectField(SpaceGrid xgrid, VelocityGrid vgrid, double eps, std::vector<double> values);

  const SpaceGrid& space() const { return xgrid_; }
  const VelocityGrid& velocity() const { return vgrid_; }
  double eps() const { return eps_; }
  std::span<const double> values() const { return values_; }
  double operator()(int i, int j_edge) const {
    return values_[static_cast<std::size_t>(i) * static_cast<std::size_t>(vgrid_.size() + 1) +
                   static_cast<std::size_t>(j_edge)];
  }

  double min_value() const;
  /// max over x of |m(x, v_max)|, i.e. of the per-x total ∫(χ_ρ − u)dv / ε.
  double max_total_abs() const;
  /// ∫∫ m dx dv (trapezoid over edges).
  double integral() const;

 private:
  SpaceGrid xgrid_;
  VelocityGrid vgrid_;
  double eps_ = 1.0;
  std::vector<double> values_;
};

/// χ_ρ(v): 1 on 0 < v < ρ, -1 on ρ < v < 0, 0 otherwise (both endpoints
/// excluded).
int chi(double rho, double v);

/// Exact average of χ_ρ over (v_lo, v_hi).
double chi_cell_average(double rho, double v_lo, double v_hi);

KineticField project_density(const DensityField& rho, const VelocityGrid& vgrid);

DensityField reconstruct_density(const KineticField& u);

/// Δv Σ_j [χ̄_a − χ̄_b]^+ ; equals max(a − b, 0).
double chi_positive_distance(double a, double b, const VelocityGrid& vgrid);

/// Throws NegativeDefect when a value drops below −tol·max(1, row scale).
DefectField defect_measure(const KineticField& u, double eps, double tol = 1e-10);

/// Δx Δv Σ [u − w]^+.
double positive_part_distance(const KineticField& u, const KineticField& w);
/// Δx Δv Σ |u − w|.
double kinetic_l1_distance(const KineticField& u, const KineticField& w);
/// Δx Σ |ρ − σ|.
double l1_distance(const DensityField& rho, const DensityField& sigma);

}  // namespace sbgk
