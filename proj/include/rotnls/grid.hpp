#pragma once

#include <Eigen/Core>

#include <array>
#include <memory>
#include <vector>

namespace rotnls {

using Index = Eigen::Index;
using Point = Eigen::Vector3d;

/// Periodic box [-L_j, L_j) sampled with n_j points per axis.
///
/// A Grid is a cheap handle: copies share the same immutable layout, so
/// fields can carry their grid by value. Samples are stored row-major with the
/// last axis fastest; axis 0 is x_1. Two-dimensional grids embed their points
/// as (x_1, x_2, 0).
class Grid {
 public:
  Grid() = default;

  int dim() const { return layout_->dim; }
  Index n(int axis) const { return layout_->n[axis]; }
  double halfwidth(int axis) const { return layout_->halfwidth[axis]; }
  double spacing(int axis) const { return layout_->spacing[axis]; }
  Index size() const { return layout_->size; }
  double cell_volume() const { return layout_->cell_volume; }
  /// Distance between successive flat indices along `axis`.
  Index stride(int axis) const { return layout_->stride[axis]; }

  /// DFT wavenumbers k_m = m * pi / L for m = 0..n/2-1, -n/2..-1.
  const Eigen::ArrayXd& wavenumbers(int axis) const { return layout_->k1d[axis]; }
  /// 1D sample positions -L + i*h.
  const Eigen::ArrayXd& axis_coords(int axis) const { return layout_->x1d[axis]; }

  /// Coordinate x_j of every grid point (length size()).
  const Eigen::ArrayXd& coords(int axis) const { return layout_->x[axis]; }
  /// Wavenumber k_j of every spectral mode (length size()).
  const Eigen::ArrayXd& mode_wavenumbers(int axis) const { return layout_->k[axis]; }
  /// |k|^2 of every spectral mode.
  const Eigen::ArrayXd& mode_k2() const { return layout_->k2; }
  /// Largest representable |k_j|, i.e. the Nyquist magnitude n_j*pi/(2 L_j).
  double k_max(int axis) const { return layout_->k1d[axis].abs().maxCoeff(); }

  Point point(Index i) const;

  bool operator==(const Grid& other) const;
  bool operator!=(const Grid& other) const { return !(*this == other); }

 private:
  struct Layout {
    int dim = 0;
    std::array<Index, 3> n{1, 1, 1};
    std::array<double, 3> halfwidth{0, 0, 0};
    std::array<double, 3> spacing{0, 0, 0};
    std::array<Index, 3> stride{1, 1, 1};
    Index size = 0;
    double cell_volume = 0;
    std::array<Eigen::ArrayXd, 3> k1d, x1d;
    std::array<Eigen::ArrayXd, 3> x, k;
    Eigen::ArrayXd k2;
  };

  explicit Grid(std::shared_ptr<const Layout> layout) : layout_(std::move(layout)) {}
  std::shared_ptr<const Layout> layout_;

  friend Grid make_grid(int d, const std::vector<Index>& n, const std::vector<double>& L);
};

/// Throws Error{invalid_dimension | non_power_of_two | non_positive_box}.
Grid make_grid(int d, const std::vector<Index>& n, const std::vector<double>& L);

bool is_power_of_two(Index n);

}  // namespace rotnls
