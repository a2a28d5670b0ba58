#pragma once

#include "rotnls/error.hpp"
#include "rotnls/grid.hpp"

#include <Eigen/Core>

#include <complex>
#include <utility>
#include <vector>

namespace rotnls {

using Complex = std::complex<double>;

/// Samples of a scalar function on a Grid.
template <typename Scalar>
class Field {
 public:
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  Field() = default;
  explicit Field(Grid grid) : grid_(std::move(grid)), values_(Array::Zero(grid_.size())) {}
  Field(Grid grid, Array values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
      throw Error(ErrorCode::size_mismatch, "field length does not match grid size");
    }
  }

  const Grid& grid() const { return grid_; }
  const Array& values() const { return values_; }
  Array& values() { return values_; }
  Index size() const { return values_.size(); }

  Scalar operator[](Index i) const { return values_[i]; }
  Scalar& operator[](Index i) { return values_[i]; }

 private:
  Grid grid_;
  Array values_;
};

using ComplexField = Field<Complex>;
using RealField = Field<double>;

/// One field per spatial axis (gradient, current density).
template <typename Scalar>
struct VectorField {
  Grid grid;
  std::vector<typename Field<Scalar>::Array> components;

  int dim() const { return static_cast<int>(components.size()); }
  const typename Field<Scalar>::Array& operator[](int j) const { return components[j]; }
};

/// Evaluate `f(Point)` at every grid point.
template <typename Scalar = Complex, typename Fn>
Field<Scalar> sample(const Grid& grid, Fn&& f) {
  typename Field<Scalar>::Array values(grid.size());
  for (Index i = 0; i < grid.size(); ++i) values[i] = static_cast<Scalar>(f(grid.point(i)));
  return Field<Scalar>(grid, std::move(values));
}

/// Trapezoidal (periodic) rule: sum of samples times cell volume.
template <typename Derived>
auto integrate(const Grid& grid, const Eigen::ArrayBase<Derived>& integrand) {
  return integrand.sum() * grid.cell_volume();
}

/// Continuous-norm l2 distance sqrt(sum |a-b|^2 dV).
double l2_distance(const ComplexField& a, const ComplexField& b);
/// sqrt(sum |a|^2 dV).
double l2_norm(const ComplexField& a);
/// sum |a|^2 dV.
double mass(const ComplexField& a);

bool all_finite(const ComplexField& a);

}  // namespace rotnls
