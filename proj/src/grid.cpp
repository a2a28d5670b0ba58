#include "rotnls/grid.hpp"

#include "rotnls/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace rotnls {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_dimension: return "InvalidDimension";
    case ErrorCode::non_power_of_two: return "NonPowerOfTwo";
    case ErrorCode::non_positive_box: return "NonPositiveBox";
    case ErrorCode::zero_field: return "ZeroField";
    case ErrorCode::rotation_exceeds_trap: return "RotationExceedsTrap";
    case ErrorCode::unresolved_field: return "UnresolvedField";
    case ErrorCode::too_few_samples: return "TooFewSamples";
    case ErrorCode::unsupported_rotation_axis: return "UnsupportedRotationAxis";
    case ErrorCode::non_confining_trap: return "NonConfiningTrap";
    case ErrorCode::no_convergence: return "NoConvergence";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::validation_error: return "ValidationError";
    case ErrorCode::io_error: return "IoError";
    case ErrorCode::bad_magic: return "BadMagic";
    case ErrorCode::version_mismatch: return "VersionMismatch";
    case ErrorCode::size_mismatch: return "SizeMismatch";
    case ErrorCode::unknown_column: return "UnknownColumn";
    case ErrorCode::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

Grid make_grid(int d, const std::vector<Index>& n, const std::vector<double>& L) {
  if (d != 2 && d != 3) {
    throw Error(ErrorCode::invalid_dimension, "dimension must be 2 or 3, got " + std::to_string(d));
  }
  if (n.size() != static_cast<size_t>(d) || L.size() != static_cast<size_t>(d)) {
    throw Error(ErrorCode::invalid_dimension, "expected one size and one half-width per axis");
  }
  auto layout = std::make_shared<Grid::Layout>();
  layout->dim = d;
  for (int j = 0; j < d; ++j) {
    // 4 is the smallest size with a distinct Nyquist mode and two inner modes.
    if (!is_power_of_two(n[j]) || n[j] < 4) {
      throw Error(ErrorCode::non_power_of_two,
                  "axis " + std::to_string(j) + " size " + std::to_string(n[j]) +
                      " is not a power of two >= 4");
    }
    if (!(L[j] > 0) || !std::isfinite(L[j])) {
      throw Error(ErrorCode::non_positive_box, "axis " + std::to_string(j) + " half-width must be > 0");
    }
    layout->n[j] = n[j];
    layout->halfwidth[j] = L[j];
    layout->spacing[j] = 2.0 * L[j] / static_cast<double>(n[j]);
  }

  Index size = 1;
  for (int j = d - 1; j >= 0; --j) {
    layout->stride[j] = size;
    size *= layout->n[j];
  }
  layout->size = size;
  layout->cell_volume = 1.0;
  for (int j = 0; j < d; ++j) layout->cell_volume *= layout->spacing[j];

  for (int j = 0; j < d; ++j) {
    const Index nj = layout->n[j];
    const double dk = std::numbers::pi / layout->halfwidth[j];
    layout->k1d[j].resize(nj);
    layout->x1d[j].resize(nj);
    for (Index m = 0; m < nj; ++m) {
      const Index signed_m = m < nj / 2 ? m : m - nj;
      layout->k1d[j][m] = static_cast<double>(signed_m) * dk;
      layout->x1d[j][m] = -layout->halfwidth[j] + static_cast<double>(m) * layout->spacing[j];
    }
    layout->x[j].resize(size);
    layout->k[j].resize(size);
    const Index stride = layout->stride[j];
    for (Index i = 0; i < size; ++i) {
      const Index m = (i / stride) % nj;
      layout->x[j][i] = layout->x1d[j][m];
      layout->k[j][i] = layout->k1d[j][m];
    }
  }
  layout->k2 = Eigen::ArrayXd::Zero(size);
  for (int j = 0; j < d; ++j) layout->k2 += layout->k[j].square();

  return Grid(std::move(layout));
}

Point Grid::point(Index i) const {
  Point p = Point::Zero();
  for (int j = 0; j < dim(); ++j) p[j] = layout_->x[j][i];
  return p;
}

bool Grid::operator==(const Grid& other) const {
  if (layout_ == other.layout_) return true;
  if (!layout_ || !other.layout_) return false;
  if (dim() != other.dim()) return false;
  for (int j = 0; j < dim(); ++j) {
    if (n(j) != other.n(j) || halfwidth(j) != other.halfwidth(j)) return false;
  }
  return true;
}

}  // namespace rotnls
