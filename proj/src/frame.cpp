#include "rotnls/propagators.hpp"
#include "rotnls/spectral.hpp"

#include <cmath>
#include <numbers>

namespace rotnls {

namespace {

void require_square_plane(const Grid& grid) {
  if (grid.n(0) != grid.n(1) || grid.halfwidth(0) != grid.halfwidth(1)) {
    throw Error(ErrorCode::unsupported_rotation_axis, "planar rotation needs a square grid in the rotation plane");
  }
}

/// out(x1, x2) = in(-x2, x1), i.e. psi(R(pi/2) x). On the grid -x maps index i to (n - i) mod n.
Eigen::ArrayXcd quarter_turn(const Grid& grid, const Eigen::ArrayXcd& in) {
  const Index n = grid.n(0);
  const Index s0 = grid.stride(0), s1 = grid.stride(1);
  const Index inner = s1;
  Eigen::ArrayXcd out(in.size());
  for (Index i0 = 0; i0 < n; ++i0) {
    for (Index i1 = 0; i1 < n; ++i1) {
      const Index src0 = (n - i1) % n;
      const Index src1 = i0;
      const Complex* from = in.data() + src0 * s0 + src1 * s1;
      Complex* to = out.data() + i0 * s0 + i1 * s1;
      for (Index r = 0; r < inner; ++r) to[r] = from[r];
    }
  }
  return out;
}

/// out(x) = in(x + c * x_other e_axis), applied per line as the phase ramp exp(i k c x_other).
void shear(const Grid& grid, int axis, int other, double c, Eigen::ArrayXcd& values) {
  transform_axis_forward(grid, axis, values);
  const Eigen::ArrayXd& k = grid.mode_wavenumbers(axis);
  const Eigen::ArrayXd& x = grid.coords(other);
  for (Index i = 0; i < values.size(); ++i) values[i] *= std::polar(1.0, k[i] * c * x[i]);
  transform_axis_backward(grid, axis, values);
}

}  // namespace

ComplexField rotate_field(const ComplexField& psi, double angle) {
  const Grid& grid = psi.grid();
  require_square_plane(grid);
  const double quarter = 0.5 * std::numbers::pi;
  const double turns = std::round(angle / quarter);
  const double residual = angle - turns * quarter;
  const int q = static_cast<int>(((static_cast<long>(turns) % 4) + 4) % 4);

  Eigen::ArrayXcd v = psi.values();
  for (int i = 0; i < q; ++i) v = quarter_turn(grid, v);
  if (residual != 0.0) {
    // R(phi) = Sx(a) Sy(b) Sx(a) with a = -tan(phi/2), b = sin(phi).
    const double a = -std::tan(0.5 * residual);
    const double b = std::sin(residual);
    shear(grid, 0, 1, a, v);
    shear(grid, 1, 0, b, v);
    shear(grid, 0, 1, a, v);
  }
  return ComplexField(grid, std::move(v));
}

ComplexField map_frame(const ComplexField& psi, double t, const RotationConfig& rot, FrameMap direction) {
  if (!rot.axis_aligned()) {
    throw Error(ErrorCode::unsupported_rotation_axis, "frame mapping supports rotation about the third axis only");
  }
  const double w = rot.omega[2];
  if (w * t == 0.0) return psi;
  if (tail_fraction(psi) >= 0.1) {
    throw Error(ErrorCode::unresolved_field, "frame mapping of an under-resolved field");
  }
  // X(t, x) = R(-w t) x, so lab -> rotating samples psi at R(-w t) x.
  const double angle = direction == FrameMap::lab_to_rotating ? -w * t : w * t;
  return rotate_field(psi, angle);
}

}  // namespace rotnls
