#include "rotnls/spectral.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>

namespace rotnls {

namespace {

Eigen::FFT<double>& fft_engine() {
  // Eigen::FFT caches twiddle tables per size; one engine per thread keeps the
  // pure-function contract without locking.
  thread_local Eigen::FFT<double> engine;
  return engine;
}

template <bool Forward>
void transform_lines(const Grid& grid, int axis, Eigen::ArrayXcd& values) {
  const Index n = grid.n(axis);
  const Index stride = grid.stride(axis);
  const Index block = n * stride;
  const Index outer = grid.size() / block;
  auto& fft = fft_engine();
  thread_local std::vector<Complex> in, out;
  in.resize(n);
  out.resize(n);
  for (Index o = 0; o < outer; ++o) {
    for (Index s = 0; s < stride; ++s) {
      Complex* line = values.data() + o * block + s;
      for (Index m = 0; m < n; ++m) in[m] = line[m * stride];
      if constexpr (Forward) {
        fft.fwd(out.data(), in.data(), n);
      } else {
        fft.inv(out.data(), in.data(), n);
      }
      for (Index m = 0; m < n; ++m) line[m * stride] = out[m];
    }
  }
}

}  // namespace

double l2_norm(const ComplexField& a) { return std::sqrt(mass(a)); }

double mass(const ComplexField& a) { return integrate(a.grid(), a.values().abs2()); }

double l2_distance(const ComplexField& a, const ComplexField& b) {
  if (a.grid() != b.grid()) throw Error(ErrorCode::size_mismatch, "fields live on different grids");
  return std::sqrt(integrate(a.grid(), (a.values() - b.values()).abs2()));
}

bool all_finite(const ComplexField& a) { return a.values().isFinite().all(); }

void transform_axis_forward(const Grid& grid, int axis, Eigen::ArrayXcd& values) {
  transform_lines<true>(grid, axis, values);
}

void transform_axis_backward(const Grid& grid, int axis, Eigen::ArrayXcd& values) {
  transform_lines<false>(grid, axis, values);
}

void transform_forward_inplace(const Grid& grid, Eigen::ArrayXcd& values) {
  for (int j = 0; j < grid.dim(); ++j) transform_lines<true>(grid, j, values);
}

void transform_backward_inplace(const Grid& grid, Eigen::ArrayXcd& values) {
  for (int j = 0; j < grid.dim(); ++j) transform_lines<false>(grid, j, values);
}

Spectrum transform_forward(const ComplexField& f) {
  Eigen::ArrayXcd v = f.values();
  transform_forward_inplace(f.grid(), v);
  return Spectrum(f.grid(), std::move(v));
}

ComplexField transform_backward(const Spectrum& F) {
  Eigen::ArrayXcd v = F.values();
  transform_backward_inplace(F.grid(), v);
  return ComplexField(F.grid(), std::move(v));
}

VectorField<Complex> gradient_from_spectrum(const Spectrum& F) {
  const Grid& grid = F.grid();
  VectorField<Complex> g{grid, {}};
  g.components.reserve(grid.dim());
  for (int j = 0; j < grid.dim(); ++j) {
    const Eigen::ArrayXd& k = grid.mode_wavenumbers(j);
    const double nyquist = -grid.k_max(j);
    Eigen::ArrayXcd d = F.values() * (k == nyquist).select(0.0, k).cast<Complex>() * Complex(0, 1);
    transform_backward_inplace(grid, d);
    g.components.push_back(std::move(d));
  }
  return g;
}

VectorField<Complex> gradient(const ComplexField& f) { return gradient_from_spectrum(transform_forward(f)); }

double tail_fraction_from_spectrum(const Spectrum& F) {
  const Grid& grid = F.grid();
  const Eigen::ArrayXd power = F.values().abs2();
  const double total = power.sum();
  if (!(total > 0)) throw Error(ErrorCode::zero_field, "tail fraction of a zero field");
  Eigen::Array<bool, Eigen::Dynamic, 1> in_tail = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(grid.size(), false);
  for (int j = 0; j < grid.dim(); ++j) {
    const double cut = 0.75 * grid.k_max(j);
    in_tail = in_tail || (grid.mode_wavenumbers(j).abs() >= cut);
  }
  return in_tail.select(power, 0.0).sum() / total;
}

double tail_fraction(const ComplexField& f) { return tail_fraction_from_spectrum(transform_forward(f)); }

}  // namespace rotnls
