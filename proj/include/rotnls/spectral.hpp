#pragma once

#include "rotnls/field.hpp"

namespace rotnls {

/// Spectral coefficients of a field, indexed like the field itself.
///
/// Normalization: the forward transform is unnormalized and the backward
/// transform divides by the total sample count, so that
///   sum_x |f(x)|^2 = (1/N) sum_k |F(k)|^2.
using Spectrum = ComplexField;

Spectrum transform_forward(const ComplexField& f);
ComplexField transform_backward(const Spectrum& F);

/// In-place 1D transforms along a single axis (backward divides by n_axis).
void transform_axis_forward(const Grid& grid, int axis, Eigen::ArrayXcd& values);
void transform_axis_backward(const Grid& grid, int axis, Eigen::ArrayXcd& values);

/// Full d-dimensional in-place transforms on raw sample arrays.
void transform_forward_inplace(const Grid& grid, Eigen::ArrayXcd& values);
void transform_backward_inplace(const Grid& grid, Eigen::ArrayXcd& values);

/// Spectral gradient; the Nyquist coefficient of each derivative is zeroed.
VectorField<Complex> gradient(const ComplexField& f);
/// Same, starting from precomputed coefficients of f.
VectorField<Complex> gradient_from_spectrum(const Spectrum& F);

/// Fraction of spectral l2 mass in modes with |k_j| >= 3/4 k_max on any axis.
/// Throws Error{zero_field}.
double tail_fraction(const ComplexField& f);
double tail_fraction_from_spectrum(const Spectrum& F);

}  // namespace rotnls
