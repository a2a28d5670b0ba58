#pragma once

#include "rotnls/field.hpp"
#include "rotnls/model.hpp"

#include <vector>

namespace rotnls {

/// Which coordinates a field is expressed in. Rotating-frame fields are
/// psi~(t, x) = psi(t, X(t, x)) and feel the potential W(t, x) = V(X(t, x)).
enum class Frame { lab, rotating };

/// Potential-dependent integrand factors sampled on a grid.
struct PotentialSample {
  Eigen::ArrayXd value;       ///< V (lab) or W(t, .) (rotating)
  Eigen::ArrayXd x_dot_grad;  ///< x . grad V, expressed at the lab point
  Eigen::ArrayXd source;      ///< (Omega x x) . grad V = i (Omega . L) V at the lab point
};

PotentialSample sample_potential(const Grid& grid, const ModelConfig& model, Frame frame, double t);

struct ObservableRecord {
  double t = 0;
  double mass = 0;
  double energy_omega = 0;
  double energy_zero = 0;
  double energy_magnetic = 0;
  double ang_mom = 0;
  double variance = 0;
  double variance_rate = 0;
  double grad_norm_sq = 0;
  double virial_rhs = 0;
  double lmom_source = 0;
  double tail = 0;
  /// False when tail >= 0.1; the values are then not trustworthy.
  bool resolved = true;
};

/// Every functional at one instant. All observables are invariant under the
/// frame change, so a rotating-frame field yields the same record as its lab
/// counterpart once W replaces V.
ObservableRecord compute_record(const ComplexField& psi, double t, const ModelConfig& model,
                                Frame frame = Frame::lab);

/// Rotation energy written through the magnetic potential A = Omega x x:
///   int 1/2 |(-i grad - A) psi|^2 + (V - |Omega|^2 r^2 / 2) |psi|^2 + lambda/(sigma+1) |psi|^(2 sigma+2).
/// Throws Error{unresolved_field} when tail >= 0.1.
double energy_magnetic_form(const ComplexField& psi, const ModelConfig& model);

/// int conj(psi) (Omega . L) psi dx before taking the real part.
Complex angular_momentum_integral(const ComplexField& psi, const RotationConfig& rot);

RealField density(const ComplexField& psi);
/// J = Im(conj(psi) grad psi).
VectorField<double> current_density(const ComplexField& psi);

/// l2 norm of (rho_next - rho_prev)/dt + div J - (Omega x x) . grad rho at the
/// normalized midpoint state. Throws Error{unresolved_field}.
double continuity_residual(const ComplexField& psi_prev, const ComplexField& psi_next, double dt,
                           const RotationConfig& rot);

/// max_t |L(t) + int_0^t source ds - L(0)| with the trapezoidal time rule.
/// Throws Error{too_few_samples} for fewer than 3 records.
double angular_momentum_balance(const std::vector<ObservableRecord>& records);

}  // namespace rotnls
