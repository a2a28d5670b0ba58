#pragma once

#include "rotnls/grid.hpp"

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <optional>
#include <string>

namespace rotnls {

using Matrix3 = Eigen::Matrix3d;

/// Angular velocity. In two dimensions only the third component is used and
/// it equals the scalar rotation frequency about the implicit third axis.
struct RotationConfig {
  Point omega = Point::Zero();

  static RotationConfig planar(double omega_mag) { return {Point(0, 0, omega_mag)}; }
  double magnitude() const { return omega.norm(); }
  /// Rotation about the third axis only (or no rotation).
  bool axis_aligned() const { return omega[0] == 0.0 && omega[1] == 0.0; }
};

/// A * cos(q . x)
struct Lattice {
  double amplitude = 0;
  Point wavevector = Point::Zero();
};

/// V(x) = 1/2 sum_j s_j gamma_j^2 x_j^2 + lattice(x), s_j = -1 on repulsive axes.
struct TrapConfig {
  int dim = 2;
  Point gamma = Point::Zero();
  std::array<bool, 3> repulsive{false, false, false};
  std::optional<Lattice> lattice;

  double gamma_min() const;
  bool confining() const;
  bool quadratic() const { return !lattice.has_value(); }
};

struct NonlinearityConfig {
  double lambda = 0;
  double sigma = 1;
};

enum class Criticality { subcritical, critical, supercritical };

Criticality criticality(const NonlinearityConfig& nl, int dim);
/// sigma < 2/(d-2) in three dimensions; always true in two.
bool energy_subcritical(const NonlinearityConfig& nl, int dim);

struct ModelConfig {
  int dim = 2;
  TrapConfig trap;
  RotationConfig rotation;
  NonlinearityConfig nonlinearity;
};

/// Structural test for (Omega . L) V = 0: no rotation, or a lattice-free trap
/// that is isotropic in the plane transverse to an axis-aligned Omega (or
/// fully isotropic for a general axis).
bool axially_symmetric(const TrapConfig& trap, const RotationConfig& rot);
inline bool axially_symmetric(const ModelConfig& m) { return axially_symmetric(m.trap, m.rotation); }

/// Skew matrix with Theta * x = -Omega x x.
Matrix3 theta_matrix(const RotationConfig& rot);
/// exp(Theta t), a rotation by -|Omega| t about Omega (Rodrigues form).
Matrix3 rotation_matrix(double t, const RotationConfig& rot);
/// X(t, x) = exp(Theta t) x.
Point rotate_coords(double t, const Point& x, const RotationConfig& rot);

double potential_value(const TrapConfig& trap, const Point& x);
Point potential_gradient(const TrapConfig& trap, const Point& x);
/// W(t, x) = V(X(t, x)).
double rotated_potential(const TrapConfig& trap, const RotationConfig& rot, double t, const Point& x);
/// dW/dt = -(Omega x X) . grad V(X).
double rotated_potential_time_derivative(const TrapConfig& trap, const RotationConfig& rot, double t,
                                         const Point& x);

/// sqrt(4 g^2 / (g^2 - |Omega|^2)); throws Error{rotation_exceeds_trap} for |Omega| >= g.
double alpha_omega(double gamma_min, double omega_mag);

enum class BlowupCase { axisymmetric_case_i, nonsymmetric_case_ii, not_applicable };

const char* to_string(BlowupCase c);

struct BlowupReport {
  BlowupCase blowup_case = BlowupCase::not_applicable;
  std::optional<double> alpha_omega;
  double e0_initial = 0;
  double eomega_initial = 0;
  std::optional<double> sigma_threshold;
  std::optional<double> t_star_bound;
  std::string reason;
};

/// Positive root of c + b t + a t^2 with a < 0 and c >= 0.
double parabola_exit_time(double a, double b, double c);

/// Decide which finite-time blow-up criterion the initial data meets and bound
/// the blow-up time by the time the variance parabola reaches zero.
BlowupReport classify_blowup(const ModelConfig& model, double e0, double eomega, double i0, double di0);

}  // namespace rotnls
