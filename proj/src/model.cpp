#include "rotnls/model.hpp"

#include "rotnls/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rotnls {

namespace {

constexpr double kSigmaSlack = 1e-12;

bool isotropic_pair(const TrapConfig& trap, int a, int b) {
  return std::abs(trap.gamma[a]) == std::abs(trap.gamma[b]) && trap.repulsive[a] == trap.repulsive[b];
}

}  // namespace

double TrapConfig::gamma_min() const {
  double g = std::numeric_limits<double>::infinity();
  for (int j = 0; j < dim; ++j) g = std::min(g, std::abs(gamma[j]));
  return g;
}

bool TrapConfig::confining() const {
  for (int j = 0; j < dim; ++j) {
    if (repulsive[j] || gamma[j] == 0.0) return false;
  }
  return true;
}

Criticality criticality(const NonlinearityConfig& nl, int dim) {
  const double critical = 2.0 / dim;
  if (std::abs(nl.sigma - critical) <= kSigmaSlack) return Criticality::critical;
  return nl.sigma < critical ? Criticality::subcritical : Criticality::supercritical;
}

bool energy_subcritical(const NonlinearityConfig& nl, int dim) {
  if (!(nl.sigma > 0)) return false;
  return dim <= 2 || nl.sigma < 2.0 / (dim - 2);
}

bool axially_symmetric(const TrapConfig& trap, const RotationConfig& rot) {
  if (rot.omega.isZero(0.0)) return true;
  if (trap.lattice) return false;
  if (trap.dim == 2 || rot.axis_aligned()) return isotropic_pair(trap, 0, 1);
  return isotropic_pair(trap, 0, 1) && isotropic_pair(trap, 1, 2);
}

Matrix3 theta_matrix(const RotationConfig& rot) {
  const Point& w = rot.omega;
  Matrix3 theta;
  theta << 0, w[2], -w[1],
           -w[2], 0, w[0],
           w[1], -w[0], 0;
  return theta;
}

Matrix3 rotation_matrix(double t, const RotationConfig& rot) {
  const double mag = rot.magnitude();
  if (mag == 0.0) return Matrix3::Identity();
  const Point axis = rot.omega / mag;
  Matrix3 k;
  k << 0, -axis[2], axis[1],
       axis[2], 0, -axis[0],
       -axis[1], axis[0], 0;
  const double angle = mag * t;
  // Theta = -|Omega| K, so exp(Theta t) = I - sin(a) K + (1 - cos(a)) K^2.
  return Matrix3::Identity() - std::sin(angle) * k + (1.0 - std::cos(angle)) * (k * k);
}

Point rotate_coords(double t, const Point& x, const RotationConfig& rot) {
  return rotation_matrix(t, rot) * x;
}

double potential_value(const TrapConfig& trap, const Point& x) {
  double v = 0;
  for (int j = 0; j < trap.dim; ++j) {
    const double s = trap.repulsive[j] ? -1.0 : 1.0;
    v += s * trap.gamma[j] * trap.gamma[j] * x[j] * x[j];
  }
  v *= 0.5;
  if (trap.lattice) v += trap.lattice->amplitude * std::cos(trap.lattice->wavevector.dot(x));
  return v;
}

Point potential_gradient(const TrapConfig& trap, const Point& x) {
  Point g = Point::Zero();
  for (int j = 0; j < trap.dim; ++j) {
    const double s = trap.repulsive[j] ? -1.0 : 1.0;
    g[j] = s * trap.gamma[j] * trap.gamma[j] * x[j];
  }
  if (trap.lattice) {
    g -= trap.lattice->amplitude * std::sin(trap.lattice->wavevector.dot(x)) * trap.lattice->wavevector;
  }
  return g;
}

double rotated_potential(const TrapConfig& trap, const RotationConfig& rot, double t, const Point& x) {
  if (axially_symmetric(trap, rot)) return potential_value(trap, x);
  return potential_value(trap, rotate_coords(t, x, rot));
}

double rotated_potential_time_derivative(const TrapConfig& trap, const RotationConfig& rot, double t,
                                         const Point& x) {
  if (axially_symmetric(trap, rot)) return 0.0;
  const Point X = rotate_coords(t, x, rot);
  return -rot.omega.cross(X).dot(potential_gradient(trap, X));
}

double alpha_omega(double gamma_min, double omega_mag) {
  if (!(omega_mag < gamma_min) || !(gamma_min > 0)) {
    throw Error(ErrorCode::rotation_exceeds_trap,
                "alpha_Omega requires 0 <= |Omega| < gamma_min (|Omega|=" + std::to_string(omega_mag) +
                    ", gamma_min=" + std::to_string(gamma_min) + ")");
  }
  const double g2 = gamma_min * gamma_min;
  return std::sqrt(4.0 * g2 / (g2 - omega_mag * omega_mag));
}

const char* to_string(BlowupCase c) {
  switch (c) {
    case BlowupCase::axisymmetric_case_i: return "axisymmetric_case_i";
    case BlowupCase::nonsymmetric_case_ii: return "nonsymmetric_case_ii";
    case BlowupCase::not_applicable: return "not_applicable";
  }
  return "unknown";
}

double parabola_exit_time(double a, double b, double c) {
  // a < 0: roots of a t^2 + b t + c; the positive one is (b + sqrt(D)) / (2|a|).
  const double disc = b * b - 4.0 * a * c;
  const double root = std::sqrt(std::max(disc, 0.0));
  if (b >= 0) return (b + root) / (-2.0 * a);
  return 2.0 * c / (root - b);
}

BlowupReport classify_blowup(const ModelConfig& model, double e0, double eomega, double i0, double di0) {
  BlowupReport report;
  report.e0_initial = e0;
  report.eomega_initial = eomega;
  const int d = model.dim;
  const double sigma = model.nonlinearity.sigma;

  auto not_applicable = [&](std::string why) {
    report.blowup_case = BlowupCase::not_applicable;
    report.reason = std::move(why);
    return report;
  };

  if (!(model.nonlinearity.lambda < 0)) return not_applicable("nonlinearity is not focusing (lambda >= 0)");
  if (!model.trap.quadratic()) return not_applicable("criterion requires a purely quadratic trap (lattice present)");
  if (!model.trap.confining()) return not_applicable("criterion requires V >= 0 (repulsive or vanishing trap axis)");

  if (axially_symmetric(model)) {
    report.sigma_threshold = 2.0 / d;
    if (sigma < 2.0 / d - kSigmaSlack) return not_applicable("sigma below the L2-critical exponent 2/d");
    if (!(e0 < 0)) return not_applicable("initial rotation-free energy E_0 is not negative");
    report.blowup_case = BlowupCase::axisymmetric_case_i;
    // I'' <= 2 E_0  =>  I(t) <= i0 + di0 t + E_0 t^2.
    report.t_star_bound = parabola_exit_time(e0, di0, i0);
    return report;
  }

  const double gmin = model.trap.gamma_min();
  const double omega = model.rotation.magnitude();
  if (!(omega < gmin)) {
    return not_applicable(
        "rotation frequency is not below the weakest trap frequency; whether blow-up occurs in this regime is an "
        "open question");
  }
  const double alpha = alpha_omega(gmin, omega);
  report.alpha_omega = alpha;
  report.sigma_threshold = alpha / d;
  if (sigma < alpha / d - kSigmaSlack * std::max(1.0, alpha / d)) {
    return not_applicable("sigma below alpha_Omega / d");
  }
  if (!(eomega < 0)) return not_applicable("initial energy E_Omega is not negative");
  report.blowup_case = BlowupCase::nonsymmetric_case_ii;
  // I'' <= alpha E_Omega  =>  I(t) <= i0 + di0 t + (alpha E_Omega / 2) t^2.
  report.t_star_bound = parabola_exit_time(0.5 * alpha * eomega, di0, i0);
  return report;
}

}  // namespace rotnls
