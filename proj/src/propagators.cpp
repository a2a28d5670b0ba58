#include "rotnls/propagators.hpp"

#include "rotnls/spectral.hpp"

#include <cmath>

namespace rotnls {

namespace {

Eigen::ArrayXcd unit_phase(const Eigen::ArrayXd& angle) {
  Eigen::ArrayXcd out(angle.size());
  for (Index i = 0; i < angle.size(); ++i) out[i] = std::polar(1.0, angle[i]);
  return out;
}

/// V evaluated at R x for every grid point.
Eigen::ArrayXd potential_on_grid(const Grid& grid, const TrapConfig& trap, const Matrix3& R) {
  const int d = grid.dim();
  std::array<Eigen::ArrayXd, 3> X;
  for (int a = 0; a < 3; ++a) {
    X[a] = Eigen::ArrayXd::Zero(grid.size());
    for (int b = 0; b < d; ++b) {
      if (R(a, b) != 0.0) X[a] += R(a, b) * grid.coords(b);
    }
  }
  Eigen::ArrayXd v = Eigen::ArrayXd::Zero(grid.size());
  for (int a = 0; a < trap.dim; ++a) {
    const double s = trap.repulsive[a] ? -1.0 : 1.0;
    v += (0.5 * s * trap.gamma[a] * trap.gamma[a]) * X[a].square();
  }
  if (trap.lattice) {
    Eigen::ArrayXd phase = Eigen::ArrayXd::Zero(grid.size());
    for (int a = 0; a < 3; ++a) phase += trap.lattice->wavevector[a] * X[a];
    v += trap.lattice->amplitude * phase.cos();
  }
  return v;
}

Eigen::ArrayXd nonlinear_potential(const Eigen::ArrayXcd& psi, const NonlinearityConfig& nl) {
  if (nl.lambda == 0.0) return Eigen::ArrayXd::Zero(psi.size());
  const Eigen::ArrayXd rho = psi.abs2();
  if (nl.sigma == 1.0) return nl.lambda * rho;
  return nl.lambda * rho.pow(nl.sigma);
}

void require_axis_aligned(const RotationConfig& rot) {
  if (!rot.axis_aligned()) {
    throw Error(ErrorCode::unsupported_rotation_axis, "rotation must be about the third axis");
  }
}

}  // namespace

const char* to_string(Backend b) { return b == Backend::lab_frame ? "lab_frame" : "rotating_frame"; }

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::blowup_detected: return "blowup_detected";
    case RunStatus::unresolved: return "unresolved";
  }
  return "unknown";
}

const char* to_string(Frame f) { return f == Frame::lab ? "lab" : "rotating"; }

Stepper::Stepper(const ModelConfig& model, const Grid& grid, double dt, Backend backend)
    : model_(model), grid_(grid), dt_(dt), backend_(backend) {
  if (!(dt > 0)) throw Error(ErrorCode::invalid_argument, "time step must be positive");
  static_potential_ = backend == Backend::lab_frame || axially_symmetric(model);
  lab_potential_ = potential_on_grid(grid, model.trap, Matrix3::Identity());

  if (backend == Backend::rotating_frame) {
    kinetic_mult_ = unit_phase(-0.5 * dt * grid.mode_k2());
    return;
  }
  require_axis_aligned(model.rotation);
  const double w = model.rotation.omega[2];
  const Eigen::ArrayXd& k1 = grid.mode_wavenumbers(0);
  const Eigen::ArrayXd& k2 = grid.mode_wavenumbers(1);
  // Axis-1 substep acts on (k_1, x_2); axis-2 substep on (x_1, k_2).
  axis1_half_mult_ = unit_phase(-0.5 * dt * (0.5 * k1.square() + w * grid.coords(1) * k1));
  axis2_mult_ = unit_phase(-dt * (0.5 * k2.square() - w * grid.coords(0) * k2));
  if (grid.dim() == 3) axis3_half_mult_ = unit_phase(-0.5 * dt * 0.5 * grid.mode_wavenumbers(2).square());
}

Eigen::ArrayXd Stepper::potential_at(double t) const {
  if (static_potential_) return lab_potential_;
  return potential_on_grid(grid_, model_.trap, rotation_matrix(t, model_.rotation));
}

void Stepper::kinetic(Eigen::ArrayXcd& psi) const {
  transform_forward_inplace(grid_, psi);
  psi *= kinetic_mult_;
  transform_backward_inplace(grid_, psi);
}

void Stepper::phase(Eigen::ArrayXcd& psi, double t, double h) const {
  // W is frozen at the substep midpoint.
  const Eigen::ArrayXd total = potential_at(t + 0.5 * h) + nonlinear_potential(psi, model_.nonlinearity);
  for (Index i = 0; i < psi.size(); ++i) psi[i] *= std::polar(1.0, -h * total[i]);
}

void Stepper::adi_axis1(Eigen::ArrayXcd& psi) const {
  transform_axis_forward(grid_, 0, psi);
  psi *= axis1_half_mult_;
  transform_axis_backward(grid_, 0, psi);
  if (grid_.dim() == 3) {
    transform_axis_forward(grid_, 2, psi);
    psi *= axis3_half_mult_;
    transform_axis_backward(grid_, 2, psi);
  }
}

void Stepper::adi_axis2(Eigen::ArrayXcd& psi) const {
  transform_axis_forward(grid_, 1, psi);
  psi *= axis2_mult_;
  transform_axis_backward(grid_, 1, psi);
}

void Stepper::step(Eigen::ArrayXcd& psi, double t) const {
  const double h = 0.5 * dt_;
  if (backend_ == Backend::rotating_frame) {
    phase(psi, t, h);
    kinetic(psi);
    phase(psi, t + h, h);
    return;
  }
  phase(psi, t, h);
  adi_axis1(psi);
  adi_axis2(psi);
  adi_axis1(psi);
  phase(psi, t + h, h);
}

ComplexField kinetic_step(const ComplexField& psi, double dt) {
  Eigen::ArrayXcd v = psi.values();
  transform_forward_inplace(psi.grid(), v);
  v *= unit_phase(-0.5 * dt * psi.grid().mode_k2());
  transform_backward_inplace(psi.grid(), v);
  return ComplexField(psi.grid(), std::move(v));
}

ComplexField phase_step_rotating(const ComplexField& psi, double t, double dt, const ModelConfig& model) {
  const Grid& grid = psi.grid();
  const Eigen::ArrayXd w = axially_symmetric(model)
                               ? potential_on_grid(grid, model.trap, Matrix3::Identity())
                               : potential_on_grid(grid, model.trap, rotation_matrix(t + 0.5 * dt, model.rotation));
  const Eigen::ArrayXd total = w + nonlinear_potential(psi.values(), model.nonlinearity);
  Eigen::ArrayXcd v = psi.values();
  for (Index i = 0; i < v.size(); ++i) v[i] *= std::polar(1.0, -dt * total[i]);
  return ComplexField(grid, std::move(v));
}

ComplexField strang_step_rotating(const ComplexField& psi, double t, double dt, const ModelConfig& model) {
  Stepper stepper(model, psi.grid(), dt, Backend::rotating_frame);
  Eigen::ArrayXcd v = psi.values();
  stepper.step(v, t);
  return ComplexField(psi.grid(), std::move(v));
}

ComplexField adi_step_lab(const ComplexField& psi, double dt, const ModelConfig& model) {
  require_axis_aligned(model.rotation);
  Stepper stepper(model, psi.grid(), dt, Backend::lab_frame);
  Eigen::ArrayXcd v = psi.values();
  stepper.step(v, 0.0);
  return ComplexField(psi.grid(), std::move(v));
}

ComplexField imaginary_time_ground_state(const ModelConfig& model, const Grid& grid, double tol,
                                         const GroundStateOptions& options) {
  if (!model.trap.confining()) {
    throw Error(ErrorCode::non_confining_trap, "imaginary-time flow needs an attractive trap on every axis");
  }
  const double tau = options.dtau;
  ComplexField psi = sample(grid, [&](const Point& x) {
    double e = 0;
    for (int j = 0; j < grid.dim(); ++j) e += std::abs(model.trap.gamma[j]) * x[j] * x[j];
    return Complex(std::exp(-0.5 * e), 0.0);
  });
  psi.values() /= l2_norm(psi);

  const Eigen::ArrayXd v = potential_on_grid(grid, model.trap, Matrix3::Identity());
  const Eigen::ArrayXd kinetic_decay = (-0.5 * tau * grid.mode_k2()).exp();
  ModelConfig static_model = model;
  static_model.rotation = RotationConfig{};

  double e_prev = compute_record(psi, 0.0, static_model).energy_zero;
  Eigen::ArrayXcd& values = psi.values();
  for (int it = 1; it <= options.max_iterations; ++it) {
    values *= (-0.5 * tau * (v + nonlinear_potential(values, model.nonlinearity))).exp();
    transform_forward_inplace(grid, values);
    values *= kinetic_decay;
    transform_backward_inplace(grid, values);
    values *= (-0.5 * tau * (v + nonlinear_potential(values, model.nonlinearity))).exp();
    values /= l2_norm(psi);
    if (it % options.check_every != 0) continue;
    if (!all_finite(psi)) throw Error(ErrorCode::no_convergence, "imaginary-time flow produced non-finite samples");
    const double e = compute_record(psi, 0.0, static_model).energy_zero;
    if (std::abs(e - e_prev) < tol) return psi;
    e_prev = e;
  }
  throw Error(ErrorCode::no_convergence, "imaginary-time flow did not converge within the iteration limit");
}

RunResult run(const ComplexField& psi0, const ModelConfig& model, const SimParams& params) {
  if (!(params.dt > 0) || !(params.t_end > 0)) {
    throw Error(ErrorCode::invalid_argument, "dt and t_end must be positive");
  }
  if (params.sample_every < 1 || !(params.blowup_grad_factor > 0) || !(params.blowup_tail > 0)) {
    throw Error(ErrorCode::invalid_argument, "sampling and blow-up thresholds must be positive");
  }
  const bool rotating = params.backend == Backend::rotating_frame;
  const bool needs_map = rotating != (params.frame_of_record == Frame::rotating);
  if (!rotating || needs_map) require_axis_aligned(model.rotation);

  const Grid& grid = psi0.grid();
  const Frame native = rotating ? Frame::rotating : Frame::lab;
  const Stepper stepper(model, grid, params.dt, params.backend);
  const long steps = std::max(1L, std::lround(params.t_end / params.dt));

  RunResult result;
  result.params = params;
  ComplexField psi = psi0;
  result.records.push_back(compute_record(psi, 0.0, model, native));
  const double grad0 = result.records.front().grad_norm_sq;

  auto inspect = [&](double t) {
    const ObservableRecord& r = result.records.back();
    const bool finite = std::isfinite(r.grad_norm_sq) && std::isfinite(r.mass) && std::isfinite(r.tail);
    if (!finite || r.tail > params.blowup_tail) {
      result.status = RunStatus::unresolved;
      return true;
    }
    if (r.grad_norm_sq > params.blowup_grad_factor * grad0) {
      result.status = RunStatus::blowup_detected;
      result.t_detect = t;
      return true;
    }
    return false;
  };

  double t = 0;
  bool stopped = inspect(0.0);
  for (long k = 1; k <= steps && !stopped; ++k) {
    stepper.step(psi.values(), t);
    t = static_cast<double>(k) * params.dt;
    if (k % params.sample_every == 0 || k == steps) {
      result.records.push_back(compute_record(psi, t, model, native));
      stopped = inspect(t);
    }
  }
  result.t_final = t;

  result.final_frame = native;
  if (needs_map && result.status == RunStatus::completed) {
    psi = map_frame(psi, t, model.rotation, rotating ? FrameMap::rotating_to_lab : FrameMap::lab_to_rotating);
    result.final_frame = params.frame_of_record;
  }
  result.final_field = std::move(psi);
  return result;
}

}  // namespace rotnls
