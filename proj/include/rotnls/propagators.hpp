#pragma once

#include "rotnls/field.hpp"
#include "rotnls/model.hpp"
#include "rotnls/observables.hpp"

#include <optional>
#include <vector>

namespace rotnls {

enum class Backend { rotating_frame, lab_frame };
enum class RunStatus { completed, blowup_detected, unresolved };
enum class FrameMap { lab_to_rotating, rotating_to_lab };

const char* to_string(Backend b);
const char* to_string(RunStatus s);
const char* to_string(Frame f);

struct SimParams {
  double dt = 1e-3;
  double t_end = 1.0;
  Backend backend = Backend::rotating_frame;
  int sample_every = 10;
  double blowup_grad_factor = 100.0;
  double blowup_tail = 1e-3;
  Frame frame_of_record = Frame::lab;
};

struct RunResult {
  RunStatus status = RunStatus::completed;
  double t_final = 0;
  std::vector<ObservableRecord> records;
  std::optional<double> t_detect;
  ComplexField final_field;
  /// Frame of final_field; equals params.frame_of_record unless the run ended
  /// unresolved or in blow-up, where no frame mapping is attempted.
  Frame final_frame = Frame::lab;
  SimParams params;
};

/// One time step of a fixed backend with all step-size dependent multipliers
/// precomputed. Advances raw samples from t to t + dt in place.
class Stepper {
 public:
  Stepper(const ModelConfig& model, const Grid& grid, double dt, Backend backend);

  void step(Eigen::ArrayXcd& psi, double t) const;
  double dt() const { return dt_; }
  Backend backend() const { return backend_; }

  // Substeps, exposed for testing and for the free functions below.
  void kinetic(Eigen::ArrayXcd& psi) const;
  void phase(Eigen::ArrayXcd& psi, double t, double h) const;
  void adi_axis1(Eigen::ArrayXcd& psi) const;
  void adi_axis2(Eigen::ArrayXcd& psi) const;

 private:
  Eigen::ArrayXd potential_at(double t) const;

  ModelConfig model_;
  Grid grid_;
  double dt_;
  Backend backend_;
  bool static_potential_;
  Eigen::ArrayXd lab_potential_;
  Eigen::ArrayXcd kinetic_mult_;
  Eigen::ArrayXcd axis1_half_mult_;
  Eigen::ArrayXcd axis2_mult_;
  Eigen::ArrayXcd axis3_half_mult_;
};

/// Exact free flow over dt: multiply mode k by exp(-i |k|^2 dt / 2).
ComplexField kinetic_step(const ComplexField& psi, double dt);

/// psi * exp(-i dt [W(t + dt/2, x) + lambda |psi|^(2 sigma)]).
ComplexField phase_step_rotating(const ComplexField& psi, double t, double dt, const ModelConfig& model);

/// Strang step for the rotating-frame equation with time-dependent W:
/// phase(dt/2 at t + dt/4), kinetic(dt), phase(dt/2 at t + 3dt/4).
ComplexField strang_step_rotating(const ComplexField& psi, double t, double dt, const ModelConfig& model);

/// Lab-frame step with the rotation term split by axis:
/// phase(dt/2), axis1(dt/2), axis2(dt), axis1(dt/2), phase(dt/2).
/// Throws Error{unsupported_rotation_axis} unless Omega is along the third axis.
ComplexField adi_step_lab(const ComplexField& psi, double dt, const ModelConfig& model);

/// psi(x) -> psi(R(angle) x) for the planar rotation R acting on axes 0 and 1.
/// Quarter turns are exact index permutations; the residual angle in
/// [-pi/4, pi/4] is applied as three spectral shears.
ComplexField rotate_field(const ComplexField& psi, double angle);

/// Lab <-> rotating frame: psi~(t, x) = psi(t, X(t, x)).
/// Throws Error{unsupported_rotation_axis} or Error{unresolved_field}.
ComplexField map_frame(const ComplexField& psi, double t, const RotationConfig& rot, FrameMap direction);

struct GroundStateOptions {
  double dtau = 0.01;
  int max_iterations = 200000;
  int check_every = 10;
};

/// Normalized imaginary-time split-step flow to the unit-mass minimizer of E_0.
/// Throws Error{non_confining_trap} or Error{no_convergence}.
ComplexField imaginary_time_ground_state(const ModelConfig& model, const Grid& grid, double tol,
                                         const GroundStateOptions& options = {});

/// Integrate to t_end, sampling records and stopping early on blow-up
/// (gradient criterion) or under-resolution (tail guard).
RunResult run(const ComplexField& psi0, const ModelConfig& model, const SimParams& params);

}  // namespace rotnls
