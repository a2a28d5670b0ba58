#pragma once

#include "rotnls/propagators.hpp"

#include <limits>
#include <map>
#include <string>
#include <vector>

namespace rotnls {

struct Residual {
  std::string name;
  double value = 0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = 0;
  bool pass = false;
};

/// Outcome of one orchestrated experiment. Residuals always carry a verdict;
/// measurements are informational.
struct ExperimentReport {
  std::string name;
  std::map<std::string, std::string> inputs;
  std::vector<Residual> residuals;
  std::map<std::string, double> measurements;
  std::vector<std::string> notes;

  /// Verdict value <= tolerance.
  void check(std::string residual_name, double value, double tolerance);
  /// Verdict lower <= value <= upper.
  void check_range(std::string residual_name, double value, double lower, double upper);
  bool pass() const;
  const Residual* find(const std::string& residual_name) const;
};

/// Second central difference of I against the virial right-hand side.
/// Uses the record series at sample interval h and 2h (every other record);
/// the coarse pair calibrates C1 and the verdict is residual(h) <= C1 h^2 + 1e-7.
/// Throws Error{too_few_samples} for fewer than 5 records.
ExperimentReport verify_virial(const RunResult& run, double dt_sample);

/// Mass, E_Omega, angular-momentum balance and (for symmetric traps) E_0 and
/// L_Omega drifts, judged against dt^2-scaled tolerances.
ExperimentReport verify_balance_laws(const RunResult& run, const ModelConfig& model);

/// Runs both backends from psi0 and compares the lab-frame fields at t_end.
ExperimentReport frame_equivalence(const ModelConfig& model, const ComplexField& psi0, const SimParams& params);

struct BlowupOutcome {
  ExperimentReport report;
  BlowupReport criterion;
  RunResult run;
};

/// Initial functionals, criterion, dynamics, and comparison of the detection
/// time with the slacked bound (t_detect <= 1.25 t_star_bound).
BlowupOutcome blowup_experiment(const ModelConfig& model, const ComplexField& psi0, const SimParams& params);

inline constexpr double kBlowupSlack = 1.25;

/// Errors at t_end against a reference run at min(dt_list)/8 and the least
/// squares slope of log(error) versus log(dt). Verdict p in [1.8, 2.2].
ExperimentReport convergence_order(const ModelConfig& model, const ComplexField& psi0, double t_end,
                                   const std::vector<double>& dt_list, Backend backend);

/// Least-squares slope of log(y) against log(x).
double fitted_order(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace rotnls
