#include "rotnls/cli.hpp"

#include "rotnls/config.hpp"
#include "rotnls/diagnostics.hpp"
#include "rotnls/io.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace rotnls {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

enum Exit { kPass = 0, kError = 1, kVerdictFail = 2, kBlowup = 3 };

/// Collects written files and report content for summary.json.
class Summary {
 public:
  Summary(std::string command, const RunConfig& config) : dir_(config.output_dir) {
    doc_["command"] = std::move(command);
    doc_["config_echo"] = config.echo;
    doc_["residuals"] = json::object();
    doc_["measurements"] = json::object();
    doc_["files"] = json::array();
    doc_["notes"] = json::array();
    fs::create_directories(dir_);
  }

  fs::path path(const std::string& name) const { return dir_ / name; }

  void add_file(const fs::path& p) {
    doc_["files"].push_back({{"path", p.string()}, {"bytes", fs::file_size(p)}});
  }

  void add_report(const ExperimentReport& report) {
    for (const auto& r : report.residuals) {
      json entry = {{"value", r.value}, {"upper", r.upper}, {"pass", r.pass}};
      if (std::isfinite(r.lower)) entry["lower"] = r.lower;
      doc_["residuals"][r.name] = entry;
    }
    for (const auto& [k, v] : report.measurements) doc_["measurements"][k] = v;
    for (const auto& n : report.notes) doc_["notes"].push_back(n);
    for (const auto& [k, v] : report.inputs) doc_["inputs"][k] = v;
  }

  json& operator[](const char* key) { return doc_[key]; }

  void write(const std::string& status) {
    doc_["status"] = status;
    std::ofstream out(path("summary.json"));
    out << doc_.dump(2) << '\n';
    if (!out) throw Error(ErrorCode::io_error, "cannot write " + path("summary.json").string());
  }

 private:
  fs::path dir_;
  json doc_;
};

void write_run_outputs(Summary& summary, const RunResult& result) {
  const fs::path csv = summary.path("timeseries.csv");
  write_timeseries_csv(csv, result.records);
  summary.add_file(csv);
  const fs::path snap = summary.path("final.rnls");
  write_snapshot(snap, result.final_field, result.t_final);
  summary.add_file(snap);
  summary["run"] = {{"status", to_string(result.status)},
                    {"t_final", result.t_final},
                    {"final_frame", to_string(result.final_frame)},
                    {"records", result.records.size()}};
  if (result.t_detect) summary["run"]["t_detect"] = *result.t_detect;
}

int simulate(const RunConfig& config) {
  Summary summary("simulate", config);
  const ComplexField psi0 = make_initial_state(config);
  const RunResult result = run(psi0, config.model, config.params);
  write_run_outputs(summary, result);
  if (result.status == RunStatus::completed && result.records.size() >= 3) {
    // Conservation residuals are informational here; they do not set the exit code.
    summary.add_report(verify_balance_laws(result, config.model));
  }
  summary.write(to_string(result.status));
  switch (result.status) {
    case RunStatus::completed: return kPass;
    case RunStatus::blowup_detected: return kBlowup;
    case RunStatus::unresolved: return kVerdictFail;
  }
  return kError;
}

int finish(Summary& summary, const ExperimentReport& report) {
  summary.add_report(report);
  const bool ok = report.pass();
  summary.write(ok ? "pass" : "fail");
  return ok ? kPass : kVerdictFail;
}

int equivalence(const RunConfig& config) {
  Summary summary("equivalence", config);
  return finish(summary, frame_equivalence(config.model, make_initial_state(config), config.params));
}

int blowup(const RunConfig& config) {
  Summary summary("blowup", config);
  const BlowupOutcome out = blowup_experiment(config.model, make_initial_state(config), config.params);
  write_run_outputs(summary, out.run);
  summary["criterion"] = {{"case", to_string(out.criterion.blowup_case)}, {"reason", out.criterion.reason}};
  if (out.criterion.alpha_omega) summary["criterion"]["alpha_omega"] = *out.criterion.alpha_omega;
  if (out.criterion.sigma_threshold) summary["criterion"]["sigma_threshold"] = *out.criterion.sigma_threshold;
  if (out.criterion.t_star_bound) summary["criterion"]["t_star_bound"] = *out.criterion.t_star_bound;
  return finish(summary, out.report);
}

int virial(const RunConfig& config) {
  Summary summary("virial", config);
  const RunResult result = run(make_initial_state(config), config.model, config.params);
  write_run_outputs(summary, result);
  return finish(summary, verify_virial(result, config.params.dt * config.params.sample_every));
}

int convergence(const RunConfig& config) {
  if (config.dt_list.empty()) throw ValidationError("convergence.dt_list", "required");
  Summary summary("convergence", config);
  return finish(summary, convergence_order(config.model, make_initial_state(config), config.params.t_end,
                                           config.dt_list, config.params.backend));
}

int groundstate(const RunConfig& config) {
  Summary summary("groundstate", config);
  GroundStateOptions opts;
  opts.dtau = config.initial.ground_state_dtau;
  const ComplexField psi = imaginary_time_ground_state(config.model, config.grid(), config.initial.ground_state_tol, opts);
  const fs::path snap = summary.path("ground_state.rnls");
  write_snapshot(snap, psi, 0.0);
  summary.add_file(snap);
  const ObservableRecord r = compute_record(psi, 0.0, config.model);
  summary["measurements"] = {{"mass", r.mass},         {"energy_zero", r.energy_zero},
                             {"energy_omega", r.energy_omega}, {"ang_mom", r.ang_mom},
                             {"variance", r.variance}, {"tail", r.tail}};
  summary.write("completed");
  return kPass;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Rotating nonlinear Schroedinger simulator"};
  app.require_subcommand(1);

  std::string config_path;
  const std::vector<std::pair<std::string, std::string>> config_commands = {
      {"simulate", "Integrate the configured run and write records, snapshot and summary"},
      {"equivalence", "Compare lab-frame and rotating-frame backends"},
      {"blowup", "Blow-up criterion and detection experiment"},
      {"virial", "Check the virial identity on a run"},
      {"convergence", "Measure the time-splitting order"},
      {"groundstate", "Imaginary-time ground state"}};
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, help] : config_commands) {
    subs[name] = app.add_subcommand(name, help);
    subs[name]->add_option("--config", config_path, "Config file")->required();
  }

  double gamma_min = 0, omega = 0;
  auto* alpha = app.add_subcommand("alpha", "Print the rotation-dependent exponent threshold");
  alpha->add_option("--gamma-min", gamma_min, "Smallest trap frequency")->required();
  alpha->add_option("--omega", omega, "Rotation magnitude")->required();

  std::string csv_path, svg_path;
  std::vector<std::string> columns;
  auto* plot = app.add_subcommand("plot", "Render CSV columns to SVG");
  plot->add_option("--csv", csv_path, "Observable CSV")->required();
  plot->add_option("--columns", columns, "Columns to plot")->required()->delimiter(',');
  plot->add_option("--out", svg_path, "Output SVG path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kError;
  }

  try {
    if (alpha->parsed()) {
      std::printf("%.17g\n", alpha_omega(gamma_min, omega));
      return kPass;
    }
    if (plot->parsed()) {
      render_svg_timeseries(csv_path, columns, svg_path);
      return kPass;
    }
    const RunConfig config = load_config(config_path);
    if (subs["simulate"]->parsed()) return simulate(config);
    if (subs["equivalence"]->parsed()) return equivalence(config);
    if (subs["blowup"]->parsed()) return blowup(config);
    if (subs["virial"]->parsed()) return virial(config);
    if (subs["convergence"]->parsed()) return convergence(config);
    if (subs["groundstate"]->parsed()) return groundstate(config);
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}

}  // namespace rotnls
