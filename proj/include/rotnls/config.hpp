#pragma once

#include "rotnls/model.hpp"
#include "rotnls/propagators.hpp"

#include <map>
#include <string>
#include <vector>

namespace rotnls {

enum class InitialKind { gaussian, vortex, ground_state, file };

struct InitialState {
  InitialKind kind = InitialKind::gaussian;
  Point center = Point::Zero();
  double width = 1;
  double amplitude = 1;
  std::string path;
  double ground_state_tol = 1e-10;
  double ground_state_dtau = 0.01;
};

struct RunConfig {
  ModelConfig model;
  std::vector<Index> n;
  std::vector<double> box;
  SimParams params;
  InitialState initial;
  std::string output_dir = "out";
  std::vector<double> dt_list;
  /// Every key as written in the document, whitespace-trimmed.
  std::map<std::string, std::string> echo;

  Grid grid() const { return make_grid(model.dim, n, box); }
};

/// Flat `section.key = value` lines, `#` comments, comma-separated lists.
/// Throws ParseError (malformed line, unknown or repeated key, bad number)
/// or ValidationError (missing required key, out-of-range value).
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Initial datum on the config grid.
ComplexField make_initial_state(const RunConfig& config);

/// Gaussian A exp(-|x-c|^2 / (2 w^2)) with unit mass at A = 1.
ComplexField gaussian_state(const Grid& grid, const Point& center, double width, double amplitude);
/// (x1 + i x2) / w times the Gaussian, unit mass at A = 1; the l = 1 vortex.
ComplexField vortex_state(const Grid& grid, const Point& center, double width, double amplitude);

}  // namespace rotnls
