#include "rotnls/config.hpp"

#include "rotnls/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace rotnls {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "grid.dimension",        "grid.n",
      "grid.box",              "trap.gamma",
      "trap.repulsive",        "trap.lattice_amplitude",
      "trap.lattice_wavevector", "rotation.omega",
      "nonlinearity.lambda",   "nonlinearity.sigma",
      "time.dt",               "time.t_end",
      "time.sample_every",     "run.backend",
      "run.frame_of_record",   "run.blowup_grad_factor",
      "run.blowup_tail",       "initial.type",
      "initial.center",        "initial.width",
      "initial.amplitude",     "initial.path",
      "initial.tol",           "initial.dtau",
      "output.dir",            "convergence.dt_list"};
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  int line;
};

class Document {
 public:
  explicit Document(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  const Entry& require(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw ValidationError(key, "required");
    return it->second;
  }

  std::vector<double> numbers(const std::string& key) const {
    const Entry& e = require(key);
    std::vector<double> out;
    std::istringstream ss(e.value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      double v = 0;
      const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
      if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
        throw ParseError(e.line, "'" + key + "' expects numbers, got '" + e.value + "'");
      }
      out.push_back(v);
    }
    return out;
  }

  double number(const std::string& key) const {
    const auto v = numbers(key);
    if (v.size() != 1) throw ParseError(require(key).line, "'" + key + "' expects a single number");
    return v.front();
  }

  double number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

  long integer(const std::string& key) const {
    const double v = number(key);
    if (v != std::floor(v)) throw ParseError(require(key).line, "'" + key + "' expects an integer");
    return static_cast<long>(v);
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    return has(key) ? require(key).value : fallback;
  }

  /// A list of length d; a single value is broadcast to every axis.
  std::vector<double> per_axis(const std::string& key, int d) const {
    auto v = numbers(key);
    if (v.size() == 1) v.assign(d, v.front());
    if (static_cast<int>(v.size()) != d) {
      throw ValidationError(key, "expects " + std::to_string(d) + " values");
    }
    return v;
  }

 private:
  std::map<std::string, Entry> entries_;
};

Document tokenize(const std::string& text) {
  std::map<std::string, Entry> entries;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string content = trim(raw.substr(0, raw.find('#')));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected 'key = value'");
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    if (key.empty()) throw ParseError(line, "empty key");
    if (value.empty()) throw ParseError(line, "empty value for '" + key + "'");
    if (!known_keys().count(key)) throw ParseError(line, "unknown key '" + key + "'");
    if (entries.count(key)) throw ParseError(line, "repeated key '" + key + "'");
    entries.emplace(key, Entry{value, line});
  }
  return Document(std::move(entries));
}

Backend parse_backend(const std::string& s) {
  if (s == "lab" || s == "lab_frame") return Backend::lab_frame;
  if (s == "rotating" || s == "rotating_frame") return Backend::rotating_frame;
  throw ValidationError("run.backend", "expected lab_frame or rotating_frame, got '" + s + "'");
}

Frame parse_frame(const std::string& s) {
  if (s == "lab") return Frame::lab;
  if (s == "rotating") return Frame::rotating;
  throw ValidationError("run.frame_of_record", "expected lab or rotating, got '" + s + "'");
}

InitialKind parse_initial(const std::string& s) {
  if (s == "gaussian") return InitialKind::gaussian;
  if (s == "vortex") return InitialKind::vortex;
  if (s == "ground_state") return InitialKind::ground_state;
  if (s == "file") return InitialKind::file;
  throw ValidationError("initial.type", "expected gaussian, vortex, ground_state or file, got '" + s + "'");
}

void require_positive(double v, const std::string& field) {
  if (!(v > 0) || !std::isfinite(v)) throw ValidationError(field, "must be positive");
}

Point to_point(const std::vector<double>& v) {
  Point p = Point::Zero();
  for (std::size_t j = 0; j < v.size() && j < 3; ++j) p[static_cast<int>(j)] = v[j];
  return p;
}

double gaussian_norm(int d, double width) { return std::pow(std::numbers::pi * width * width, -0.25 * d); }

}  // namespace

RunConfig parse_config(const std::string& text) {
  const Document doc = tokenize(text);
  RunConfig c;
  for (const auto& key : known_keys()) {
    if (doc.has(key)) c.echo[key] = doc.require(key).value;
  }

  const long d = doc.integer("grid.dimension");
  if (d != 2 && d != 3) throw ValidationError("grid.dimension", "must be 2 or 3");
  const int dim = static_cast<int>(d);
  c.model.dim = dim;
  c.model.trap.dim = dim;

  for (double v : doc.per_axis("grid.n", dim)) {
    if (v != std::floor(v) || !is_power_of_two(static_cast<Index>(v)) || v < 4) {
      throw ValidationError("grid.n", "each entry must be a power of two >= 4");
    }
    c.n.push_back(static_cast<Index>(v));
  }
  c.box = doc.per_axis("grid.box", dim);
  for (double v : c.box) require_positive(v, "grid.box");

  c.model.trap.gamma = to_point(doc.per_axis("trap.gamma", dim));
  if (doc.has("trap.repulsive")) {
    const auto flags = doc.per_axis("trap.repulsive", dim);
    for (int j = 0; j < dim; ++j) {
      if (flags[j] != 0 && flags[j] != 1) throw ValidationError("trap.repulsive", "entries must be 0 or 1");
      c.model.trap.repulsive[j] = flags[j] == 1;
    }
  }
  if (doc.has("trap.lattice_amplitude") != doc.has("trap.lattice_wavevector")) {
    throw ValidationError("trap.lattice_wavevector", "lattice needs both amplitude and wavevector");
  }
  if (doc.has("trap.lattice_amplitude")) {
    c.model.trap.lattice = Lattice{doc.number("trap.lattice_amplitude"),
                                   to_point(doc.per_axis("trap.lattice_wavevector", dim))};
  }

  if (doc.has("rotation.omega")) {
    const auto w = doc.numbers("rotation.omega");
    if (dim == 2) {
      if (w.size() != 1) throw ValidationError("rotation.omega", "expects a scalar in two dimensions");
      c.model.rotation = RotationConfig::planar(w.front());
    } else if (w.size() == 1) {
      c.model.rotation = RotationConfig::planar(w.front());
    } else if (w.size() == 3) {
      c.model.rotation.omega = to_point(w);
    } else {
      throw ValidationError("rotation.omega", "expects 1 or 3 values in three dimensions");
    }
  }

  c.model.nonlinearity.lambda = doc.number("nonlinearity.lambda", 0.0);
  c.model.nonlinearity.sigma = doc.number("nonlinearity.sigma", 1.0);
  require_positive(c.model.nonlinearity.sigma, "nonlinearity.sigma");
  if (!energy_subcritical(c.model.nonlinearity, dim)) {
    throw ValidationError("nonlinearity.sigma", "energy-supercritical: sigma < 2/(d-2) required");
  }

  c.params.dt = doc.number("time.dt");
  require_positive(c.params.dt, "time.dt");
  c.params.t_end = doc.number("time.t_end");
  require_positive(c.params.t_end, "time.t_end");
  if (doc.has("time.sample_every")) {
    const long s = doc.integer("time.sample_every");
    if (s < 1) throw ValidationError("time.sample_every", "must be at least 1");
    c.params.sample_every = static_cast<int>(s);
  }
  c.params.backend = parse_backend(doc.text("run.backend", "rotating_frame"));
  c.params.frame_of_record = parse_frame(doc.text("run.frame_of_record", "lab"));
  c.params.blowup_grad_factor = doc.number("run.blowup_grad_factor", c.params.blowup_grad_factor);
  require_positive(c.params.blowup_grad_factor, "run.blowup_grad_factor");
  c.params.blowup_tail = doc.number("run.blowup_tail", c.params.blowup_tail);
  require_positive(c.params.blowup_tail, "run.blowup_tail");
  if ((c.params.backend == Backend::lab_frame || c.params.frame_of_record == Frame::rotating) &&
      !c.model.rotation.axis_aligned()) {
    throw ValidationError("rotation.omega", "the lab backend and frame mapping need rotation about the third axis");
  }

  InitialState& init = c.initial;
  init.kind = parse_initial(doc.text("initial.type", "gaussian"));
  if (doc.has("initial.center")) init.center = to_point(doc.per_axis("initial.center", dim));
  init.width = doc.number("initial.width", 1.0);
  require_positive(init.width, "initial.width");
  init.amplitude = doc.number("initial.amplitude", 1.0);
  init.ground_state_tol = doc.number("initial.tol", init.ground_state_tol);
  require_positive(init.ground_state_tol, "initial.tol");
  init.ground_state_dtau = doc.number("initial.dtau", init.ground_state_dtau);
  require_positive(init.ground_state_dtau, "initial.dtau");
  if (init.kind == InitialKind::file) init.path = doc.require("initial.path").value;

  c.output_dir = doc.text("output.dir", c.output_dir);
  if (doc.has("convergence.dt_list")) {
    c.dt_list = doc.numbers("convergence.dt_list");
    for (double v : c.dt_list) require_positive(v, "convergence.dt_list");
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

ComplexField gaussian_state(const Grid& grid, const Point& center, double width, double amplitude) {
  const double norm = amplitude * gaussian_norm(grid.dim(), width);
  return sample(grid, [&](const Point& x) {
    return Complex(norm * std::exp(-0.5 * (x - center).squaredNorm() / (width * width)), 0.0);
  });
}

ComplexField vortex_state(const Grid& grid, const Point& center, double width, double amplitude) {
  const double norm = amplitude * gaussian_norm(grid.dim(), width) / width;
  return sample(grid, [&](const Point& x) {
    const Point y = x - center;
    return norm * Complex(y[0], y[1]) * std::exp(-0.5 * y.squaredNorm() / (width * width));
  });
}

ComplexField make_initial_state(const RunConfig& config) {
  const Grid grid = config.grid();
  const InitialState& init = config.initial;
  switch (init.kind) {
    case InitialKind::gaussian: return gaussian_state(grid, init.center, init.width, init.amplitude);
    case InitialKind::vortex: return vortex_state(grid, init.center, init.width, init.amplitude);
    case InitialKind::ground_state: {
      GroundStateOptions opts;
      opts.dtau = init.ground_state_dtau;
      ComplexField psi = imaginary_time_ground_state(config.model, grid, init.ground_state_tol, opts);
      psi.values() *= init.amplitude;
      return psi;
    }
    case InitialKind::file: {
      auto [psi, t] = read_snapshot(init.path);
      if (!(psi.grid() == grid)) {
        throw ValidationError("initial.path", "snapshot grid does not match the configured grid");
      }
      return std::move(psi);
    }
  }
  throw Error(ErrorCode::invalid_argument, "unknown initial state");
}

}  // namespace rotnls
