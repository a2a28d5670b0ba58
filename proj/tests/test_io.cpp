#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rotnls/cli.hpp"
#include "rotnls/config.hpp"
#include "rotnls/io.hpp"

#include "json.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace rotnls;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "rotnls_test_io";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  out << s;
}

const char* kMinimal = R"(# minimal 2D run
grid.dimension = 2
grid.n = 64, 64
grid.box = 8, 8
trap.gamma = 1, 1
rotation.omega = 0.5
nonlinearity.lambda = 1
nonlinearity.sigma = 1
time.dt = 1e-3
time.t_end = 1
run.backend = lab
)";

ObservableRecord some_record(double t) {
  ObservableRecord r;
  r.t = t;
  r.mass = 1.0 / 3.0;
  r.energy_omega = -std::sqrt(2.0);
  r.energy_zero = 1e-300;
  r.energy_magnetic = 12345.678901234567;
  r.ang_mom = -0.0;
  r.variance = std::numbers::pi;
  r.variance_rate = 5e-324;
  r.grad_norm_sq = 1e300;
  r.virial_rhs = 0.1;
  r.lmom_source = -7.25;
  r.tail = 2.5e-17;
  return r;
}

int call_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "rotnls");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("minimal config") {
  const RunConfig c = parse_config(kMinimal);
  CHECK(c.model.dim == 2);
  CHECK(c.n == std::vector<Index>{64, 64});
  CHECK(c.model.rotation.omega == Point(0, 0, 0.5));
  CHECK(c.params.backend == Backend::lab_frame);
  CHECK(c.params.dt == 1e-3);
  CHECK(c.params.sample_every == 10);
  CHECK(c.params.blowup_grad_factor == 100.0);
  CHECK(c.params.blowup_tail == 1e-3);
  CHECK(c.initial.kind == InitialKind::gaussian);
  CHECK(c.echo.at("grid.n") == "64, 64");
  CHECK(c.grid().size() == 4096);
}

TEST_CASE("config errors") {
  SUBCASE("missing dt") {
    std::string text = kMinimal;
    text.replace(text.find("time.dt = 1e-3\n"), 15, "");
    try {
      parse_config(text);
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(e.field() == "time.dt");
      CHECK(e.reason() == "required");
    }
  }
  SUBCASE("energy-supercritical") {
    const std::string text = R"(grid.dimension = 3
grid.n = 16
grid.box = 4
trap.gamma = 1
nonlinearity.lambda = -1
nonlinearity.sigma = 2.5
time.dt = 1e-3
time.t_end = 1
)";
    CHECK_THROWS_AS(parse_config(text), ValidationError);
    std::string at_bound = text;
    at_bound.replace(at_bound.find("2.5"), 3, "2");
    CHECK_THROWS_AS(parse_config(at_bound), ValidationError);
  }
  SUBCASE("unknown key carries its line") {
    try {
      parse_config(std::string(kMinimal) + "trap.bogus = 3\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 12);
    }
  }
  SUBCASE("malformed lines") {
    CHECK_THROWS_AS(parse_config("grid.dimension 2\n"), ParseError);
    CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "time.dt = 2e-3\n"), ParseError);
    std::string text = kMinimal;
    text.replace(text.find("1e-3"), 4, "abc");
    CHECK_THROWS_AS(parse_config(text), ParseError);
  }
  SUBCASE("grid sizes") {
    std::string text = kMinimal;
    text.replace(text.find("64, 64"), 6, "48, 64");
    try {
      parse_config(text);
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(e.field() == "grid.n");
    }
  }
  SUBCASE("fast rotation is allowed for simulation") {
    std::string text = kMinimal;
    text.replace(text.find("omega = 0.5"), 11, "omega = 2.5");
    CHECK_NOTHROW(parse_config(text));
  }
}

TEST_CASE("CSV layout") {
  const fs::path p = scratch("one.csv");
  write_timeseries_csv(p, {some_record(0.0)});
  const std::string text = slurp(p);
  const std::string header =
      "t,mass,energy_omega,energy_zero,energy_magnetic,ang_mom,variance,variance_rate,grad_norm_sq,virial_rhs,"
      "lmom_source,tail\n";
  CHECK(text.substr(0, header.size()) == header);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  CHECK(text.back() == '\n');
  CHECK(text.find(",\n") == std::string::npos);
}

TEST_CASE("CSV round trip is bit exact") {
  const fs::path p = scratch("many.csv");
  std::vector<ObservableRecord> recs;
  for (int k = 0; k < 5; ++k) recs.push_back(some_record(0.1 * k));
  write_timeseries_csv(p, recs);
  const Timeseries ts = read_timeseries_csv(p);
  REQUIRE(ts.rows.size() == 5);
  CHECK(ts.columns == timeseries_columns());
  for (int k = 0; k < 5; ++k) {
    const auto& r = recs[k];
    const double expected[] = {r.t,        r.mass,          r.energy_omega, r.energy_zero, r.energy_magnetic, r.ang_mom,
                               r.variance, r.variance_rate, r.grad_norm_sq, r.virial_rhs,  r.lmom_source,     r.tail};
    for (std::size_t c = 0; c < 12; ++c) CHECK(std::memcmp(&ts.rows[k][c], &expected[c], sizeof(double)) == 0);
  }
}

TEST_CASE("CSV refuses empty input") {
  const fs::path p = scratch("empty.csv");
  fs::remove(p);
  CHECK_THROWS_AS(write_timeseries_csv(p, {}), Error);
  CHECK_FALSE(fs::exists(p));
}

TEST_CASE("snapshot round trip") {
  const Grid g = make_grid(2, {64, 64}, {8.0, 6.0});
  std::mt19937 rng(5);
  std::normal_distribution<double> nd;
  ComplexField psi(g);
  for (Index i = 0; i < psi.size(); ++i) psi[i] = Complex(nd(rng), nd(rng));
  const fs::path p = scratch("a.rnls");
  write_snapshot(p, psi, 0.375);
  CHECK(fs::file_size(p) == 65580);
  CHECK(snapshot_size(g) == 65580);
  const auto [back, t] = read_snapshot(p);
  CHECK(t == 0.375);
  CHECK(back.grid() == g);
  CHECK(std::memcmp(back.values().data(), psi.values().data(), sizeof(Complex) * psi.size()) == 0);
  const std::string bytes = slurp(p);
  CHECK(bytes.substr(0, 4) == "RNLS");
  CHECK(bytes[4] == 1);
  CHECK(bytes[8] == 2);

  const Grid g3 = make_grid(3, {8, 4, 16}, {1.0, 2.0, 3.0});
  ComplexField psi3(g3);
  for (Index i = 0; i < psi3.size(); ++i) psi3[i] = Complex(nd(rng), nd(rng));
  write_snapshot(p, psi3, -2.0);
  const auto [back3, t3] = read_snapshot(p);
  CHECK(back3.grid() == g3);
  CHECK(l2_distance(back3, psi3) == 0.0);
}

TEST_CASE("snapshot errors") {
  const Grid g = make_grid(2, {8, 8}, {1.0, 1.0});
  const fs::path p = scratch("b.rnls");
  write_snapshot(p, ComplexField(g), 0.0);
  const std::string good = slurp(p);
  auto code = [&](const std::string& bytes) {
    spit(p, bytes);
    try {
      read_snapshot(p);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::invalid_argument;
  };
  CHECK(code(good.substr(0, good.size() - 3)) == ErrorCode::size_mismatch);
  CHECK(code(good.substr(0, 10)) == ErrorCode::size_mismatch);
  CHECK(code("XNLS" + good.substr(4)) == ErrorCode::bad_magic);
  std::string v2 = good;
  v2[4] = 2;
  CHECK(code(v2) == ErrorCode::version_mismatch);
  CHECK(code(good + "x") == ErrorCode::size_mismatch);
  fs::remove(p);
  try {
    read_snapshot(p);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::io_error);
  }
}

TEST_CASE("SVG rendering") {
  const fs::path csv = scratch("plot.csv");
  std::vector<ObservableRecord> recs;
  for (int k = 0; k < 10; ++k) {
    ObservableRecord r;
    r.t = 0.1 * k;
    r.mass = 1.0;
    r.grad_norm_sq = std::exp(k);
    recs.push_back(r);
  }
  write_timeseries_csv(csv, recs);
  const fs::path a = scratch("a.svg"), b = scratch("b.svg");
  render_svg_timeseries(csv, {"mass"}, a);
  render_svg_timeseries(csv, {"mass"}, b);
  const std::string svg = slurp(a);
  CHECK(svg == slurp(b));
  CHECK(svg.find("flat") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);

  render_svg_timeseries(csv, {"grad_norm_sq", "mass"}, a);
  const std::string two = slurp(a);
  CHECK(two.find("flat") == std::string::npos);
  std::size_t lines = 0;
  for (auto pos = two.find("<polyline"); pos != std::string::npos; pos = two.find("<polyline", pos + 1)) ++lines;
  CHECK(lines == 2);
  CHECK(two.find(">grad_norm_sq<") != std::string::npos);

  try {
    render_svg_timeseries(csv, {"nope"}, a);
    FAIL("expected UnknownColumn");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::unknown_column);
  }
}

TEST_CASE("cli simulate writes outputs and a manifest") {
  const fs::path dir = scratch("cli_sim");
  fs::remove_all(dir);
  const fs::path cfg = scratch("sim.cfg");
  spit(cfg, std::string(kMinimal) + "output.dir = " + dir.string() + "\ntime.t_end = 0.05\n");
  // the repeated key is rejected; use a clean file instead
  CHECK(call_cli({"simulate", "--config", cfg.string()}) == 1);
  std::string text = kMinimal;
  text.replace(text.find("time.t_end = 1"), 14, "time.t_end = 0.05");
  spit(cfg, text + "output.dir = " + dir.string() + "\n");
  CHECK(call_cli({"simulate", "--config", cfg.string()}) == 0);

  const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  CHECK(summary["status"] == "completed");
  CHECK(summary["config_echo"]["grid.n"] == "64, 64");
  REQUIRE(summary["files"].size() == 2);
  for (const auto& f : summary["files"]) CHECK(f["bytes"].get<std::uintmax_t>() == fs::file_size(f["path"].get<std::string>()));
  CHECK(fs::file_size(dir / "final.rnls") == 65580);
  const std::string first = slurp(dir / "timeseries.csv");
  CHECK(call_cli({"simulate", "--config", cfg.string()}) == 0);
  CHECK(slurp(dir / "timeseries.csv") == first);
}

TEST_CASE("cli exit codes") {
  CHECK(call_cli({"alpha", "--gamma-min", "1", "--omega", "0"}) == 0);
  CHECK(call_cli({"alpha", "--gamma-min", "1", "--omega", "1"}) == 1);
  CHECK(call_cli({"simulate", "--config", scratch("missing.cfg").string()}) == 1);
  CHECK(call_cli({"frobnicate"}) == 1);
  CHECK(call_cli({"plot", "--csv", scratch("many.csv").string(), "--columns", "nope", "--out", scratch("x.svg").string()}) == 1);
}

TEST_CASE("cli initial state from a snapshot") {
  const RunConfig c = parse_config(kMinimal);
  const ComplexField psi = vortex_state(c.grid(), Point::Zero(), 1.0, 1.0);
  const fs::path snap = scratch("init.rnls");
  write_snapshot(snap, psi, 0.0);
  RunConfig from_file = parse_config(std::string(kMinimal) + "initial.type = file\ninitial.path = " + snap.string() + "\n");
  CHECK(l2_distance(make_initial_state(from_file), psi) == 0.0);

  RunConfig wrong = parse_config(std::string(kMinimal) + "initial.type = file\ninitial.path = " + snap.string() + "\n");
  wrong.n = {32, 32};
  CHECK_THROWS_AS(make_initial_state(wrong), ValidationError);
  CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "initial.type = file\n"), ValidationError);
}
