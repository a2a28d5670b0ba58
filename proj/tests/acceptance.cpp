// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include "oracles.hpp"
#include "rotnls/cli.hpp"
#include "rotnls/config.hpp"
#include "rotnls/diagnostics.hpp"
#include "rotnls/io.hpp"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace rotnls;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [violated]");
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

ModelConfig model_2d(Point gamma, double omega, double lambda, double sigma = 1.0) {
  ModelConfig m;
  m.trap.gamma = gamma;
  m.rotation = RotationConfig::planar(omega);
  m.nonlinearity = {lambda, sigma};
  return m;
}

const Grid& standard_grid() {
  static const Grid g = make_grid(2, {128, 128}, {8.0, 8.0});
  return g;
}

/// d=2, n=128, L=8, gamma=(1,2), |Omega|=0.5, lambda=1, sigma=1.
ModelConfig standard_model() { return model_2d(Point(1, 2, 0), 0.5, 1.0); }

ComplexField standard_initial() { return gaussian_state(standard_grid(), Point(1.0, 0.5, 0), 1.0, 1.0); }

SimParams params(double dt, double t_end, Backend backend, int sample_every = 1) {
  SimParams p;
  p.dt = dt;
  p.t_end = t_end;
  p.backend = backend;
  p.sample_every = sample_every;
  p.frame_of_record = Frame::lab;
  return p;
}

template <typename Get>
double max_drift(const RunResult& r, Get get) {
  double worst = 0;
  for (const auto& rec : r.records) worst = std::max(worst, std::abs(get(rec) - get(r.records.front())));
  return worst;
}

/// Runs shared by the conservation and balance criteria.
struct ConservationRuns {
  RunResult aniso[2][2];  // [backend][dt index: 0 -> 2e-3, 1 -> 1e-3]
  RunResult symmetric[2];
};

const ConservationRuns& conservation_runs() {
  static const ConservationRuns runs = [] {
    ConservationRuns r;
    const Backend backends[] = {Backend::rotating_frame, Backend::lab_frame};
    const double dts[] = {2e-3, 1e-3};
    for (int b = 0; b < 2; ++b) {
      for (int k = 0; k < 2; ++k) r.aniso[b][k] = run(standard_initial(), standard_model(), params(dts[k], 1.0, backends[b]));
      r.symmetric[b] = run(standard_initial(), model_2d(Point(1, 1, 0), 0.5, 1.0), params(1e-3, 1.0, backends[b]));
    }
    return r;
  }();
  return runs;
}

Verdict operator_identity() {
  std::mt19937 rng(20240611);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto in = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };
  const Grid g3 = make_grid(3, {32, 32, 32}, {6.0, 6.0, 6.0});

  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const bool three = trial % 5 == 4;
    const Grid& g = three ? g3 : standard_grid();
    ModelConfig m;
    m.dim = three ? 3 : 2;
    m.trap.dim = m.dim;
    m.trap.gamma = Point(in(0.8, 2.0), in(0.8, 2.0), three ? in(0.8, 2.0) : 0.0);
    const double gmin = m.trap.gamma_min();
    Point axis = three ? Point(in(-1, 1), in(-1, 1), in(-1, 1)) : Point(0, 0, 1);
    axis.normalize();
    m.rotation.omega = in(0.0, 0.95) * gmin * axis;
    m.nonlinearity = {in(-2.0, 2.0), in(0.5, 1.9)};

    const Point c(in(-1.5, 1.5), in(-1.5, 1.5), three ? in(-1, 1) : 0.0);
    const Point w(in(0.7, 1.3), in(0.7, 1.3), in(0.7, 1.3));
    const double a = in(-1, 1), b = in(-1, 1), p = in(-1, 1), q = in(-1, 1), s = in(-0.5, 0.5);
    const ComplexField psi = sample(g, [&](const Point& x) {
      const Point y = x - c;
      double e = 0;
      for (int j = 0; j < m.dim; ++j) e += y[j] * y[j] / (2 * w[j] * w[j]);
      return Complex(1 + a * y[0] + b * y[1], p * y[0] + q * y[1] + s * y[0] * y[1]) * std::exp(-e);
    });
    const ObservableRecord r = compute_record(psi, 0.0, m);
    worst = std::max(worst, std::abs(r.energy_magnetic - r.energy_omega) / (1 + std::abs(r.energy_omega)));
  }
  Verdict v;
  v.require(worst <= 1e-8, "max |E_mag - E_Omega|/(1+|E_Omega|) = " + num(worst) + " over 50 cases (tol 1e-8)");
  return v;
}

Verdict eigenstate_evolution() {
  const ModelConfig m = model_2d(Point(1, 1, 0), 0.5, 0.0);
  const ComplexField psi0 = vortex_state(standard_grid(), Point::Zero(), 1.0, 1.0);
  const ComplexField exact(standard_grid(), psi0.values() * std::polar(1.0, -(2.0 - 0.5) * 1.0));
  const double lab = l2_distance(run(psi0, m, params(1e-3, 1.0, Backend::lab_frame, 100)).final_field, exact);
  const RunResult rot_run = run(psi0, m, params(1e-3, 1.0, Backend::rotating_frame, 100));
  const double rot = l2_distance(rot_run.final_field, exact);
  Verdict v;
  v.require(lab <= 1e-5, "lab l2 error " + num(lab) + " (tol 1e-5)");
  v.require(rot_run.final_frame == Frame::lab && rot <= 1e-4, "rotating, frame-mapped l2 error " + num(rot) + " (tol 1e-4)");
  return v;
}

Verdict frame_equivalence_check() {
  const ExperimentReport coarse = frame_equivalence(standard_model(), standard_initial(), params(2e-3, 1.0, Backend::rotating_frame, 10));
  const ExperimentReport fine = frame_equivalence(standard_model(), standard_initial(), params(1e-3, 1.0, Backend::rotating_frame, 10));
  const double dc = coarse.find("field_l2")->value, df = fine.find("field_l2")->value;
  Verdict v;
  v.require(df <= 1e-4, "l2 discrepancy at dt=1e-3: " + num(df) + " (tol 1e-4)");
  v.require(fine.pass(), "invariant series gap " + num(fine.find("invariant_series")->value));
  v.require(df < dc, "decreases under halving (" + num(dc) + " -> " + num(df) + ")");
  return v;
}

Verdict conservation() {
  const ConservationRuns& runs = conservation_runs();
  Verdict v;
  const char* names[] = {"rotating", "lab"};
  for (int b = 0; b < 2; ++b) {
    const RunResult& coarse = runs.aniso[b][0];
    const RunResult& fine = runs.aniso[b][1];
    const double mass = max_drift(fine, [](const auto& r) { return r.mass; }) / fine.records.front().mass;
    const double ec = max_drift(coarse, [](const auto& r) { return r.energy_omega; });
    const double ef = max_drift(fine, [](const auto& r) { return r.energy_omega; });
    v.require(mass <= 1e-10, std::string(names[b]) + " mass drift " + num(mass));
    v.require(ef <= 1e-6, std::string(names[b]) + " E_Omega drift " + num(ef));
    v.require(ec / ef >= 3 && ec / ef <= 5, std::string(names[b]) + " Richardson ratio " + num(ec / ef));

    const RunResult& sym = runs.symmetric[b];
    const double e0 = max_drift(sym, [](const auto& r) { return r.energy_zero; });
    const double l = max_drift(sym, [](const auto& r) { return r.ang_mom; });
    const double eo = max_drift(sym, [](const auto& r) { return r.energy_omega; });
    v.require(e0 <= 1e-6 && l <= 1e-6 && eo <= 1e-6,
              std::string(names[b]) + " symmetric E_0/L/E_Omega drifts " + num(e0) + "/" + num(l) + "/" + num(eo));
  }
  return v;
}

Verdict angular_momentum() {
  const ConservationRuns& runs = conservation_runs();
  Verdict v;
  const char* names[] = {"rotating", "lab"};
  for (int b = 0; b < 2; ++b) {
    const double bc = angular_momentum_balance(runs.aniso[b][0].records);
    const double bf = angular_momentum_balance(runs.aniso[b][1].records);
    const double l = max_drift(runs.aniso[b][1], [](const auto& r) { return r.ang_mom; });
    v.require(bf <= 1e-4, std::string(names[b]) + " balance residual " + num(bf) + " while L drifts " + num(l));
    v.require(bc / bf >= 3 && bc / bf <= 5, std::string(names[b]) + " halving ratio " + num(bc / bf));
    double source = 0;
    for (const auto& r : runs.symmetric[b].records) source = std::max(source, std::abs(r.lmom_source));
    v.require(source <= 1e-12, std::string(names[b]) + " symmetric source " + num(source));
  }
  return v;
}

Verdict virial() {
  Verdict v;
  const Point x0(1.5, -0.5, 0);
  const ModelConfig linear = model_2d(Point(1, 1, 0), 0.0, 0.0);
  const RunResult r = run(gaussian_state(standard_grid(), x0, 1.0, 1.0), linear, params(1e-3, 1.0, Backend::rotating_frame, 10));
  const ExperimentReport rep = verify_virial(r, 1e-2);
  v.require(rep.pass(), "displaced Gaussian residual " + num(rep.find("virial_residual")->value) + " (tol " +
                            num(rep.find("virial_residual")->upper) + ")");

  double worst = 0;
  for (const auto& rec : r.records) {
    const int steps = std::max(1, static_cast<int>(std::lround(rec.t * 4000)));
    const auto y = oracle::moment_ode({0.5 * (x0.squaredNorm() + 1.0), 0.0, 1.0}, 1.0, rec.t, steps);
    worst = std::max(worst, std::abs(rec.variance - y[0]));
  }
  v.require(worst <= 1e-6, "I(t) vs moment ODE " + num(worst) + " (tol 1e-6)");

  const RunResult rot = run(standard_initial(), standard_model(), params(1e-3, 1.0, Backend::rotating_frame, 10));
  const ExperimentReport rrep = verify_virial(rot, 1e-2);
  v.require(rrep.pass(), "rotating anisotropic residual " + num(rrep.find("virial_residual")->value) + " (tol " +
                             num(rrep.find("virial_residual")->upper) + ")");
  return v;
}

Verdict alpha_values() {
  Verdict v;
  const double a0 = alpha_omega(1.0, 0.0);
  const double a6 = alpha_omega(1.0, std::sqrt(8.0 / 9.0));
  v.require(a0 == 2.0, "alpha(1, 0) = " + num(a0));
  v.require(std::abs(a6 - 6.0) <= 1e-12, "alpha(1, sqrt(8/9)) - 6 = " + num(a6 - 6.0));
  bool raised = false;
  try {
    alpha_omega(1.0, 1.0);
  } catch (const Error& e) {
    raised = e.code() == ErrorCode::rotation_exceeds_trap;
  }
  v.require(raised, "RotationExceedsTrap at |Omega| = gamma_min");
  return v;
}

Verdict blowup_case_i() {
  Verdict v;
  // A pi^{-1/2} e^{-|x|^2/2} with E_0(A) = -1 from the radial quadrature oracle.
  const double amp = oracle::bisect([](double a) { return oracle::gaussian_energy_2d(a, -1.0) + 1.0; }, 2.0, 6.0);
  const Grid g = make_grid(2, {256, 256}, {6.0, 6.0});
  const ComplexField psi0 = gaussian_state(g, Point::Zero(), 1.0, amp);
  const ModelConfig focus = model_2d(Point(1, 1, 0), 0.3, -1.0);
  const ObservableRecord r0 = compute_record(psi0, 0.0, focus);
  v.require(std::abs(r0.energy_zero + 1.0) <= 1e-8, "grid E_0(0) = " + num(r0.energy_zero));

  const BlowupReport crit = classify_blowup(focus, r0.energy_zero, r0.energy_omega, r0.variance, r0.variance_rate);
  const double bound = crit.t_star_bound.value_or(0.0);
  const BlowupOutcome out = blowup_experiment(focus, psi0, params(1e-3, 1.3 * bound, Backend::rotating_frame, 1));
  v.require(out.criterion.blowup_case == BlowupCase::axisymmetric_case_i, "case " + std::string(to_string(out.criterion.blowup_case)));
  v.require(out.run.status == RunStatus::blowup_detected, std::string("status ") + to_string(out.run.status));
  v.require(out.report.pass(), "t_detect " + num(out.run.t_detect.value_or(-1)) + " vs bound " + num(bound));

  ModelConfig defocus = focus;
  defocus.nonlinearity.lambda = 1.0;
  const RunResult control = run(psi0, defocus, params(1e-3, 1.3 * bound, Backend::rotating_frame, 10));
  double growth = 0;
  for (const auto& r : control.records) growth = std::max(growth, r.grad_norm_sq / control.records.front().grad_norm_sq);
  v.require(control.status == RunStatus::completed && growth < 2.0,
            std::string("defocusing control ") + to_string(control.status) + ", growth " + num(growth));
  return v;
}

Verdict blowup_case_ii() {
  Verdict v;
  const double alpha = alpha_omega(1.0, 0.5);
  const ModelConfig m = model_2d(Point(1, 1.5, 0), 0.5, -1.0, 1.2);
  v.require(m.nonlinearity.sigma >= alpha / 2, "sigma 1.2 >= alpha/2 = " + num(alpha / 2));
  const Grid g = make_grid(2, {512, 512}, {6.0, 6.0});
  auto eomega = [&](double a) { return compute_record(gaussian_state(g, Point::Zero(), 1.0, a), 0.0, m).energy_omega; };
  const double amp = oracle::bisect([&](double a) { return eomega(a) + 1.0; }, 1.0, 6.0);
  const ComplexField psi0 = gaussian_state(g, Point::Zero(), 1.0, amp);
  const ObservableRecord r0 = compute_record(psi0, 0.0, m);
  v.require(r0.energy_omega < 0, "E_Omega(0) = " + num(r0.energy_omega));

  const BlowupReport crit = classify_blowup(m, r0.energy_zero, r0.energy_omega, r0.variance, r0.variance_rate);
  const double bound = crit.t_star_bound.value_or(0.0);
  const BlowupOutcome out = blowup_experiment(m, psi0, params(1e-3, 1.3 * bound, Backend::rotating_frame, 1));
  v.require(out.criterion.blowup_case == BlowupCase::nonsymmetric_case_ii, "case " + std::string(to_string(out.criterion.blowup_case)));
  v.require(out.run.status == RunStatus::blowup_detected, std::string("status ") + to_string(out.run.status));
  v.require(out.report.pass(), "t_detect " + num(out.run.t_detect.value_or(-1)) + " vs bound " + num(bound));
  return v;
}

Verdict convergence() {
  Verdict v;
  for (auto b : {Backend::rotating_frame, Backend::lab_frame}) {
    const ExperimentReport rep = convergence_order(standard_model(), standard_initial(), 1.0, {0.02, 0.01, 0.005}, b);
    v.require(rep.pass(), std::string(to_string(b)) + " order " + num(rep.find("order")->value));
  }
  return v;
}

Verdict continuity() {
  Verdict v;
  const ModelConfig m = standard_model();
  const ComplexField start = run(standard_initial(), m, params(1e-3, 0.2, Backend::lab_frame, 100)).final_field;
  std::vector<double> res;
  for (double dt : {2e-3, 1e-3, 5e-4}) {
    const ComplexField next = run(start, m, params(dt, dt, Backend::lab_frame)).final_field;
    res.push_back(continuity_residual(start, next, dt, m.rotation));
  }
  const double r1 = res[0] / res[1], r2 = res[1] / res[2];
  v.require(r1 >= 3 && r1 <= 5 && r2 >= 3 && r2 <= 5,
            "residuals " + num(res[0]) + ", " + num(res[1]) + ", " + num(res[2]) + " (ratios " + num(r1) + ", " + num(r2) + ")");

  const ComplexField vortex = vortex_state(standard_grid(), Point::Zero(), 1.0, 1.0);
  const double dt = 1e-3;
  const ComplexField next(standard_grid(), vortex.values() * std::polar(1.0, -1.5 * dt));
  const double stat = continuity_residual(vortex, next, dt, RotationConfig::planar(0.5));
  v.require(stat <= 1e-8, "stationary vortex residual " + num(stat));
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict io_round_trips() {
  Verdict v;
  const fs::path dir = fs::temp_directory_path() / "rotnls_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  std::mt19937 rng(99);
  std::normal_distribution<double> nd;
  ComplexField psi(standard_grid());
  for (Index i = 0; i < psi.size(); ++i) psi[i] = Complex(nd(rng), nd(rng));
  write_snapshot(dir / "field.rnls", psi, 0.625);
  const auto [back, t] = read_snapshot(dir / "field.rnls");
  const bool same = back.grid() == psi.grid() && t == 0.625 &&
                    std::memcmp(back.values().data(), psi.values().data(), sizeof(Complex) * psi.size()) == 0;
  v.require(same, "snapshot bit-identical");

  const std::string config = R"(grid.dimension = 2
grid.n = 64, 64
grid.box = 8, 8
trap.gamma = 1, 2
rotation.omega = 0.5
nonlinearity.lambda = 1
time.dt = 1e-3
time.t_end = 0.2
initial.center = 1, 0.5
)";
  std::string csv[2];
  for (int k = 0; k < 2; ++k) {
    const fs::path out = dir / ("run" + std::to_string(k));
    std::ofstream(dir / "c.cfg") << config << "output.dir = " << out.string() << "\n";
    std::string a0 = "rotnls", a1 = "simulate", a2 = "--config", a3 = (dir / "c.cfg").string();
    char* argv[] = {a0.data(), a1.data(), a2.data(), a3.data()};
    if (cli_main(4, argv) != 0) v.require(false, "simulate exit code");
    csv[k] = slurp(out / "timeseries.csv");
  }
  v.require(!csv[0].empty() && csv[0] == csv[1], "CSV byte-identical across repeated runs");
  return v;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Verdict()>> criteria[] = {
      {"operator identity (magnetic form)", operator_identity},
      {"eigenstate evolution", eigenstate_evolution},
      {"frame equivalence", frame_equivalence_check},
      {"conservation suite", conservation},
      {"angular-momentum balance", angular_momentum},
      {"virial identity", virial},
      {"alpha_Omega values", alpha_values},
      {"blow-up case (i)", blowup_case_i},
      {"blow-up case (ii)", blowup_case_ii},
      {"convergence order", convergence},
      {"continuity equation", continuity},
      {"IO round trips", io_round_trips},
  };
  int failures = 0, index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s [%2d] %s: %s (%.1fs)\n", v.pass ? "PASS" : "FAIL", index, name, v.detail.c_str(), secs);
    std::fflush(stdout);
    failures += v.pass ? 0 : 1;
  }
  std::printf("%d/%d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
