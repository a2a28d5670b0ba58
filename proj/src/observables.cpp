#include "rotnls/observables.hpp"

#include "rotnls/spectral.hpp"

#include <cmath>

namespace rotnls {

namespace {

constexpr double kResolvedTail = 0.1;

double interaction_density(double rho, double sigma) {
  return sigma == 1.0 ? rho * rho : std::pow(rho, sigma + 1.0);
}

/// Components of A = Omega x x at grid point i.
Point magnetic_potential(const RotationConfig& rot, const Grid& grid, Index i) {
  return rot.omega.cross(grid.point(i));
}

}  // namespace

PotentialSample sample_potential(const Grid& grid, const ModelConfig& model, Frame frame, double t) {
  const Index n = grid.size();
  PotentialSample s{Eigen::ArrayXd(n), Eigen::ArrayXd(n), Eigen::ArrayXd(n)};
  const bool symmetric = axially_symmetric(model);
  const bool rotate = frame == Frame::rotating && !symmetric;
  const Matrix3 R = rotation_matrix(t, model.rotation);
  for (Index i = 0; i < n; ++i) {
    const Point x = rotate ? Point(R * grid.point(i)) : grid.point(i);
    const Point g = potential_gradient(model.trap, x);
    s.value[i] = potential_value(model.trap, x);
    s.x_dot_grad[i] = x.dot(g);
    s.source[i] = symmetric ? 0.0 : model.rotation.omega.cross(x).dot(g);
  }
  return s;
}

ObservableRecord compute_record(const ComplexField& psi, double t, const ModelConfig& model, Frame frame) {
  const Grid& grid = psi.grid();
  const Spectrum spectrum = transform_forward(psi);
  const VectorField<Complex> grad = gradient_from_spectrum(spectrum);
  const PotentialSample pot = sample_potential(grid, model, frame, t);
  const double lambda = model.nonlinearity.lambda;
  const double sigma = model.nonlinearity.sigma;
  const int d = grid.dim();
  const Point& omega = model.rotation.omega;

  // Fixed sequential accumulation order keeps records byte-reproducible.
  double m = 0, kin = 0, pot_e = 0, inter = 0, var = 0, rate = 0, vir = 0, src = 0;
  Complex ang = 0;
  for (Index i = 0; i < grid.size(); ++i) {
    const Complex p = psi[i];
    const double rho = std::norm(p);
    const double nl = interaction_density(rho, sigma);
    double g2 = 0, r2 = 0, xj = 0;
    Complex a_dot_grad = 0;
    const Point x = grid.point(i);
    const Point a = omega.cross(x);
    for (int j = 0; j < d; ++j) {
      const Complex gj = grad[j][i];
      g2 += std::norm(gj);
      r2 += x[j] * x[j];
      xj += x[j] * std::imag(std::conj(p) * gj);
      a_dot_grad += a[j] * gj;
    }
    m += rho;
    kin += g2;
    pot_e += pot.value[i] * rho;
    inter += nl;
    var += r2 * rho;
    rate += xj;
    vir += g2 + lambda * d * sigma / (sigma + 1.0) * nl - pot.x_dot_grad[i] * rho;
    src += rho * pot.source[i];
    ang += std::conj(p) * Complex(0, -1) * a_dot_grad;
  }
  const double dv = grid.cell_volume();
  ObservableRecord r;
  r.t = t;
  r.mass = m * dv;
  r.grad_norm_sq = kin * dv;
  r.energy_zero = (0.5 * kin + pot_e + lambda / (sigma + 1.0) * inter) * dv;
  r.ang_mom = std::real(ang) * dv;
  r.energy_omega = r.energy_zero - r.ang_mom;
  r.variance = 0.5 * var * dv;
  r.variance_rate = rate * dv;
  r.virial_rhs = vir * dv;
  r.lmom_source = src * dv;
  r.tail = r.mass > 0 ? tail_fraction_from_spectrum(spectrum) : 0.0;
  r.resolved = r.tail < kResolvedTail;
  r.energy_magnetic = 0;
  {
    // Same accumulation layout as energy_zero so that Omega = 0 reproduces it bit for bit.
    double kin_mag = 0, pot_eff = 0;
    for (Index i = 0; i < grid.size(); ++i) {
      const Complex p = psi[i];
      const Point a = magnetic_potential(model.rotation, grid, i);
      double k2 = 0;
      for (int j = 0; j < d; ++j) k2 += std::norm(Complex(0, -1) * grad[j][i] - a[j] * p);
      kin_mag += k2;
      pot_eff += (pot.value[i] - 0.5 * a.squaredNorm()) * std::norm(p);
    }
    r.energy_magnetic = (0.5 * kin_mag + pot_eff + lambda / (sigma + 1.0) * inter) * dv;
  }
  return r;
}

double energy_magnetic_form(const ComplexField& psi, const ModelConfig& model) {
  const ObservableRecord r = compute_record(psi, 0.0, model, Frame::lab);
  if (!r.resolved) throw Error(ErrorCode::unresolved_field, "field is under-resolved (tail >= 0.1)");
  return r.energy_magnetic;
}

Complex angular_momentum_integral(const ComplexField& psi, const RotationConfig& rot) {
  const Grid& grid = psi.grid();
  const VectorField<Complex> grad = gradient(psi);
  Complex acc = 0;
  for (Index i = 0; i < grid.size(); ++i) {
    const Point a = magnetic_potential(rot, grid, i);
    Complex a_dot_grad = 0;
    for (int j = 0; j < grid.dim(); ++j) a_dot_grad += a[j] * grad[j][i];
    acc += std::conj(psi[i]) * Complex(0, -1) * a_dot_grad;
  }
  return acc * grid.cell_volume();
}

RealField density(const ComplexField& psi) { return RealField(psi.grid(), psi.values().abs2()); }

VectorField<double> current_density(const ComplexField& psi) {
  const VectorField<Complex> grad = gradient(psi);
  VectorField<double> j{psi.grid(), {}};
  for (int a = 0; a < grad.dim(); ++a) j.components.push_back((psi.values().conjugate() * grad[a]).imag());
  return j;
}

double continuity_residual(const ComplexField& psi_prev, const ComplexField& psi_next, double dt,
                           const RotationConfig& rot) {
  const Grid& grid = psi_prev.grid();
  if (tail_fraction(psi_prev) >= kResolvedTail || tail_fraction(psi_next) >= kResolvedTail) {
    throw Error(ErrorCode::unresolved_field, "continuity residual needs resolved states");
  }
  const double target_mass = 0.5 * (mass(psi_prev) + mass(psi_next));
  ComplexField mid(grid, 0.5 * (psi_prev.values() + psi_next.values()));
  mid.values() *= std::sqrt(target_mass / mass(mid));

  const Eigen::ArrayXd drho_dt = (psi_next.values().abs2() - psi_prev.values().abs2()) / dt;
  const VectorField<double> current = current_density(mid);
  const VectorField<Complex> grad_rho = gradient(ComplexField(grid, mid.values().abs2().cast<Complex>()));

  Eigen::ArrayXd rhs = Eigen::ArrayXd::Zero(grid.size());
  for (int j = 0; j < grid.dim(); ++j) {
    const VectorField<Complex> dj = gradient(ComplexField(grid, current[j].cast<Complex>()));
    rhs -= dj[j].real();
  }
  if (!rot.omega.isZero(0.0)) {
    for (Index i = 0; i < grid.size(); ++i) {
      const Point a = magnetic_potential(rot, grid, i);
      for (int j = 0; j < grid.dim(); ++j) rhs[i] += a[j] * grad_rho[j][i].real();
    }
  }
  return std::sqrt(integrate(grid, (drho_dt - rhs).square()));
}

double angular_momentum_balance(const std::vector<ObservableRecord>& records) {
  if (records.size() < 3) throw Error(ErrorCode::too_few_samples, "angular momentum balance needs >= 3 records");
  const double l0 = records.front().ang_mom;
  double integral = 0, worst = 0;
  for (size_t k = 1; k < records.size(); ++k) {
    const double h = records[k].t - records[k - 1].t;
    integral += 0.5 * h * (records[k].lmom_source + records[k - 1].lmom_source);
    worst = std::max(worst, std::abs(records[k].ang_mom + integral - l0));
  }
  return worst;
}

}  // namespace rotnls
