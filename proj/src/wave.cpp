#include "ostwave/wave.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <string>

namespace ostwave {

namespace {

constexpr double kPi = std::numbers::pi;

double pi4() { return kPi * kPi * kPi * kPi; }

// Small divisor of the Stokes hierarchy at mode n: gamma + beta n^2 (2 pi k)^4.
double resonance_divisor(const ModelParams& p, double k, int n) {
  const double w = 2.0 * kPi * k;
  return p.gamma + p.beta * n * n * (w * w * w * w);
}

void require_valid(const ModelParams& p, double k) {
  p.validate();
  if (!(k > 0.0)) throw ConfigError("wave family: k must be positive");
}

// For beta < 0 a linear mode can resonate with the carrier; the Newton
// system degenerates there, so refuse the exact resonance up front.
void require_nonresonant(const ModelParams& p, double k, int n_modes) {
  if (p.beta >= 0.0) return;
  for (int n = 1; n <= n_modes; ++n) {
    const double d = resonance_divisor(p, k, n);
    const double scale = p.gamma + std::abs(p.beta) * n * n *
                             std::pow(2.0 * kPi * k, 4);
    if (std::abs(d) <= 1e-9 * scale)
      throw SingularJacobian("resonant linear mode n = " + std::to_string(n) +
                             " at k = " + std::to_string(k));
  }
}

// gamma v + k^2 d2[ (c - phi) v - beta k^2 v'' ]
SpectralField apply_linearized(const SpectralField& phi, double c, double k,
                               const ModelParams& p, const SpectralField& v) {
  SpectralField inner = c * v - multiply(phi, v);
  inner -= (p.beta * k * k) * differentiate(v, 2);
  SpectralField out = differentiate(inner, 2);
  out *= k * k;
  out += p.gamma * v;
  return out;
}

struct NewtonState {
  Eigen::VectorXd a;  // cosine coefficients 1..N
  double c;
};

SpectralField field_of(const NewtonState& s, const PeriodicGrid& grid) {
  std::vector<double> cosines(s.a.size() + 1, 0.0);
  for (int n = 0; n < s.a.size(); ++n) cosines[n + 1] = s.a[n];
  return SpectralField::from_cosines(grid, cosines);
}

SpectralField raw_residual(const SpectralField& phi, double c, double k,
                           const ModelParams& p) {
  SpectralField d1 = differentiate(phi, 1);
  SpectralField inner = multiply(phi, d1) - c * d1;
  inner += (p.beta * k * k) * differentiate(phi, 3);
  SpectralField out = differentiate(inner, 1);
  out *= k * k;
  out -= p.gamma * phi;
  return out;
}

// Residual vector: cosine modes 1..N of R, then the momentum constraint.
Eigen::VectorXd residual_vector(const NewtonState& s, const PeriodicGrid& grid,
                                double k, double P, const ModelParams& p) {
  const int n = grid.n_modes();
  SpectralField phi = field_of(s, grid);
  SpectralField r = raw_residual(phi, s.c, k, p);
  Eigen::VectorXd out(n + 1);
  for (int m = 1; m <= n; ++m) out[m - 1] = r.cosine_coeff(m);
  out[n] = 0.25 * s.a.squaredNorm() - P;
  return out;
}

Eigen::MatrixXd jacobian(const NewtonState& s, const PeriodicGrid& grid,
                         double k, const ModelParams& p) {
  const int n = grid.n_modes();
  SpectralField phi = field_of(s, grid);
  Eigen::MatrixXd j(n + 1, n + 1);
  std::vector<double> unit(n + 1, 0.0);
  for (int m = 1; m <= n; ++m) {
    unit[m] = 1.0;
    SpectralField v = SpectralField::from_cosines(grid, unit);
    unit[m] = 0.0;
    SpectralField lv = apply_linearized(phi, s.c, k, p, v);
    for (int row = 1; row <= n; ++row) j(row - 1, m - 1) = -lv.cosine_coeff(row);
    j(n, m - 1) = 0.5 * s.a[m - 1];
  }
  SpectralField d2 = differentiate(phi, 2);
  for (int row = 1; row <= n; ++row) j(row - 1, n) = -k * k * d2.cosine_coeff(row);
  j(n, n) = 0.0;
  return j;
}

// Row equilibration before the pivoted factorization: the profile rows are
// graded like n^4 while the momentum row is O(a), and FullPivLU's rank
// threshold is relative to the largest pivot.
struct ScaledLU {
  Eigen::FullPivLU<Eigen::MatrixXd> lu;
  Eigen::VectorXd row_scale;

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
    return lu.solve(rhs.cwiseQuotient(row_scale));
  }
};

ScaledLU factor_or_throw(const Eigen::MatrixXd& j) {
  Eigen::VectorXd scale = j.cwiseAbs().rowwise().maxCoeff();
  for (int i = 0; i < scale.size(); ++i)
    if (scale[i] <= 0.0) scale[i] = 1.0;
  ScaledLU f{Eigen::FullPivLU<Eigen::MatrixXd>(scale.cwiseInverse().asDiagonal() * j),
             std::move(scale)};
  f.lu.setThreshold(1e-13);
  if (!f.lu.isInvertible())
    throw SingularJacobian("Newton system is singular to working precision");
  return f;
}

TravelingWave finish_wave(const NewtonState& s, const PeriodicGrid& grid,
                          double k, double P, const ModelParams& p) {
  TravelingWave w{p, k, P, s.c, field_of(s, grid), 0.0};
  SpectralField r = raw_residual(w.phi, w.c, k, p);
  const double mom = std::abs(0.25 * s.a.squaredNorm() - P);
  w.residual_norm = std::max(r.max_abs_coeff(), mom);
  return w;
}

}  // namespace

// ---- closed forms ---------------------------------------------------------

double linear_speed(const ModelParams& p, double k) {
  return p.gamma / (4.0 * kPi * kPi * k * k) - 4.0 * p.beta * kPi * kPi * k * k;
}

double stokes_a2(const ModelParams& p, double k) {
  const double denom = 3.0 * (p.gamma + 64.0 * p.beta * std::pow(k, 4) * pi4());
  const double scale = 3.0 * (p.gamma + 64.0 * std::abs(p.beta) * std::pow(k, 4) * pi4());
  if (std::abs(denom) <= 1e-12 * scale)
    throw DegenerateStokes("second harmonic resonates at k = " + std::to_string(k));
  return 2.0 * k * k * kPi * kPi / denom;
}

double omega0(const ModelParams& p, double k) { return k * linear_speed(p, k); }

double omega0_prime(const ModelParams& p, double k) {
  return -p.gamma / (4.0 * kPi * kPi * k * k) - 12.0 * p.beta * kPi * kPi * k * k;
}

double omega0_second(const ModelParams& p, double k) {
  return p.gamma / (2.0 * kPi * kPi * k * k * k) - 24.0 * p.beta * kPi * kPi * k;
}

double omega2(const ModelParams& p, double k) { return k * stokes_a2(p, k); }

StokesExpansion stokes_expansion(const ModelParams& p, double k, double a) {
  require_valid(p, k);
  const double a2 = stokes_a2(p, k);
  StokesExpansion s;
  s.params = p;
  s.k = k;
  s.a = a;
  s.a2 = a2;
  s.c = linear_speed(p, k) + a * a * a2;
  s.cosines = {0.0, a, 2.0 * a * a * a2};
  return s;
}

// ---- solver ----------------------------------------------------------------

TravelingWave stokes_seed(const ModelParams& p, double k, double a,
                          const PeriodicGrid& grid) {
  StokesExpansion s = stokes_expansion(p, k, a);
  SpectralField phi = SpectralField::from_cosines(grid, s.cosines);
  const double P = 0.5 * inner_product(phi, phi).real();
  TravelingWave w{p, k, P, s.c, phi, 0.0};
  w.residual_norm = profile_residual(w).max_abs_coeff();
  return w;
}

SpectralField profile_residual(const TravelingWave& w) {
  return raw_residual(w.phi, w.c, w.k, w.params);
}

TravelingWave refine(const TravelingWave& guess, const SolverOptions& opts) {
  require_valid(guess.params, guess.k);
  require_nonresonant(guess.params, guess.k, guess.phi.n_modes());
  const PeriodicGrid& grid = guess.phi.grid();
  const int n = grid.n_modes();

  NewtonState s;
  s.a.resize(n);
  for (int m = 1; m <= n; ++m) s.a[m - 1] = guess.phi.cosine_coeff(m);
  s.c = guess.c;

  for (int it = 0; it < opts.max_iter; ++it) {
    Eigen::VectorXd res = residual_vector(s, grid, guess.k, guess.P, guess.params);
    if (res.lpNorm<Eigen::Infinity>() < opts.newton_tol)
      return finish_wave(s, grid, guess.k, guess.P, guess.params);
    auto lu = factor_or_throw(jacobian(s, grid, guess.k, guess.params));
    Eigen::VectorXd dx = lu.solve(-res);
    s.a += dx.head(n);
    s.c += dx[n];
  }
  throw NoConvergence("Newton did not reach " + std::to_string(opts.newton_tol) +
                      " in " + std::to_string(opts.max_iter) + " iterations at k = " +
                      std::to_string(guess.k) + ", P = " + std::to_string(guess.P));
}

TravelingWave continue_family(const TravelingWave& start, double k_target,
                              double P_target, int steps,
                              const SolverOptions& opts) {
  if (steps < 1) steps = 1;
  const double min_dt = 1.0 / 1024.0;
  TravelingWave cur = start;
  double t = 0.0;
  double dt = 1.0 / steps;
  while (t < 1.0 - 1e-14) {
    dt = std::min(dt, 1.0 - t);
    double tn = t + dt;
    if (tn > 1.0 - 1e-14) tn = 1.0;
    TravelingWave trial = cur;
    trial.k = start.k + tn * (k_target - start.k);
    trial.P = start.P + tn * (P_target - start.P);
    try {
      cur = refine(trial, opts);
      t = tn;
    } catch (const NoConvergence&) {
      dt *= 0.5;
      if (dt < min_dt)
        throw ContinuationStalled("step fell below 2^-10 of the segment at t = " +
                                  std::to_string(t));
    } catch (const SingularJacobian&) {
      dt *= 0.5;
      if (dt < min_dt)
        throw ContinuationStalled("singular Jacobian pinned the continuation at t = " +
                                  std::to_string(t));
    }
  }
  return cur;
}

TravelingWave solve_wave(const ModelParams& p, double k, double P,
                         const PeriodicGrid& grid, const SolverOptions& opts) {
  if (!(P > 0.0)) throw ConfigError("solve_wave: P must be positive");
  const double a = 2.0 * std::sqrt(P);
  TravelingWave seed = stokes_seed(p, k, a, grid);
  seed.P = P;
  try {
    return refine(seed, opts);
  } catch (const NoConvergence&) {
    // grow the wave from deep inside the Stokes regime instead
  }
  TravelingWave small = stokes_seed(p, k, 1e-3, grid);
  small = refine(small, opts);
  return continue_family(small, k, P, 8, opts);
}

// ---- conserved densities ---------------------------------------------------

double hamiltonian(const TravelingWave& w) {
  const double k = w.k;
  const SpectralField phi2 = multiply(w.phi, w.phi);
  const double cubic = inner_product(phi2, w.phi).real();
  const SpectralField d1 = differentiate(w.phi, 1);
  const SpectralField i1 = antiderivative(w.phi, 1);
  return cubic / 6.0 + 0.5 * w.params.gamma / (k * k) * inner_product(i1, i1).real() -
         0.5 * w.params.beta * k * k * inner_product(d1, d1).real();
}

double modulation_flux(const TravelingWave& w) {
  const double k = w.k;
  const SpectralField phi2 = multiply(w.phi, w.phi);
  const double cubic = inner_product(phi2, w.phi).real();
  const SpectralField d1 = differentiate(w.phi, 1);
  const SpectralField i1 = antiderivative(w.phi, 1);
  return -cubic / 3.0 + 1.5 * w.params.beta * k * k * inner_product(d1, d1).real() +
         0.5 * w.params.gamma / (k * k) * inner_product(i1, i1).real();
}

// ---- parameter jet ----------------------------------------------------------

WaveJet parameter_jet(const TravelingWave& w, const SolverOptions& opts) {
  (void)opts;
  const PeriodicGrid& grid = w.phi.grid();
  const int n = grid.n_modes();

  NewtonState s;
  s.a.resize(n);
  for (int m = 1; m <= n; ++m) s.a[m - 1] = w.phi.cosine_coeff(m);
  s.c = w.c;
  auto lu = factor_or_throw(jacobian(s, grid, w.k, w.params));

  // d/dP: the momentum row moves, the profile rows do not.
  Eigen::VectorXd rhs_p = Eigen::VectorXd::Zero(n + 1);
  rhs_p[n] = 1.0;
  Eigen::VectorXd xp = lu.solve(rhs_p);

  // d/dk: move the explicit k-dependence of R to the right-hand side,
  //   dR/dk = 2k (-c phi' + phi phi' + 2 beta k^2 phi''')'.
  SpectralField d1 = differentiate(w.phi, 1);
  SpectralField inner = multiply(w.phi, d1) - w.c * d1;
  inner += (2.0 * w.params.beta * w.k * w.k) * differentiate(w.phi, 3);
  SpectralField drdk = differentiate(inner, 1);
  drdk *= 2.0 * w.k;
  Eigen::VectorXd rhs_k(n + 1);
  for (int m = 1; m <= n; ++m) rhs_k[m - 1] = -drdk.cosine_coeff(m);
  rhs_k[n] = 0.0;
  Eigen::VectorXd xk = lu.solve(rhs_k);

  auto to_field = [&](const Eigen::VectorXd& x) {
    std::vector<double> cosines(n + 1, 0.0);
    for (int m = 1; m <= n; ++m) cosines[m] = x[m - 1];
    return SpectralField::from_cosines(grid, cosines);
  };
  return WaveJet{to_field(xk), to_field(xp), xk[n], xp[n]};
}

}  // namespace ostwave
