#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "ostwave/errors.hpp"
#include "ostwave/wave.hpp"

using namespace ostwave;

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

SolverOptions tight() {
  SolverOptions o;
  o.newton_tol = 1e-12;
  return o;
}

double coeff_distance(const SpectralField& a, const SpectralField& b) {
  double worst = 0.0;
  for (int n = -a.n_modes(); n <= a.n_modes(); ++n)
    worst = std::max(worst, std::abs(a.coeff(n) - b.coeff(n)));
  return worst;
}

}  // namespace

TEST_CASE("linear speed and Stokes curvature match their closed forms") {
  ModelParams p;  // gamma = beta = 1
  const double c0 = linear_speed(p, 1.0);
  CHECK(std::abs(c0 - (1.0 / (4.0 * kPi2) - 4.0 * kPi2)) < 1e-12);

  const double a2 = stokes_a2(p, 1.0);
  const double a2_exact = 2.0 * kPi2 / (3.0 * (1.0 + 64.0 * kPi2 * kPi2));
  CHECK(std::abs(a2 - a2_exact) < 1e-15);
  CHECK(std::abs(a2 - 1.0553e-3) < 1e-4 * 1.0553e-3);

  // dispersion derivatives: omega0 = k c0(k)
  const double h = 1e-5;
  const double fd1 = (omega0(p, 1.0 + h) - omega0(p, 1.0 - h)) / (2.0 * h);
  CHECK(std::abs(omega0_prime(p, 1.0) - fd1) < 1e-6);
  const double fd2 =
      (omega0(p, 1.0 + h) - 2.0 * omega0(p, 1.0) + omega0(p, 1.0 - h)) / (h * h);
  CHECK(std::abs(omega0_second(p, 1.0) - fd2) < 1e-4);
  CHECK(std::abs(omega2(p, 1.0) - 1.0 * a2) < 1e-15);
}

TEST_CASE("degenerate Stokes denominator is rejected") {
  ModelParams p;
  p.beta = -1.0;
  const double k_res = std::pow(1.0 / (64.0 * kPi2 * kPi2), 0.25);
  CHECK_THROWS_AS(stokes_a2(p, k_res), DegenerateStokes);
  CHECK_THROWS_AS(stokes_expansion(p, k_res, 1e-2), DegenerateStokes);
  CHECK_NOTHROW(stokes_a2(p, 2.0 * k_res));
}

TEST_CASE("seed residual decays at the cubic rate") {
  ModelParams p;
  const double k = 1.0;
  const TravelingWave big = stokes_seed(p, k, 1e-2);
  const TravelingWave small = stokes_seed(p, k, 5e-3);
  CHECK(big.residual_norm > 0.0);
  const double ratio = big.residual_norm / small.residual_norm;
  CHECK(ratio > 6.5);
  CHECK(ratio < 9.5);

  // seed momentum includes the second harmonic
  const double a = 1e-2, a2 = stokes_a2(p, k);
  CHECK(std::abs(big.P - (a * a / 4.0 + std::pow(a * a * a2, 2))) < 1e-18);
  CHECK(std::abs(big.P - stokes_expansion(p, k, a).momentum()) < 1e-18);
}

TEST_CASE("Newton refinement converges and is a fixed point") {
  ModelParams p;
  const TravelingWave seed = stokes_seed(p, 1.0, 1e-2);
  const TravelingWave w = refine(seed, tight());
  CHECK(w.residual_norm < 1e-12);
  CHECK(std::abs(w.P - seed.P) < 1e-15);

  // corrections beyond the seeded expansion enter at O(a^3)
  CHECK(std::abs(w.c - seed.c) < 1e-6);
  CHECK(coeff_distance(w.phi, seed.phi) < 1e-5);

  const TravelingWave w2 = refine(w, tight());
  CHECK(std::abs(w2.c - w.c) < 1e-13 * std::abs(w.c));
  CHECK(coeff_distance(w2.phi, w.phi) < 1e-13);
}

TEST_CASE("momentum constraint and mean-zero gauge hold on refined waves") {
  ModelParams p;
  const TravelingWave w = solve_wave(p, 0.6, 1e-3, PeriodicGrid(48), tight());
  CHECK(std::abs(0.5 * inner_product(w.phi, w.phi).real() - w.P) < 1e-14);
  CHECK(w.phi.is_mean_zero());
  CHECK(std::abs(w.phi.coeff(1).imag()) < 1e-15);  // cosine gauge
  CHECK(profile_residual(w).max_abs_coeff() < 1e-11);
}

TEST_CASE("conserved functionals match pointwise quadrature") {
  ModelParams p;
  const TravelingWave w = solve_wave(p, 1.0, 1e-3, PeriodicGrid(48), tight());
  const double H = hamiltonian(w);
  const double G = modulation_flux(w);

  const SpectralField dphi = differentiate(w.phi);
  const SpectralField iphi = antiderivative(w.phi);
  const int nq = 4 * w.phi.grid().n_points();
  const double k = w.k, beta = p.beta, gamma = p.gamma;

  const double H_quad = oracles::trapezoid(
      [&](double t) {
        const double u = w.phi.eval(t), du = dphi.eval(t), iu = iphi.eval(t);
        return u * u * u / 6.0 - 0.5 * beta * k * k * du * du +
               0.5 * (gamma / (k * k)) * iu * iu;
      },
      nq);
  CHECK(std::abs(H - H_quad) < 1e-10 * std::max(1.0, std::abs(H_quad)));

  const double G_quad = oracles::trapezoid(
      [&](double t) {
        const double u = w.phi.eval(t), du = dphi.eval(t), iu = iphi.eval(t);
        return -u * u * u / 3.0 + 1.5 * beta * k * k * du * du +
               0.5 * (gamma / (k * k)) * iu * iu;
      },
      nq);
  CHECK(std::abs(G - G_quad) < 1e-10 * std::max(1.0, std::abs(G_quad)));
}

TEST_CASE("parameter jet satisfies its normalization identities") {
  ModelParams p;
  const TravelingWave w = solve_wave(p, 1.0, 1e-3, PeriodicGrid(48), tight());
  const WaveJet jet = parameter_jet(w, tight());
  CHECK(std::abs(inner_product(w.phi, jet.phi_P).real() - 1.0) < 1e-9);
  CHECK(std::abs(inner_product(w.phi, jet.phi_k).real()) < 1e-9);
  CHECK(jet.phi_P.is_mean_zero());
  CHECK(jet.phi_k.is_mean_zero());
}

TEST_CASE("parameter jet agrees with central finite differences") {
  ModelParams p;
  const PeriodicGrid grid(48);
  const SolverOptions opts = tight();

  for (double P : {1e-3, 2.5e-3}) {
    const double k = 1.0;
    const TravelingWave w = solve_wave(p, k, P, grid, opts);
    const WaveJet jet = parameter_jet(w, opts);

    // relative steps; absolute steps would swamp the small-P waves
    const double dk = 1e-4 * k, dP = 1e-4 * P;
    const TravelingWave wkp = solve_wave(p, k + dk, P, grid, opts);
    const TravelingWave wkm = solve_wave(p, k - dk, P, grid, opts);
    const TravelingWave wpp = solve_wave(p, k, P + dP, grid, opts);
    const TravelingWave wpm = solve_wave(p, k, P - dP, grid, opts);

    const double ck_fd = (wkp.c - wkm.c) / (2.0 * dk);
    const double cp_fd = (wpp.c - wpm.c) / (2.0 * dP);
    CHECK(std::abs(jet.c_k - ck_fd) < 1e-6 * std::max(1.0, std::abs(ck_fd)));
    CHECK(std::abs(jet.c_P - cp_fd) < 1e-6 * std::max(1.0, std::abs(cp_fd)));

    // field sensitivities carry the FD noise of two full solves
    SpectralField phik_fd = (1.0 / (2.0 * dk)) * (wkp.phi - wkm.phi);
    SpectralField phip_fd = (1.0 / (2.0 * dP)) * (wpp.phi - wpm.phi);
    CHECK(coeff_distance(jet.phi_k, phik_fd) <
          1e-5 * std::max(1.0, jet.phi_k.max_abs_coeff()));
    CHECK(coeff_distance(jet.phi_P, phip_fd) <
          1e-5 * std::max(1.0, jet.phi_P.max_abs_coeff()));
  }
}

TEST_CASE("solutions are grid independent once resolved") {
  ModelParams p;
  const TravelingWave w32 = solve_wave(p, 1.0, 1e-3, PeriodicGrid(32), tight());
  const TravelingWave w64 = solve_wave(p, 1.0, 1e-3, PeriodicGrid(64), tight());
  CHECK(std::abs(w32.c - w64.c) < 1e-9 * std::abs(w64.c));
  CHECK(std::abs(hamiltonian(w32) - hamiltonian(w64)) <
        1e-9 * std::max(1.0, std::abs(hamiltonian(w64))));
  CHECK(std::abs(modulation_flux(w32) - modulation_flux(w64)) <
        1e-9 * std::max(1.0, std::abs(modulation_flux(w64))));

  const WaveJet j32 = parameter_jet(w32, tight());
  const WaveJet j64 = parameter_jet(w64, tight());
  CHECK(std::abs(j32.c_k - j64.c_k) < 1e-9 * std::max(1.0, std::abs(j64.c_k)));
  CHECK(std::abs(j32.c_P - j64.c_P) < 1e-9 * std::max(1.0, std::abs(j64.c_P)));
}

TEST_CASE("continuation reaches targets the direct solve also reaches") {
  ModelParams p;
  const TravelingWave start = refine(stokes_seed(p, 1.0, 1e-2), tight());
  const TravelingWave moved = continue_family(start, 0.6, 1e-3, 8, tight());
  CHECK(moved.k == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(moved.P == doctest::Approx(1e-3).epsilon(1e-15));
  CHECK(moved.residual_norm < 1e-11);

  const TravelingWave direct = solve_wave(p, 0.6, 1e-3, start.phi.grid(), tight());
  CHECK(std::abs(moved.c - direct.c) < 1e-10 * std::abs(direct.c));
  CHECK(coeff_distance(moved.phi, direct.phi) < 1e-10);
}

TEST_CASE("continuation stalls cleanly when Newton cannot converge") {
  ModelParams p;
  const TravelingWave start = refine(stokes_seed(p, 1.0, 1e-2));
  SolverOptions crippled;
  crippled.max_iter = 1;
  crippled.newton_tol = 1e-14;
  CHECK_THROWS_AS(continue_family(start, 0.3, 2.5e-3, 4, crippled),
                  ContinuationStalled);
}

TEST_CASE("reduced model solves without dispersion regularization") {
  ModelParams p;
  p.beta = 0.0;
  const TravelingWave w = solve_wave(p, 0.5, 1e-4, PeriodicGrid(48), tight());
  CHECK(w.residual_norm < 1e-12);
  CHECK(std::abs(w.c - linear_speed(p, 0.5)) < 1e-2);
  CHECK(w.c > 0.0);  // gamma/(4 pi^2 k^2) with no dispersive correction

  const WaveJet jet = parameter_jet(w, tight());
  CHECK(std::abs(inner_product(w.phi, jet.phi_P).real() - 1.0) < 1e-9);
}

TEST_CASE("gamma must be positive") {
  ModelParams p;
  p.gamma = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  CHECK_THROWS_AS(solve_wave(p, 1.0, 1e-3), ConfigError);
}
