#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/LU>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "ostwave/errors.hpp"
#include "ostwave/whitham.hpp"

using namespace ostwave;

namespace {

constexpr double kPi4 =
    std::numbers::pi * std::numbers::pi * std::numbers::pi * std::numbers::pi;

SolverOptions tight() {
  SolverOptions o;
  o.newton_tol = 1e-12;
  return o;
}

TravelingWave wave_at(const ModelParams& p, double k, double P) {
  return solve_wave(p, k, P, PeriodicGrid(48), tight());
}

}  // namespace

TEST_CASE("weakly nonlinear stability index has the right limits") {
  ModelParams kdv;
  kdv.gamma = 1e-12;  // rotation-free limit
  CHECK(std::abs(stokes_lighthill(kdv, 1.0) + 0.25) < 1e-12);

  ModelParams nodisp;
  nodisp.beta = 0.0;
  CHECK(std::abs(stokes_lighthill(nodisp, 1.0) - 1.0 / 3.0) < 1e-16);
  CHECK(std::abs(stokes_lighthill(nodisp, 0.37) - 1.0 / 3.0) < 1e-16);

  ModelParams p;  // gamma = beta = 1
  const double li = stokes_lighthill(p, 1.0);
  // independent route: the index equals omega0''(k) * omega2(k)
  for (double k : {0.3, 1.0, 2.0})
    CHECK(std::abs(stokes_lighthill(p, k) -
                   omega0_second(p, k) * omega2(p, k)) <
          1e-12 * std::max(1.0, std::abs(stokes_lighthill(p, k))));
  const double closed = (1.0 - 48.0 * kPi4) / (3.0 * (1.0 + 64.0 * kPi4));
  CHECK(std::abs(li - closed) < 1e-15);
  CHECK(std::abs(li + 0.24990) < 1e-4);
}

TEST_CASE("critical wavenumber: closed form, bracketing, and scaling") {
  ModelParams p;
  const double kc = critical_frequency(p);
  CHECK(std::abs(kc - std::pow(1.0 / (48.0 * kPi4), 0.25)) < 1e-15);
  CHECK(std::abs(kc - 0.120929) < 1e-5);  // printed to six digits elsewhere

  // bisection on the sign of the index brackets the closed form
  double lo = 0.05, hi = 0.5;
  REQUIRE(stokes_lighthill(p, lo) > 0.0);
  REQUIRE(stokes_lighthill(p, hi) < 0.0);
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    (stokes_lighthill(p, mid) > 0.0 ? lo : hi) = mid;
  }
  CHECK(lo < kc);
  CHECK(kc < hi);

  // kc scales like gamma^(1/4)
  ModelParams p16 = p;
  p16.gamma = 16.0;
  CHECK(std::abs(critical_frequency(p16) - 2.0 * kc) < 1e-14);

  ModelParams neg = p;
  neg.beta = -1.0;
  CHECK(std::abs(critical_frequency(neg) -
                 std::pow(1.0 / (64.0 * kPi4), 0.25)) < 1e-15);

  ModelParams nodisp = p;
  nodisp.beta = 0.0;
  CHECK_THROWS_AS(critical_frequency(nodisp), BetaZero);
}

TEST_CASE("modulation matrix entries agree with finite differences") {
  ModelParams p;
  const double k = 1.0, P = 1e-3;
  const TravelingWave w = wave_at(p, k, P);
  const WhithamMatrix W = whitham_matrix(w, 1e-8);

  const double dk = 1e-4 * k, dP = 1e-4 * P;
  const TravelingWave wkp = wave_at(p, k + dk, P), wkm = wave_at(p, k - dk, P);
  const TravelingWave wpp = wave_at(p, k, P + dP), wpm = wave_at(p, k, P - dP);

  // row one: -(d/dk, d/dP) of omega = k c
  const double w11_fd = -((k + dk) * wkp.c - (k - dk) * wkm.c) / (2.0 * dk);
  const double w12_fd = -k * (wpp.c - wpm.c) / (2.0 * dP);
  // row two: gradient of the flux G
  const double w21_fd =
      (modulation_flux(wkp) - modulation_flux(wkm)) / (2.0 * dk);
  const double w22_fd =
      (modulation_flux(wpp) - modulation_flux(wpm)) / (2.0 * dP);

  CHECK(std::abs(W.entries(0, 0) - w11_fd) <
        1e-6 * std::max(1.0, std::abs(w11_fd)));
  CHECK(std::abs(W.entries(0, 1) - w12_fd) <
        1e-6 * std::max(1.0, std::abs(w12_fd)));
  CHECK(std::abs(W.entries(1, 0) - w21_fd) <
        1e-6 * std::max(1.0, std::abs(w21_fd)));
  CHECK(std::abs(W.entries(1, 1) - w22_fd) <
        1e-6 * std::max(1.0, std::abs(w22_fd)));
}

TEST_CASE("small-amplitude eigenvalues follow the dispersion expansion") {
  ModelParams p;
  const double kc = critical_frequency(p);
  const double a = 1e-2;

  for (double k : {0.8 * kc, 1.5 * kc}) {
    const StokesExpansion st = stokes_expansion(p, k, a);
    const TravelingWave w = wave_at(p, k, st.momentum());
    const WhithamMatrix W = whitham_matrix(w);

    const cplx pred_rad =
        std::sqrt(cplx(omega2(p, k) * omega0_second(p, k), 0.0));
    const cplx base(-omega0_prime(p, k), 0.0);
    const cplx pred1 = base - a * pred_rad, pred2 = base + a * pred_rad;

    const double scale = std::abs(base) + a * std::abs(pred_rad);
    const double err =
        std::min(std::abs(W.eigenvalues[0] - pred1) + std::abs(W.eigenvalues[1] - pred2),
                 std::abs(W.eigenvalues[0] - pred2) + std::abs(W.eigenvalues[1] - pred1));
    CHECK(err < 10.0 * a * a * scale);

    if (k < kc) {
      CHECK(W.classification.regime == Regime::StrictlyHyperbolic);
      CHECK(std::abs(W.eigenvalues[0].imag()) < 1e-12 * scale);
    } else {
      CHECK(W.classification.regime == Regime::Elliptic);
      CHECK(std::abs(W.eigenvalues[0].imag()) > 0.5 * a * std::abs(pred_rad));
      // the pair is complex conjugate
      CHECK(std::abs(W.eigenvalues[0] - std::conj(W.eigenvalues[1])) <
            1e-10 * scale);
    }
  }
}

TEST_CASE("eigenvalue splitting collapses as amplitude goes to zero") {
  ModelParams p;
  const double k = 1.0;
  double prev_split = 0.0;
  for (double a : {2e-3, 1e-3}) {
    const StokesExpansion st = stokes_expansion(p, k, a);
    const TravelingWave w = wave_at(p, k, st.momentum());
    const WhithamMatrix W = whitham_matrix(w);
    const double split = std::abs(W.eigenvalues[0] - W.eigenvalues[1]);
    const double pred =
        2.0 * a * std::sqrt(std::abs(omega2(p, k) * omega0_second(p, k)));
    CHECK(std::abs(split - pred) < 0.1 * pred);
    if (prev_split > 0.0) CHECK(split < prev_split);
    prev_split = split;
    CHECK(std::abs(W.eigenvalues[0].real() + omega0_prime(p, k)) <
          1e-2 * std::abs(omega0_prime(p, k)));
  }
}

TEST_CASE("classification flips exactly across the critical wavenumber") {
  ModelParams p;
  const double kc = critical_frequency(p);
  const double a = 1e-2;
  const StokesExpansion below = stokes_expansion(p, 0.9 * kc, a);
  const StokesExpansion above = stokes_expansion(p, 1.1 * kc, a);
  const WhithamMatrix Wb = whitham_matrix(wave_at(p, 0.9 * kc, below.momentum()));
  const WhithamMatrix Wa = whitham_matrix(wave_at(p, 1.1 * kc, above.momentum()));
  CHECK(Wb.classification.regime == Regime::StrictlyHyperbolic);
  CHECK(Wa.classification.regime == Regime::Elliptic);
  CHECK(Wb.classification.discriminant > 0.0);
  CHECK(Wa.classification.discriminant < 0.0);
}

TEST_CASE("eigenvalues satisfy the characteristic polynomial") {
  ModelParams p;
  const TravelingWave w = wave_at(p, 0.6, 1e-3);
  const WhithamMatrix W = whitham_matrix(w);
  const double tr = W.entries.trace();
  const double det = W.entries.determinant();
  const double scale = std::max(1.0, W.entries.cwiseAbs().maxCoeff());
  for (const cplx& lam : W.eigenvalues)
    CHECK(std::abs(lam * lam - tr * lam + det) < 1e-12 * scale * scale);

  // eigenvalues are invariant under similarity of the 2x2 solver
  Eigen::Matrix2d S;
  S << 1.3, -0.4, 0.2, 0.9;
  const Eigen::Matrix2d conj_m = S * W.entries * S.inverse();
  const auto eig2 = eigenvalues_2x2(conj_m);
  const double match =
      std::min(std::abs(eig2[0] - W.eigenvalues[0]) + std::abs(eig2[1] - W.eigenvalues[1]),
               std::abs(eig2[0] - W.eigenvalues[1]) + std::abs(eig2[1] - W.eigenvalues[0]));
  CHECK(match < 1e-10 * scale);
}

TEST_CASE("classifier honors its tolerance contract") {
  Eigen::Matrix2d m;
  m << 1.0, 0.0, 0.0, 1.0;
  CHECK(classify(m).regime == Regime::Degenerate);
  m << 0.0, 1.0, -1.0, 0.0;
  CHECK(classify(m).regime == Regime::Elliptic);
  m << 1.0, 0.0, 0.0, 2.0;
  CHECK(classify(m).regime == Regime::StrictlyHyperbolic);
  // discriminant below tol * scale is declared degenerate
  m << 1.0, 1e-6, 0.0, 1.0;
  CHECK(classify(m, 1e-8).regime == Regime::Degenerate);
}

TEST_CASE("reduced model matrix: guard and closed-form hyperbolicity") {
  ModelParams p;
  const TravelingWave dispersive = wave_at(p, 0.6, 1e-3);
  CHECK_THROWS_AS(reduced_whitham_matrix(dispersive), BetaNonZero);

  ModelParams red;
  red.beta = 0.0;
  const TravelingWave w = wave_at(red, 0.5, 1e-4);
  const WhithamMatrix full = whitham_matrix(w);
  const WhithamMatrix reduced = reduced_whitham_matrix(w);
  CHECK((full.entries - reduced.entries).cwiseAbs().maxCoeff() == 0.0);
  CHECK(reduced.classification.regime == Regime::StrictlyHyperbolic);
}
