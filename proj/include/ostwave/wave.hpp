#pragma once

#include <optional>

#include "ostwave/model.hpp"
#include "ostwave/spectral.hpp"

namespace ostwave {

// ---- small-amplitude (Stokes) closed forms -------------------------------
//
// Linear phase speed and first corrections of the wave family
//   phi = a cos(2 pi theta) + 2 a^2 A2(k) cos(4 pi theta) + O(a^3)
//   c   = c0(k) + a^2 A2(k) + O(a^4),   P = a^2/4 + O(a^4)

double linear_speed(const ModelParams& p, double k);     // c0(k)
double stokes_a2(const ModelParams& p, double k);        // A2(k), throws DegenerateStokes
double omega0(const ModelParams& p, double k);           // k c0(k)
double omega0_prime(const ModelParams& p, double k);
double omega0_second(const ModelParams& p, double k);
double omega2(const ModelParams& p, double k);           // k A2(k)

struct StokesExpansion {
  ModelParams params;
  double k = 0.0;
  double a = 0.0;
  double a2 = 0.0;                // A2(k)
  double c = 0.0;                 // predicted speed through O(a^2)
  std::vector<double> cosines;    // truncated cosine table {0, a, 2 a^2 A2}

  // P of the truncated profile: a^2/4 + (2 a^2 A2)^2 / 4
  double momentum() const { return 0.25 * a * a + (a * a * a2) * (a * a * a2); }
};

StokesExpansion stokes_expansion(const ModelParams& p, double k, double a);

// ---- traveling waves ------------------------------------------------------

struct TravelingWave {
  ModelParams params;
  double k = 0.0;   // frequency parameter (theta = k * (x - c t))
  double P = 0.0;   // momentum, P = <phi,phi>/2
  double c = 0.0;   // phase speed
  SpectralField phi;
  double residual_norm = 0.0;  // max-norm over residual coefficients
};

struct SolverOptions {
  double newton_tol = 1e-10;  // max-norm on coefficient residuals
  int max_iter = 50;
};

// First-order sensitivities of the family map (k,P) -> (phi,c).
struct WaveJet {
  SpectralField phi_k;
  SpectralField phi_P;
  double c_k = 0.0;
  double c_P = 0.0;
};

// Seed profile from the Stokes expansion; P is the seed's own momentum.
TravelingWave stokes_seed(const ModelParams& p, double k, double a,
                          const PeriodicGrid& grid = PeriodicGrid());

// Residual field R(phi,c) = k^2 (-c phi' + phi phi' + beta k^2 phi''')' - gamma phi.
SpectralField profile_residual(const TravelingWave& w);

// Newton solve at the wave's own (k, P), starting from its (phi, c).
TravelingWave refine(const TravelingWave& guess, const SolverOptions& opts = {});

// Natural-parameter continuation along the segment to (k_target, P_target),
// with adaptive step halving down to 2^-10 of the segment.
TravelingWave continue_family(const TravelingWave& start, double k_target,
                              double P_target, int steps = 8,
                              const SolverOptions& opts = {});

// Seed + refine, falling back to continuation from a small-amplitude wave.
TravelingWave solve_wave(const ModelParams& p, double k, double P,
                         const PeriodicGrid& grid = PeriodicGrid(),
                         const SolverOptions& opts = {});

// Conserved densities per unit theta-period.
double hamiltonian(const TravelingWave& w);
double modulation_flux(const TravelingWave& w);

// Bordered solves against the converged Newton system; finite differences of
// refine() reproduce these to O(delta^2) (test oracle).
WaveJet parameter_jet(const TravelingWave& w, const SolverOptions& opts = {});

}  // namespace ostwave
