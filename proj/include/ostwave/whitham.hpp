#pragma once

#include <array>

#include <Eigen/Core>

#include "ostwave/wave.hpp"

namespace ostwave {

enum class Regime { StrictlyHyperbolic, Elliptic, Degenerate };

const char* to_string(Regime r);

struct Classification {
  Regime regime = Regime::Degenerate;
  double discriminant = 0.0;  // tr^2 - 4 det
  double scale = 1.0;         // max(tr^2, |det|, 1)
};

// Eigenvalues of a real 2x2 matrix from the characteristic polynomial.
std::array<cplx, 2> eigenvalues_2x2(const Eigen::Matrix2d& m);

// regime by the sign of the discriminant against tol * scale
Classification classify(const Eigen::Matrix2d& m, double tol = 1e-8);

// Reference data identifying the wave a matrix was built from.
struct WaveRef {
  ModelParams params;
  double k = 0.0;
  double P = 0.0;
  double c = 0.0;
};

// First-order modulation system matrix in the (k, P) variables:
//   row 1: (-(c + k c_k), -k c_P)
//   row 2: (G_k, G_P) by differentiating the flux integrand through the jet.
struct WhithamMatrix {
  Eigen::Matrix2d entries;
  std::array<cplx, 2> eigenvalues;
  Classification classification;
  WaveRef wave;
};

WhithamMatrix whitham_matrix(const TravelingWave& w, const WaveJet& jet,
                             double class_tol = 1e-8);
WhithamMatrix whitham_matrix(const TravelingWave& w, double class_tol = 1e-8);

// Same construction restricted to the reduced model; throws BetaNonZero.
WhithamMatrix reduced_whitham_matrix(const TravelingWave& w, const WaveJet& jet,
                                     double class_tol = 1e-8);
WhithamMatrix reduced_whitham_matrix(const TravelingWave& w, double class_tol = 1e-8);

// Sign of omega0''(k) * omega2(k) decides the small-amplitude regime:
//   (gamma - 48 beta pi^4 k^4) / (3 (gamma + 64 beta pi^4 k^4))
double stokes_lighthill(const ModelParams& p, double k);

// Zero crossing of the product above; throws BetaZero when beta == 0
// (the reduced model is hyperbolic at every frequency).
double critical_frequency(const ModelParams& p);

}  // namespace ostwave
