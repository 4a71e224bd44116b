#pragma once

#include <Eigen/Core>

#include "ostwave/wave.hpp"

namespace ostwave {

struct EvansOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_dt = 1e-3;
  // Safety valve for the adaptive stepper; the ODE is analytic in theta so
  // hitting this means lambda sits in a genuinely stiff region.
  long max_steps = 2'000'000;
};

// Fundamental solution over one period of the first-order system
// equivalent to the spectral ODE
//   gamma v + k^2 [ (c - phi) v - beta k^2 v'' ]'' = lambda k v',
// written in (v, v', v'', v''') for beta != 0 (4x4, trace free) and in
// (v, v') for beta = 0 (2x2, after dividing by c - phi, which must not
// vanish: StiffIntegrationFailure otherwise).
Eigen::MatrixXcd monodromy(const TravelingWave& w, cplx lambda,
                           const EvansOptions& opts = {});

// Periodic Evans determinant D(lambda, xi) = det(M(lambda) - e^{i xi} I).
// Zeros in lambda for real xi are the Floquet-Bloch eigenvalues.
struct EvansValue {
  cplx determinant;
  double scale = 1.0;  // max(1, max |M_ij|)^dim, for relative comparisons
  Eigen::MatrixXcd monodromy;
};

EvansValue monodromy_evans(const TravelingWave& w, cplx lambda, double xi,
                           const EvansOptions& opts = {});

}  // namespace ostwave
