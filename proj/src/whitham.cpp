#include "ostwave/whitham.hpp"

#include <Eigen/LU>

#include <cmath>
#include <numbers>

namespace ostwave {

namespace {

constexpr double kPi = std::numbers::pi;

double pi4() { return kPi * kPi * kPi * kPi; }

// G_k and G_P: differentiate the flux integrand
//   G = int -phi^3/3 + (3/2) beta k^2 phi'^2 + gamma/(2k^2) (ant phi)^2
// through (phi_k, c_k) resp. (phi_P, c_P); the speed does not enter.
double flux_k_derivative(const TravelingWave& w, const SpectralField& phi_k) {
  const double k = w.k;
  const double g = w.params.gamma;
  const double b = w.params.beta;
  const SpectralField phi2 = multiply(w.phi, w.phi);
  const SpectralField d1 = differentiate(w.phi, 1);
  const SpectralField i1 = antiderivative(w.phi, 1);
  double out = -inner_product(phi2, phi_k).real();
  out += 3.0 * b * k * inner_product(d1, d1).real();
  out += 3.0 * b * k * k * inner_product(d1, differentiate(phi_k, 1)).real();
  out -= g / (k * k * k) * inner_product(i1, i1).real();
  out += g / (k * k) * inner_product(i1, antiderivative(phi_k, 1)).real();
  return out;
}

double flux_p_derivative(const TravelingWave& w, const SpectralField& phi_p) {
  const double k = w.k;
  const SpectralField phi2 = multiply(w.phi, w.phi);
  const SpectralField d1 = differentiate(w.phi, 1);
  const SpectralField i1 = antiderivative(w.phi, 1);
  double out = -inner_product(phi2, phi_p).real();
  out += 3.0 * w.params.beta * k * k *
         inner_product(d1, differentiate(phi_p, 1)).real();
  out += w.params.gamma / (k * k) *
         inner_product(i1, antiderivative(phi_p, 1)).real();
  return out;
}

WhithamMatrix build(const TravelingWave& w, const WaveJet& jet, double class_tol) {
  WhithamMatrix m;
  m.entries(0, 0) = -(w.c + w.k * jet.c_k);
  m.entries(0, 1) = -w.k * jet.c_P;
  m.entries(1, 0) = flux_k_derivative(w, jet.phi_k);
  m.entries(1, 1) = flux_p_derivative(w, jet.phi_P);
  m.eigenvalues = eigenvalues_2x2(m.entries);
  m.classification = classify(m.entries, class_tol);
  m.wave = WaveRef{w.params, w.k, w.P, w.c};
  return m;
}

}  // namespace

const char* to_string(Regime r) {
  switch (r) {
    case Regime::StrictlyHyperbolic: return "StrictlyHyperbolic";
    case Regime::Elliptic: return "Elliptic";
    case Regime::Degenerate: return "Degenerate";
  }
  return "?";
}

std::array<cplx, 2> eigenvalues_2x2(const Eigen::Matrix2d& m) {
  const double tr = m.trace();
  const double det = m.determinant();
  const cplx root = std::sqrt(cplx(tr * tr - 4.0 * det, 0.0));
  return {0.5 * (tr + root), 0.5 * (tr - root)};
}

Classification classify(const Eigen::Matrix2d& m, double tol) {
  const double tr = m.trace();
  const double det = m.determinant();
  Classification c;
  c.discriminant = tr * tr - 4.0 * det;
  c.scale = std::max({tr * tr, std::abs(det), 1.0});
  if (c.discriminant > tol * c.scale)
    c.regime = Regime::StrictlyHyperbolic;
  else if (c.discriminant < -tol * c.scale)
    c.regime = Regime::Elliptic;
  else
    c.regime = Regime::Degenerate;
  return c;
}

WhithamMatrix whitham_matrix(const TravelingWave& w, const WaveJet& jet,
                             double class_tol) {
  return build(w, jet, class_tol);
}

WhithamMatrix whitham_matrix(const TravelingWave& w, double class_tol) {
  return build(w, parameter_jet(w), class_tol);
}

WhithamMatrix reduced_whitham_matrix(const TravelingWave& w, const WaveJet& jet,
                                     double class_tol) {
  if (w.params.beta != 0.0)
    throw BetaNonZero("reduced_whitham_matrix requires beta == 0, got " +
                      std::to_string(w.params.beta));
  return build(w, jet, class_tol);
}

WhithamMatrix reduced_whitham_matrix(const TravelingWave& w, double class_tol) {
  if (w.params.beta != 0.0)
    throw BetaNonZero("reduced_whitham_matrix requires beta == 0, got " +
                      std::to_string(w.params.beta));
  return build(w, parameter_jet(w), class_tol);
}

double stokes_lighthill(const ModelParams& p, double k) {
  p.validate();
  const double k4 = std::pow(k, 4);
  return (p.gamma - 48.0 * p.beta * pi4() * k4) /
         (3.0 * (p.gamma + 64.0 * p.beta * pi4() * k4));
}

double critical_frequency(const ModelParams& p) {
  p.validate();
  if (p.beta == 0.0)
    throw BetaZero("no critical frequency in the reduced model");
  if (p.beta > 0.0)
    return std::pow(p.gamma / (48.0 * p.beta * pi4()), 0.25);
  return std::pow(p.gamma / (64.0 * std::abs(p.beta) * pi4()), 0.25);
}

}  // namespace ostwave
