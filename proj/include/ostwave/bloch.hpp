#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "ostwave/errors.hpp"
#include "ostwave/wave.hpp"
#include "ostwave/whitham.hpp"

namespace ostwave {

// Linearizing about a wave in the co-moving frame and substituting the
// Bloch ansatz v = e^{i xi theta} w(theta), w periodic, yields the pencil
//   L(xi) w = lambda H(xi) w
// on Fourier coefficients, with
//   L(xi) = gamma I + k^2 D^2 (c I - T_phi - beta k^2 D^2),  H(xi) = k D,
// where D = diag(i (2 pi n + xi)) and T_phi is the Toeplitz matrix of phi.
struct BlochMatrices {
  double xi = 0.0;
  int n_modes = 0;
  Eigen::MatrixXcd L;  // (2N+1) x (2N+1), rows/cols indexed n = -N..N
  Eigen::MatrixXcd H;
};

BlochMatrices assemble_bloch(const TravelingWave& w, double xi);

// All finite pencil eigenvalues, sorted by modulus. A positive
// window_radius keeps only |lambda| < window_radius. Floquet exponents
// with |xi| < 1e-12 are treated as xi = 0: there H annihilates the mean
// mode while L acts on it as gamma I, so the mean row and column are
// deflated exactly; any structural violation raises XiZeroDeflationFailed.
std::vector<cplx> pencil_eigs(const BlochMatrices& m, double window_radius = 0.0);

// Generalized kernel of the xi = 0 pencil and its adjoint, normalized so
// that <psi_j, d_theta phi_l> = delta_jl. The Gram identity is enforced to
// `tol` (NormalizationViolated); the operator identities
//   L0 phi1 = 0,                L0 phi2   = -k^2 c_P phi'',
//   L0* psi2 = 0,               L0* psi1  = -k^2 c_P phi   (mod constants)
// are measured and reported, not enforced. The last identity only holds
// modulo the mean mode: its coefficient at n = 0 is -k^2 <phi, phi_P>,
// which the discrete normalization pins to -k^2.
struct KernelBasis {
  SpectralField phi1;   // phi'
  SpectralField phi2;   // phi_P
  SpectralField psi1;   // d^{-2} phi_P
  SpectralField psi2;   // -d^{-1} phi
  Eigen::Matrix2cd gram;
  double max_identity_residual = 0.0;  // relative, over the four identities
  double mean_mode_defect = 0.0;       // |(L0* psi1)_0 + k^2| / k^2
};

KernelBasis kernel_basis(const TravelingWave& w, const WaveJet& jet,
                         double tol = 1e-8);

// First-order matrix of the two pencil eigenvalues branching from the
// origin: lambda_j(xi) = i k xi mu_j + O(xi^2) with mu_j the eigenvalues of
// this 2x2 matrix. Built from the kernel basis by Fredholm pairings.
struct ModulationMatrix {
  Eigen::Matrix2d entries;
  std::array<cplx, 2> eigenvalues;
  Classification classification;
  WaveRef wave;
};

ModulationMatrix modulation_matrix(const TravelingWave& w, const WaveJet& jet,
                                   double class_tol = 1e-8);

// The discrete counterpart of the Whitham link: W = M0 - c I entrywise.
struct LinkReport {
  Eigen::Matrix2d whitham;
  Eigen::Matrix2d shifted_modulation;  // M0 - c I
  double residual = 0.0;               // max-norm, relative to max(1, |W|)
  std::array<double, 2> row2_residuals{};  // absolute, second row
  bool pass = false;
};

LinkReport verify_whitham_link(const WhithamMatrix& W, const ModulationMatrix& M0,
                               const TravelingWave& w, double tol = 1e-6);

// The two spectral branches through the origin, tracked over an ascending
// xi grid by nearest continuation inside a modulus window. The window, if
// not supplied, is r(xi) = 0.5 k xi (1 + 2 max_j |mu_j|) with mu estimated
// at the smallest xi. WindowAmbiguous means the third-smallest eigenvalue
// could not be separated from the branch pair at the smallest xi.
struct SpectralCurves {
  std::vector<double> xi;
  std::array<std::vector<cplx>, 2> lambda;
  std::array<cplx, 2> slopes;    // lambda_j / (i k xi) at the smallest xi
  double max_re = 0.0;           // over both branches and the whole grid
  double window_radius = 0.0;    // window used at xi.front()
  double xi_isolated = 0.0;      // largest grid prefix with exactly 2 in window
};

SpectralCurves spectral_curves(const TravelingWave& w,
                               const std::vector<double>& xi_grid,
                               double window_radius = 0.0);

// Richardson extrapolation of the branch slopes lambda_j/(i k xi) over
// xi in {h, 2h, 4h}. The branches can avoid-cross near the band edge, so
// the extrapolation runs on their sum and product, which stay analytic,
// and the pair is recovered as quadratic roots.
std::array<cplx, 2> richardson_slopes(const TravelingWave& w, double h = 1e-3);

}  // namespace ostwave
