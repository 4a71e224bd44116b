#include "ostwave/bloch.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace ostwave {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::VectorXcd coeff_vector(const SpectralField& f) {
  const int n = f.n_modes();
  Eigen::VectorXcd v(2 * n + 1);
  for (int m = -n; m <= n; ++m) v[m + n] = f.coeff(m);
  return v;
}

// Relative residual scale: |M| |v| in the max norm, the natural backward
// error unit for M v = rhs.
double action_scale(const Eigen::MatrixXcd& m, const Eigen::VectorXcd& v) {
  const double s = (m.cwiseAbs() * v.cwiseAbs()).maxCoeff();
  return std::max(s, 1e-300);
}

// Equilibrated QZ. Left-scaling rows of both matrices by a common factor
// preserves the pencil's eigenvalues while undoing the n^4 row grading
// that otherwise costs zggev most of its accuracy near the origin.
std::vector<cplx> generalized_eigs(Eigen::MatrixXcd a, Eigen::MatrixXcd b) {
  const int n = static_cast<int>(a.rows());
  for (int i = 0; i < n; ++i) {
    const double s = std::max(a.row(i).cwiseAbs().maxCoeff(),
                              b.row(i).cwiseAbs().maxCoeff());
    if (s > 0.0) {
      a.row(i) /= s;
      b.row(i) /= s;
    }
  }
  std::vector<cplx> alpha(static_cast<size_t>(n)), beta(static_cast<size_t>(n));
  const lapack_int info = LAPACKE_zggev(
      LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, b.data(), n, alpha.data(),
      beta.data(), nullptr, 1, nullptr, 1);
  if (info != 0)
    throw Error("generalized eigensolver failed, info = " + std::to_string(info));

  std::vector<cplx> eigs;
  eigs.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (std::abs(beta[static_cast<size_t>(i)]) < 1e-300) continue;  // infinite
    eigs.push_back(alpha[static_cast<size_t>(i)] / beta[static_cast<size_t>(i)]);
  }
  std::sort(eigs.begin(), eigs.end(),
            [](const cplx& x, const cplx& y) { return std::abs(x) < std::abs(y); });
  return eigs;
}

Eigen::MatrixXcd drop_mean_row_col(const Eigen::MatrixXcd& m, int n) {
  const int d = 2 * n + 1;
  Eigen::MatrixXcd out(d - 1, d - 1);
  out.topLeftCorner(n, n) = m.topLeftCorner(n, n);
  out.topRightCorner(n, n) = m.topRightCorner(n, n);
  out.bottomLeftCorner(n, n) = m.bottomLeftCorner(n, n);
  out.bottomRightCorner(n, n) = m.bottomRightCorner(n, n);
  return out;
}

// First-order operators pairing the kernel against the parameter jet.
//   l1 f = 2 k d[(c - phi) f] - 4 beta k^3 f''',   l2 f = (c - phi) f - 6 beta k^2 f''
SpectralField apply_l1(const TravelingWave& w, const SpectralField& f) {
  SpectralField inner = w.c * f - multiply(w.phi, f);
  SpectralField out = differentiate(inner, 1);
  out *= 2.0 * w.k;
  out -= (4.0 * w.params.beta * w.k * w.k * w.k) * differentiate(f, 3);
  return out;
}

SpectralField apply_l2(const TravelingWave& w, const SpectralField& f) {
  SpectralField out = w.c * f - multiply(w.phi, f);
  out -= (6.0 * w.params.beta * w.k * w.k) * differentiate(f, 2);
  return out;
}

WaveRef ref_of(const TravelingWave& w) {
  return WaveRef{w.params, w.k, w.P, w.c};
}

void require_same_wave(const WaveRef& a, const WaveRef& b, const char* where) {
  auto close = [](double x, double y) {
    return std::abs(x - y) <= 5e-12 * std::max({std::abs(x), std::abs(y), 1.0});
  };
  if (!close(a.params.gamma, b.params.gamma) || !close(a.params.beta, b.params.beta) ||
      !close(a.k, b.k) || !close(a.P, b.P) || !close(a.c, b.c))
    throw WaveMismatch(std::string(where) +
                       ": matrices reference different waves");
}

}  // namespace

BlochMatrices assemble_bloch(const TravelingWave& w, double xi) {
  const int n = w.phi.n_modes();
  const int d = 2 * n + 1;
  const double k = w.k, beta = w.params.beta;

  Eigen::VectorXcd d1(d);
  for (int m = -n; m <= n; ++m) d1[m + n] = cplx(0.0, kTwoPi * m + xi);

  Eigen::MatrixXcd inner = -toeplitz_of(w.phi);
  inner.diagonal().array() += w.c;
  for (int j = 0; j < d; ++j)
    inner(j, j) -= beta * k * k * d1[j] * d1[j];

  BlochMatrices m;
  m.xi = xi;
  m.n_modes = n;
  m.L = (k * k) * (d1.array().square().matrix().asDiagonal() * inner);
  m.L.diagonal().array() += w.params.gamma;
  m.H = Eigen::MatrixXcd::Zero(d, d);
  m.H.diagonal() = k * d1;
  return m;
}

std::vector<cplx> pencil_eigs(const BlochMatrices& m, double window_radius) {
  const int n = m.n_modes;
  std::vector<cplx> eigs;
  if (std::abs(m.xi) < 1e-12) {
    // The mean row must read gamma w_0 = 0 so that w_0 deflates exactly.
    const double gamma = m.L(n, n).real();
    double worst = std::abs(m.L(n, n) - cplx(gamma, 0.0));
    for (int j = 0; j < 2 * n + 1; ++j) {
      if (j != n) worst = std::max(worst, std::abs(m.L(n, j)));
      worst = std::max(worst, std::abs(m.H(n, j)));
    }
    if (!(gamma > 0.0) || worst > 1e-8 * gamma)
      throw XiZeroDeflationFailed(
          "mean-mode row is not gamma e_0 at xi = 0; defect " +
          std::to_string(worst));
    eigs = generalized_eigs(drop_mean_row_col(m.L, n), drop_mean_row_col(m.H, n));
  } else {
    eigs = generalized_eigs(m.L, m.H);
  }

  if (window_radius > 0.0) {
    std::erase_if(eigs, [window_radius](const cplx& z) {
      return !(std::abs(z) < window_radius);
    });
  }
  return eigs;
}

KernelBasis kernel_basis(const TravelingWave& w, const WaveJet& jet, double tol) {
  KernelBasis kb{differentiate(w.phi, 1), jet.phi_P,
                 antiderivative(jet.phi_P, 2),
                 -1.0 * antiderivative(w.phi, 1), Eigen::Matrix2cd(), 0.0, 0.0};

  const SpectralField* phis[2] = {&kb.phi1, &kb.phi2};
  const SpectralField* psis[2] = {&kb.psi1, &kb.psi2};
  for (int j = 0; j < 2; ++j)
    for (int l = 0; l < 2; ++l)
      kb.gram(j, l) = inner_product(*psis[j], differentiate(*phis[l], 1));
  if ((kb.gram - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > tol)
    throw NormalizationViolated("kernel pairing <psi_j, d phi_l> is not the identity");

  const BlochMatrices m0 = assemble_bloch(w, 0.0);
  const Eigen::MatrixXcd adj = m0.L.adjoint();
  const double k2cp = w.k * w.k * jet.c_P;
  const int n = m0.n_modes;

  const Eigen::VectorXcd v1 = coeff_vector(kb.phi1);
  const Eigen::VectorXcd v2 = coeff_vector(kb.phi2);
  const Eigen::VectorXcd u1 = coeff_vector(kb.psi1);
  const Eigen::VectorXcd u2 = coeff_vector(kb.psi2);
  const Eigen::VectorXcd vphi = coeff_vector(w.phi);
  const Eigen::VectorXcd vd2 = coeff_vector(differentiate(w.phi, 2));

  double worst = (m0.L * v1).cwiseAbs().maxCoeff() / action_scale(m0.L, v1);

  Eigen::VectorXcd r2 = m0.L * v2 + k2cp * vd2;
  worst = std::max(worst, r2.cwiseAbs().maxCoeff() / action_scale(m0.L, v2));

  worst = std::max(worst,
                   (adj * u2).cwiseAbs().maxCoeff() / action_scale(adj, u2));

  // The adjoint identity for psi1 holds modulo constants: the mean mode of
  // L0* psi1 carries exactly -k^2 <phi, phi_P> = -k^2.
  Eigen::VectorXcd r4 = adj * u1 + k2cp * vphi;
  kb.mean_mode_defect = std::abs(r4[n] + cplx(w.k * w.k, 0.0)) / (w.k * w.k);
  r4[n] = cplx(0.0);
  worst = std::max(worst, r4.cwiseAbs().maxCoeff() / action_scale(adj, u1));

  kb.max_identity_residual = worst;
  return kb;
}

ModulationMatrix modulation_matrix(const TravelingWave& w, const WaveJet& jet,
                                   double class_tol) {
  const KernelBasis kb = kernel_basis(w, jet);
  const double k = w.k;
  const double phi2 = inner_product(w.phi, w.phi).real();

  ModulationMatrix m;
  m.entries(0, 0) = -k * jet.c_k;
  m.entries(0, 1) = -k * jet.c_P;
  const SpectralField row_k = apply_l1(w, jet.phi_k) + apply_l2(w, kb.phi1);
  m.entries(1, 0) =
      phi2 * jet.c_k + inner_product(kb.psi2, row_k).real() / k;
  m.entries(1, 1) =
      phi2 * jet.c_P + inner_product(kb.psi2, apply_l1(w, jet.phi_P)).real() / k;
  m.eigenvalues = eigenvalues_2x2(m.entries);
  m.classification = classify(m.entries, class_tol);
  m.wave = ref_of(w);
  return m;
}

LinkReport verify_whitham_link(const WhithamMatrix& W, const ModulationMatrix& M0,
                               const TravelingWave& w, double tol) {
  require_same_wave(W.wave, ref_of(w), "verify_whitham_link");
  require_same_wave(M0.wave, ref_of(w), "verify_whitham_link");

  LinkReport r;
  r.whitham = W.entries;
  r.shifted_modulation = M0.entries - w.c * Eigen::Matrix2d::Identity();
  const Eigen::Matrix2d d = r.whitham - r.shifted_modulation;
  r.residual = d.cwiseAbs().maxCoeff() /
               std::max(1.0, W.entries.cwiseAbs().maxCoeff());
  r.row2_residuals = {std::abs(d(1, 0)), std::abs(d(1, 1))};
  r.pass = r.residual <= tol;
  return r;
}

SpectralCurves spectral_curves(const TravelingWave& w,
                               const std::vector<double>& xi_grid,
                               double window_radius) {
  if (xi_grid.empty() || xi_grid.front() <= 1e-12 ||
      !std::is_sorted(xi_grid.begin(), xi_grid.end()))
    throw ConfigError("spectral_curves: xi grid must be positive and ascending");

  const double xi0 = xi_grid.front();
  const std::vector<cplx> eigs0 = pencil_eigs(assemble_bloch(w, xi0));
  if (eigs0.size() < 3)
    throw WindowAmbiguous("fewer than three finite eigenvalues at xi = " +
                          std::to_string(xi0));
  const double m2 = std::abs(eigs0[1]);
  const double m3 = std::abs(eigs0[2]);

  double r0 = window_radius;
  if (r0 > 0.0) {
    const int count = static_cast<int>(std::count_if(
        eigs0.begin(), eigs0.end(),
        [r0](const cplx& z) { return std::abs(z) < r0; }));
    if (count != 2)
      throw WindowAmbiguous("window holds " + std::to_string(count) +
                            " eigenvalues at xi = " + std::to_string(xi0) +
                            ", need exactly 2");
  } else {
    const double mu_est = m2 / (w.k * xi0);
    r0 = 0.5 * w.k * xi0 * (1.0 + 2.0 * mu_est);
    if (m3 <= r0) {
      if (m3 < 1.05 * m2)
        throw WindowAmbiguous(
            "third eigenvalue is not separated from the branch pair");
      r0 = std::sqrt(m2 * m3);  // geometric midpoint between pair and rest
    }
  }

  SpectralCurves out;
  out.xi = xi_grid;
  out.window_radius = r0;
  out.lambda[0].reserve(xi_grid.size());
  out.lambda[1].reserve(xi_grid.size());
  out.lambda[0].push_back(eigs0[0]);
  out.lambda[1].push_back(eigs0[1]);
  out.slopes = {eigs0[0] / (cplx(0.0, 1.0) * w.k * xi0),
                eigs0[1] / (cplx(0.0, 1.0) * w.k * xi0)};

  bool prefix_clean = true;
  out.xi_isolated = xi0;

  for (size_t i = 1; i < xi_grid.size(); ++i) {
    const double xi = xi_grid[i];
    const std::vector<cplx> eigs = pencil_eigs(assemble_bloch(w, xi));
    if (eigs.size() < 2)
      throw WindowAmbiguous("fewer than two finite eigenvalues at xi = " +
                            std::to_string(xi));

    const double r = r0 * xi / xi0;
    const int count = static_cast<int>(std::count_if(
        eigs.begin(), eigs.end(),
        [r](const cplx& z) { return std::abs(z) < r; }));
    if (count == 2 && prefix_clean)
      out.xi_isolated = xi;
    else
      prefix_clean = false;

    // nearest continuation against the linear prediction, over the few
    // smallest eigenvalues, assigning the pair jointly
    const double grow = xi / xi_grid[i - 1];
    const cplx p0 = out.lambda[0].back() * grow;
    const cplx p1 = out.lambda[1].back() * grow;
    const size_t ncand = std::min<size_t>(eigs.size(), 6);
    size_t best_a = 0, best_b = 1;
    double best = std::numeric_limits<double>::infinity();
    for (size_t a = 0; a < ncand; ++a)
      for (size_t b = 0; b < ncand; ++b) {
        if (a == b) continue;
        const double cost = std::abs(eigs[a] - p0) + std::abs(eigs[b] - p1);
        if (cost < best) {
          best = cost;
          best_a = a;
          best_b = b;
        }
      }
    out.lambda[0].push_back(eigs[best_a]);
    out.lambda[1].push_back(eigs[best_b]);
  }

  for (const auto& branch : out.lambda)
    for (const cplx& z : branch) out.max_re = std::max(out.max_re, z.real());
  return out;
}

std::array<cplx, 2> richardson_slopes(const TravelingWave& w, double h) {
  // Branch values can avoid-cross within {h,2h,4h}; their sum and product
  // are analytic in xi, so extrapolate those and split at the end.
  cplx s[3], p[3];
  for (int i = 0; i < 3; ++i) {
    const double xi = h * (1 << i);
    const std::vector<cplx> eigs = pencil_eigs(assemble_bloch(w, xi));
    if (eigs.size() < 2)
      throw WindowAmbiguous("fewer than two finite eigenvalues at xi = " +
                            std::to_string(xi));
    const cplx mu0 = eigs[0] / (cplx(0.0, 1.0) * w.k * xi);
    const cplx mu1 = eigs[1] / (cplx(0.0, 1.0) * w.k * xi);
    s[i] = mu0 + mu1;
    p[i] = mu0 * mu1;
  }
  const cplx sr = (8.0 * s[0] - 6.0 * s[1] + s[2]) / 3.0;
  const cplx pr = (8.0 * p[0] - 6.0 * p[1] + p[2]) / 3.0;
  const cplx disc = std::sqrt(sr * sr - 4.0 * pr);
  return {(sr - disc) / 2.0, (sr + disc) / 2.0};
}

}  // namespace ostwave
