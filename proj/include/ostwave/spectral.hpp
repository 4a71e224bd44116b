#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "ostwave/errors.hpp"

namespace ostwave {

using cplx = std::complex<double>;

// Uniform collocation grid on [0,1) resolving Fourier modes |n| <= n_modes.
// n_points >= 3*n_modes + 1 so quadratic products can be dealiased exactly.
class PeriodicGrid {
 public:
  PeriodicGrid() : PeriodicGrid(64, 256) {}
  explicit PeriodicGrid(int n_modes) : PeriodicGrid(n_modes, 4 * n_modes) {}
  PeriodicGrid(int n_modes, int n_points);

  int n_modes() const { return n_modes_; }
  int n_points() const { return n_points_; }
  double node(int m) const { return static_cast<double>(m) / n_points_; }
  std::vector<double> nodes() const;

  bool operator==(const PeriodicGrid&) const = default;

 private:
  int n_modes_;
  int n_points_;
};

// Real-valued 1-periodic field stored as Hermitian Fourier coefficients,
//   f(theta) = sum_{n=-N..N} c_n e^{2 pi i n theta},  c_{-n} = conj(c_n).
class SpectralField {
 public:
  explicit SpectralField(const PeriodicGrid& grid);

  // coeffs holds n = -N..N in ascending order; symmetrized on input.
  static SpectralField from_coeffs(const PeriodicGrid& grid,
                                   std::span<const cplx> coeffs);
  // a[0] + sum_{n>=1} a[n] cos(2 pi n theta); a may be shorter than N+1.
  static SpectralField from_cosines(const PeriodicGrid& grid,
                                    std::span<const double> a);
  // samples on the grid nodes, size n_points
  static SpectralField from_values(const PeriodicGrid& grid,
                                   std::span<const double> v);

  const PeriodicGrid& grid() const { return grid_; }
  int n_modes() const { return grid_.n_modes(); }

  cplx coeff(int n) const;             // 0 outside |n| <= N
  void set_coeff(int n, cplx v);       // keeps Hermitian symmetry
  std::span<const cplx> coeffs() const { return c_; }
  double cosine_coeff(int n) const;    // n=0: mean, n>=1: 2 Re c_n

  double mean() const { return c_[grid_.n_modes()].real(); }
  bool is_mean_zero(double tol = 1e-12) const;

  double eval(double theta) const;     // direct mode summation
  std::vector<double> values() const;  // on the grid nodes

  double norm() const;                 // L2 norm, Parseval
  double max_abs() const;              // max over grid nodes
  double max_abs_coeff() const;

  SpectralField regrid(const PeriodicGrid& g) const;  // truncate / zero-pad

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double s);

 private:
  PeriodicGrid grid_;
  std::vector<cplx> c_;  // size 2N+1, index n + N

  void enforce_hermitian();
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField f);

// d^order/dtheta^order, diagonal factor (2 pi i n)^order
SpectralField differentiate(const SpectralField& f, int order = 1);

// Mean-zero antiderivative; requires |c_0| <= 1e-12 * max(1, ||f||).
SpectralField antiderivative(const SpectralField& f, int order = 1);

// <f,g> = integral conj(f) g = sum conj(c_n) d_n; conjugate-linear in f.
cplx inner_product(const SpectralField& f, const SpectralField& g);

// Pointwise product, dealiased by transforming on the (>= 3N+1)-point grid.
SpectralField multiply(const SpectralField& f, const SpectralField& g);

// T[j,l] = coeff(j - l), indices j,l = -N..N. Acting on the coefficient
// vector of g this is the exact truncation of the product f*g.
Eigen::MatrixXcd toeplitz_of(const SpectralField& f);

void require_same_grid(const SpectralField& a, const SpectralField& b,
                       const char* where);

}  // namespace ostwave
