#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "ostwave/errors.hpp"
#include "ostwave/spectral.hpp"

using namespace ostwave;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

SpectralField cosine(const PeriodicGrid& grid, int n, double amp = 1.0) {
  SpectralField f(grid);
  f.set_coeff(n, cplx(amp / 2.0, 0.0));
  return f;
}
}  // namespace

TEST_CASE("grid construction enforces the dealiasing bound") {
  PeriodicGrid g;
  CHECK(g.n_modes() == 64);
  CHECK(g.n_points() == 256);
  CHECK(PeriodicGrid(16).n_points() == 64);
  CHECK_NOTHROW(PeriodicGrid(16, 49));  // exactly 3N+1
  CHECK_THROWS_AS(PeriodicGrid(16, 48), GridMismatch);
  CHECK(g.node(0) == 0.0);
  CHECK(g.node(64) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("cosine fields evaluate and differentiate in closed form") {
  PeriodicGrid grid(16);
  const SpectralField f = cosine(grid, 1);
  CHECK(std::abs(f.coeff(1) - cplx(0.5, 0.0)) < 1e-15);
  CHECK(std::abs(f.coeff(-1) - cplx(0.5, 0.0)) < 1e-15);
  CHECK(std::abs(f.eval(0.0) - 1.0) < 1e-14);
  CHECK(std::abs(f.eval(0.25)) < 1e-14);
  CHECK(std::abs(f.eval(1.0 / 3.0) - std::cos(kTwoPi / 3.0)) < 1e-14);

  // d/dtheta cos(2 pi theta) = -2 pi sin(2 pi theta), coeff(+1) = i pi
  const SpectralField df = differentiate(f);
  CHECK(std::abs(df.coeff(1) - cplx(0.0, std::numbers::pi)) < 1e-13);
  CHECK(std::abs(df.eval(0.25) + kTwoPi) < 1e-12);

  const SpectralField d2f = differentiate(f, 2);
  CHECK(std::abs(d2f.coeff(1) + cplx(2.0 * std::numbers::pi * std::numbers::pi, 0.0)) < 1e-11);
}

TEST_CASE("antiderivative inverts differentiation on mean-zero fields") {
  PeriodicGrid grid(32);
  const SpectralField f = oracles::random_field(grid, 7u);
  REQUIRE(f.is_mean_zero());

  const SpectralField g = antiderivative(differentiate(f));
  double worst = 0.0;
  for (int n = -32; n <= 32; ++n)
    worst = std::max(worst, std::abs(g.coeff(n) - f.coeff(n)));
  CHECK(worst < 1e-13 * std::max(1.0, f.max_abs_coeff()));

  // antiderivative of cos(2 pi theta) is sin(2 pi theta)/(2 pi)
  const SpectralField s = antiderivative(cosine(grid, 1));
  CHECK(std::abs(s.eval(0.25) - 1.0 / kTwoPi) < 1e-14);

  SpectralField with_mean = f;
  with_mean.set_coeff(0, cplx(0.5, 0.0));
  CHECK_THROWS_AS(antiderivative(with_mean), MeanNotZero);
}

TEST_CASE("inner product matches quadrature and satisfies Parseval") {
  PeriodicGrid grid(24);
  const SpectralField f = oracles::random_field(grid, 11u, 0.2, false);
  const SpectralField g = oracles::random_field(grid, 13u, 0.2, false);

  const cplx ip = inner_product(f, g);

  // trapezoid is exact here: integrand has bandwidth 2N < n_points
  double quad_re = oracles::trapezoid(
      [&](double t) { return f.eval(t) * g.eval(t); }, grid.n_points());
  CHECK(std::abs(ip.real() - quad_re) < 1e-12 * std::max(1.0, std::abs(quad_re)));
  CHECK(std::abs(ip.imag()) < 1e-12);

  const double n2 = inner_product(f, f).real();
  CHECK(std::abs(f.norm() * f.norm() - n2) < 1e-12 * n2);
}

TEST_CASE("integration by parts holds to near machine precision") {
  PeriodicGrid grid(40);
  const SpectralField f = oracles::random_field(grid, 21u);
  const SpectralField g = oracles::random_field(grid, 22u);
  const cplx lhs = inner_product(f, differentiate(g));
  const cplx rhs = -inner_product(differentiate(f), g);
  CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(lhs)));
}

TEST_CASE("dealiased product agrees with naive convolution") {
  PeriodicGrid grid(20);
  const SpectralField f = oracles::random_field(grid, 31u, 0.1, false);
  const SpectralField g = oracles::random_field(grid, 32u, 0.1, false);
  const SpectralField fg = multiply(f, g);

  const auto full = oracles::convolve(f.coeffs(), g.coeffs());
  const int n = grid.n_modes();
  double worst = 0.0, scale = 0.0;
  for (int j = -n; j <= n; ++j) {
    worst = std::max(worst, std::abs(fg.coeff(j) - full[j + 2 * n]));
    scale = std::max(scale, std::abs(full[j + 2 * n]));
  }
  CHECK(worst < 1e-13 * std::max(1.0, scale));

  PeriodicGrid other(24);
  CHECK_THROWS_AS(multiply(f, SpectralField(other)), GridMismatch);
}

TEST_CASE("Toeplitz matrix action reproduces the dealiased product") {
  PeriodicGrid grid(12);
  const SpectralField f = oracles::random_field(grid, 41u, 0.05, false);
  const SpectralField g = oracles::random_field(grid, 42u, 0.05, false);

  const Eigen::MatrixXcd t = toeplitz_of(f);
  REQUIRE(t.rows() == 25);
  Eigen::VectorXcd gv(25);
  for (int n = -12; n <= 12; ++n) gv(n + 12) = g.coeff(n);
  const Eigen::VectorXcd prod = t * gv;

  const SpectralField fg = multiply(f, g);
  double worst = 0.0;
  for (int n = -12; n <= 12; ++n)
    worst = std::max(worst, std::abs(prod(n + 12) - fg.coeff(n)));
  CHECK(worst < 1e-13 * std::max(1.0, fg.max_abs_coeff()));
}

TEST_CASE("values round-trip through the grid") {
  PeriodicGrid grid(18);
  const SpectralField f = oracles::random_field(grid, 51u, 0.2, false);
  const auto vals = f.values();
  REQUIRE(static_cast<int>(vals.size()) == grid.n_points());
  for (int m = 0; m < grid.n_points(); ++m)
    CHECK(std::abs(vals[m] - f.eval(grid.node(m))) < 1e-12);

  const SpectralField back = SpectralField::from_values(grid, vals);
  double worst = 0.0;
  for (int n = -18; n <= 18; ++n)
    worst = std::max(worst, std::abs(back.coeff(n) - f.coeff(n)));
  CHECK(worst < 1e-13);
}

TEST_CASE("cosine coefficient accessors invert from_cosines") {
  PeriodicGrid grid(8);
  std::vector<double> a = {0.25, 1.0, -0.5, 0.125, 0.0, 0.0, 0.0, 0.0, 0.0};
  const SpectralField f = SpectralField::from_cosines(grid, a);
  CHECK(std::abs(f.mean() - 0.25) < 1e-15);
  for (int n = 1; n <= 8; ++n)
    CHECK(std::abs(f.cosine_coeff(n) - a[static_cast<size_t>(n)]) < 1e-15);
  CHECK(std::abs(f.eval(0.0) - (0.25 + 1.0 - 0.5 + 0.125)) < 1e-14);
}

TEST_CASE("regrid preserves shared modes and truncates the rest") {
  PeriodicGrid small(10), big(26);
  const SpectralField f = oracles::random_field(small, 61u, 0.1, false);
  const SpectralField up = f.regrid(big);
  for (int n = -10; n <= 10; ++n)
    CHECK(std::abs(up.coeff(n) - f.coeff(n)) < 1e-15);
  CHECK(std::abs(up.coeff(19)) == 0.0);
  const SpectralField down = up.regrid(small);
  for (int n = -10; n <= 10; ++n)
    CHECK(std::abs(down.coeff(n) - f.coeff(n)) < 1e-15);
}

TEST_CASE("hermitian symmetry is enforced on construction") {
  PeriodicGrid grid(4);
  std::vector<cplx> c(9, cplx(0.0));
  c[4 + 2] = cplx(0.3, 0.7);
  c[4 - 2] = cplx(0.0, 0.0);  // inconsistent on purpose
  const SpectralField f = SpectralField::from_coeffs(grid, c);
  CHECK(std::abs(f.coeff(-2) - std::conj(f.coeff(2))) == 0.0);
  CHECK(std::abs(f.coeff(2) - cplx(0.15, 0.35)) < 1e-15);

  SpectralField g(grid);
  g.set_coeff(1, cplx(0.0, 1.0));
  CHECK(std::abs(g.coeff(-1) - cplx(0.0, -1.0)) == 0.0);
  CHECK(std::abs(g.mean()) == 0.0);
}
