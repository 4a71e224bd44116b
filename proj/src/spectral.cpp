#include "ostwave/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace ostwave {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// FFTW planner is not thread-safe; plan creation is serialized and the
// plan+buffer pairs live in a per-thread cache keyed by transform size.
std::mutex g_planner_mutex;

struct FftPlan {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  std::vector<cplx> buf;

  explicit FftPlan(int m) : buf(m) {
    std::lock_guard<std::mutex> lock(g_planner_mutex);
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    fwd = fftw_plan_dft_1d(m, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_1d(m, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~FftPlan() {
    std::lock_guard<std::mutex> lock(g_planner_mutex);
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
};

FftPlan& plan_for(int m) {
  thread_local std::map<int, std::unique_ptr<FftPlan>> cache;
  auto& slot = cache[m];
  if (!slot) slot = std::make_unique<FftPlan>(m);
  return *slot;
}

// coeffs (n=-N..N) -> samples at theta_m = m/M; fftw backward is the
// unnormalized synthesis sum, so bins carry the coefficients directly.
void synth(std::span<const cplx> c, int n_modes, int m, std::vector<cplx>& out) {
  FftPlan& pl = plan_for(m);
  std::fill(pl.buf.begin(), pl.buf.end(), cplx(0.0));
  for (int n = -n_modes; n <= n_modes; ++n)
    pl.buf[(n % m + m) % m] = c[n + n_modes];
  fftw_execute(pl.bwd);
  out = pl.buf;
}

// samples -> coeffs (n=-N..N)
void analyze(std::span<const cplx> v, int n_modes, std::vector<cplx>& c) {
  const int m = static_cast<int>(v.size());
  FftPlan& pl = plan_for(m);
  std::copy(v.begin(), v.end(), pl.buf.begin());
  fftw_execute(pl.fwd);
  c.assign(2 * n_modes + 1, cplx(0.0));
  for (int n = -n_modes; n <= n_modes; ++n)
    c[n + n_modes] = pl.buf[(n % m + m) % m] / static_cast<double>(m);
}

}  // namespace

PeriodicGrid::PeriodicGrid(int n_modes, int n_points)
    : n_modes_(n_modes), n_points_(n_points) {
  if (n_modes < 1)
    throw GridMismatch("PeriodicGrid: n_modes must be >= 1");
  if (n_points < 3 * n_modes + 1)
    throw GridMismatch("PeriodicGrid: n_points must be >= 3*n_modes + 1 (got " +
                       std::to_string(n_points) + " for N = " +
                       std::to_string(n_modes) + ")");
}

std::vector<double> PeriodicGrid::nodes() const {
  std::vector<double> out(n_points_);
  for (int m = 0; m < n_points_; ++m) out[m] = node(m);
  return out;
}

SpectralField::SpectralField(const PeriodicGrid& grid)
    : grid_(grid), c_(2 * grid.n_modes() + 1, cplx(0.0)) {}

void SpectralField::enforce_hermitian() {
  const int n_modes = grid_.n_modes();
  c_[n_modes] = cplx(c_[n_modes].real(), 0.0);
  for (int n = 1; n <= n_modes; ++n) {
    const cplx avg = 0.5 * (c_[n_modes + n] + std::conj(c_[n_modes - n]));
    c_[n_modes + n] = avg;
    c_[n_modes - n] = std::conj(avg);
  }
}

SpectralField SpectralField::from_coeffs(const PeriodicGrid& grid,
                                         std::span<const cplx> coeffs) {
  if (static_cast<int>(coeffs.size()) != 2 * grid.n_modes() + 1)
    throw GridMismatch("from_coeffs: expected 2N+1 coefficients");
  SpectralField f(grid);
  std::copy(coeffs.begin(), coeffs.end(), f.c_.begin());
  f.enforce_hermitian();
  return f;
}

SpectralField SpectralField::from_cosines(const PeriodicGrid& grid,
                                          std::span<const double> a) {
  if (static_cast<int>(a.size()) > grid.n_modes() + 1)
    throw GridMismatch("from_cosines: more cosine coefficients than modes");
  SpectralField f(grid);
  const int n_modes = grid.n_modes();
  if (!a.empty()) f.c_[n_modes] = cplx(a[0], 0.0);
  for (int n = 1; n < static_cast<int>(a.size()); ++n) {
    f.c_[n_modes + n] = cplx(0.5 * a[n], 0.0);
    f.c_[n_modes - n] = cplx(0.5 * a[n], 0.0);
  }
  return f;
}

SpectralField SpectralField::from_values(const PeriodicGrid& grid,
                                         std::span<const double> v) {
  if (static_cast<int>(v.size()) != grid.n_points())
    throw GridMismatch("from_values: expected n_points samples");
  std::vector<cplx> vc(v.begin(), v.end());
  SpectralField f(grid);
  analyze(vc, grid.n_modes(), f.c_);
  f.enforce_hermitian();
  return f;
}

cplx SpectralField::coeff(int n) const {
  if (std::abs(n) > grid_.n_modes()) return cplx(0.0);
  return c_[n + grid_.n_modes()];
}

void SpectralField::set_coeff(int n, cplx v) {
  const int n_modes = grid_.n_modes();
  if (std::abs(n) > n_modes)
    throw GridMismatch("set_coeff: mode index out of range");
  if (n == 0) {
    c_[n_modes] = cplx(v.real(), 0.0);
  } else {
    c_[n_modes + n] = v;
    c_[n_modes - n] = std::conj(v);
  }
}

double SpectralField::cosine_coeff(int n) const {
  if (n == 0) return mean();
  return 2.0 * coeff(n).real();
}

bool SpectralField::is_mean_zero(double tol) const {
  return std::abs(mean()) <= tol * std::max(1.0, norm());
}

double SpectralField::eval(double theta) const {
  const int n_modes = grid_.n_modes();
  double acc = c_[n_modes].real();
  for (int n = 1; n <= n_modes; ++n) {
    const cplx e(std::cos(kTwoPi * n * theta), std::sin(kTwoPi * n * theta));
    acc += 2.0 * (c_[n_modes + n] * e).real();
  }
  return acc;
}

std::vector<double> SpectralField::values() const {
  std::vector<cplx> v;
  synth(c_, grid_.n_modes(), grid_.n_points(), v);
  std::vector<double> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = v[i].real();
  return out;
}

double SpectralField::norm() const {
  double s = 0.0;
  for (const cplx& z : c_) s += std::norm(z);
  return std::sqrt(s);
}

double SpectralField::max_abs() const {
  double m = 0.0;
  for (double v : values()) m = std::max(m, std::abs(v));
  return m;
}

double SpectralField::max_abs_coeff() const {
  double m = 0.0;
  for (const cplx& z : c_) m = std::max(m, std::abs(z));
  return m;
}

SpectralField SpectralField::regrid(const PeriodicGrid& g) const {
  SpectralField out(g);
  const int keep = std::min(g.n_modes(), grid_.n_modes());
  for (int n = -keep; n <= keep; ++n)
    out.c_[n + g.n_modes()] = c_[n + grid_.n_modes()];
  return out;
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  require_same_grid(*this, o, "operator+=");
  for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  require_same_grid(*this, o, "operator-=");
  for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (cplx& z : c_) z *= s;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField f) { return f *= s; }

void require_same_grid(const SpectralField& a, const SpectralField& b,
                       const char* where) {
  if (!(a.grid() == b.grid()))
    throw GridMismatch(std::string(where) + ": fields live on different grids");
}

SpectralField differentiate(const SpectralField& f, int order) {
  const int n_modes = f.n_modes();
  std::vector<cplx> c(f.coeffs().begin(), f.coeffs().end());
  for (int n = -n_modes; n <= n_modes; ++n)
    c[n + n_modes] *= std::pow(cplx(0.0, kTwoPi * n), order);
  return SpectralField::from_coeffs(f.grid(), c);
}

SpectralField antiderivative(const SpectralField& f, int order) {
  if (std::abs(f.coeff(0)) > 1e-12 * std::max(1.0, f.norm()))
    throw MeanNotZero("antiderivative: field has nonzero mean " +
                      std::to_string(f.coeff(0).real()));
  const int n_modes = f.n_modes();
  std::vector<cplx> c(f.coeffs().begin(), f.coeffs().end());
  c[n_modes] = cplx(0.0);
  for (int n = -n_modes; n <= n_modes; ++n) {
    if (n == 0) continue;
    c[n + n_modes] /= std::pow(cplx(0.0, kTwoPi * n), order);
  }
  return SpectralField::from_coeffs(f.grid(), c);
}

cplx inner_product(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f, g, "inner_product");
  cplx s(0.0);
  auto cf = f.coeffs();
  auto cg = g.coeffs();
  for (size_t i = 0; i < cf.size(); ++i) s += std::conj(cf[i]) * cg[i];
  return s;
}

SpectralField multiply(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f, g, "multiply");
  const int m = f.grid().n_points();  // >= 3N+1: quadratic products exact
  std::vector<cplx> vf, vg;
  synth(f.coeffs(), f.n_modes(), m, vf);
  synth(g.coeffs(), g.n_modes(), m, vg);
  for (int i = 0; i < m; ++i) vf[i] *= vg[i];
  SpectralField out(f.grid());
  std::vector<cplx> c;
  analyze(vf, f.n_modes(), c);
  return SpectralField::from_coeffs(f.grid(), c);
}

Eigen::MatrixXcd toeplitz_of(const SpectralField& f) {
  const int n_modes = f.n_modes();
  const int dim = 2 * n_modes + 1;
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(dim, dim);
  for (int j = -n_modes; j <= n_modes; ++j)
    for (int l = -n_modes; l <= n_modes; ++l)
      t(j + n_modes, l + n_modes) = f.coeff(j - l);
  return t;
}

}  // namespace ostwave
