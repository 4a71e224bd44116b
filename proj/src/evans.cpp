#include "ostwave/evans.hpp"

#include <boost/numeric/odeint.hpp>

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <vector>

namespace ostwave {

namespace {

namespace odeint = boost::numeric::odeint;

using State = std::vector<cplx>;  // column-major d x d fundamental matrix

struct ProfileSamples {
  const SpectralField phi, dphi, d2phi;

  explicit ProfileSamples(const SpectralField& f)
      : phi(f), dphi(differentiate(f, 1)), d2phi(differentiate(f, 2)) {}
};

template <typename Rhs>
Eigen::MatrixXcd integrate_fundamental(int dim, const Rhs& rhs,
                                       const EvansOptions& opts) {
  State y(static_cast<size_t>(dim) * dim, cplx(0.0));
  for (int j = 0; j < dim; ++j) y[static_cast<size_t>(j) * dim + j] = cplx(1.0);

  auto stepper = odeint::make_controlled(
      opts.atol, opts.rtol, odeint::runge_kutta_fehlberg78<State>());

  long steps = 0;
  auto guarded = [&](const State& x, State& dxdt, double t) {
    if (++steps > opts.max_steps)
      throw StiffIntegrationFailure("step budget exhausted over one period");
    rhs(x, dxdt, t);
  };

  try {
    odeint::integrate_adaptive(stepper, guarded, y, 0.0, 1.0, opts.initial_dt);
  } catch (const StiffIntegrationFailure&) {
    throw;
  } catch (const std::exception& e) {
    throw StiffIntegrationFailure(std::string("adaptive step failed: ") + e.what());
  }

  Eigen::MatrixXcd m(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) m(i, j) = y[static_cast<size_t>(j) * dim + i];
  return m;
}

}  // namespace

Eigen::MatrixXcd monodromy(const TravelingWave& w, cplx lambda,
                           const EvansOptions& opts) {
  const ProfileSamples ps(w.phi);
  const double k = w.k, beta = w.params.beta, gamma = w.params.gamma;
  const double c = w.c;

  if (beta != 0.0) {
    const double bk4 = beta * k * k * k * k;
    auto rhs = [&](const State& x, State& dxdt, double t) {
      const double u = ps.phi.eval(t), du = ps.dphi.eval(t), d2u = ps.d2phi.eval(t);
      dxdt.resize(x.size());
      for (int col = 0; col < 4; ++col) {
        const cplx* y = x.data() + 4 * col;
        cplx* dy = dxdt.data() + 4 * col;
        dy[0] = y[1];
        dy[1] = y[2];
        dy[2] = y[3];
        dy[3] = (lambda * k * y[1] - gamma * y[0] -
                 k * k * ((c - u) * y[2] - 2.0 * du * y[1] - d2u * y[0])) /
                bk4;
      }
    };
    return integrate_fundamental(4, rhs, opts);
  }

  // beta = 0 reduces to second order after dividing by c - phi
  double min_gap = std::numeric_limits<double>::infinity();
  for (int m = 0; m < w.phi.grid().n_points(); ++m)
    min_gap = std::min(min_gap, std::abs(c - ps.phi.eval(w.phi.grid().node(m))));
  if (min_gap <= 1e-8 * std::max(1.0, std::abs(c)))
    throw StiffIntegrationFailure(
        "profile touches the characteristic speed c; the reduced ODE degenerates");

  auto rhs = [&](const State& x, State& dxdt, double t) {
    const double u = ps.phi.eval(t), du = ps.dphi.eval(t), d2u = ps.d2phi.eval(t);
    dxdt.resize(x.size());
    for (int col = 0; col < 2; ++col) {
      const cplx* y = x.data() + 2 * col;
      cplx* dy = dxdt.data() + 2 * col;
      dy[0] = y[1];
      dy[1] = ((lambda / k + 2.0 * du) * y[1] + (d2u - gamma / (k * k)) * y[0]) /
              (c - u);
    }
  };
  return integrate_fundamental(2, rhs, opts);
}

EvansValue monodromy_evans(const TravelingWave& w, cplx lambda, double xi,
                           const EvansOptions& opts) {
  EvansValue v;
  v.monodromy = monodromy(w, lambda, opts);
  const int dim = static_cast<int>(v.monodromy.rows());
  const cplx rot = std::exp(cplx(0.0, xi));
  Eigen::MatrixXcd shifted = v.monodromy;
  shifted.diagonal().array() -= rot;
  v.determinant = shifted.determinant();
  v.scale = std::pow(std::max(1.0, v.monodromy.cwiseAbs().maxCoeff()), dim);
  return v;
}

}  // namespace ostwave
