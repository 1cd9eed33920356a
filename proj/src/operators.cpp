#include "mselab/operators.hpp"

namespace mselab {

namespace fd {

namespace {

// f(t) sampled along one axis at positions 0..n-1; derivative at position p.
template <class F>
double first(F&& f, int p, int n, double h) {
  if (p == 0) return (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * h);
  if (p == n - 1) return (3.0 * f(n - 1) - 4.0 * f(n - 2) + f(n - 3)) / (2.0 * h);
  return (f(p + 1) - f(p - 1)) / (2.0 * h);
}

template <class F>
double second(F&& f, int p, int n, double h) {
  if (p == 0) return (2.0 * f(0) - 5.0 * f(1) + 4.0 * f(2) - f(3)) / (h * h);
  if (p == n - 1) return (2.0 * f(n - 1) - 5.0 * f(n - 2) + 4.0 * f(n - 3) - f(n - 4)) / (h * h);
  return (f(p + 1) - 2.0 * f(p) + f(p - 1)) / (h * h);
}

}  // namespace

double d1(const ScalarField& u, int i, int j) {
  const Grid& g = u.grid();
  return first([&](int t) { return u(t, j); }, i, g.n(), g.h());
}

double d2(const ScalarField& u, int i, int j) {
  const Grid& g = u.grid();
  return first([&](int t) { return u(i, t); }, j, g.n(), g.h());
}

double d11(const ScalarField& u, int i, int j) {
  const Grid& g = u.grid();
  return second([&](int t) { return u(t, j); }, i, g.n(), g.h());
}

double d22(const ScalarField& u, int i, int j) {
  const Grid& g = u.grid();
  return second([&](int t) { return u(i, t); }, j, g.n(), g.h());
}

double d12(const ScalarField& u, int i, int j) {
  const Grid& g = u.grid();
  return first([&](int t) { return d2(u, t, j); }, i, g.n(), g.h());
}

}  // namespace fd

VectorField partials(const ScalarField& u) {
  const Grid& g = u.grid();
  VectorField out(g);
  for (int j = 0; j < g.n(); ++j)
    for (int i = 0; i < g.n(); ++i) {
      out.x1(i, j) = fd::d1(u, i, j);
      out.x2(i, j) = fd::d2(u, i, j);
    }
  return out;
}

VectorField grad_hat(const ScalarField& u, const GeometryCache& geo) {
  const Grid& g = u.grid();
  require_same_grid(g, geo.grid(), "grad_hat");
  VectorField out(g);
  for (int k = 0; k < g.size(); ++k) {
    int i = g.col(k), j = g.row(k);
    Eigen::Vector2d du(fd::d1(u, i, j), fd::d2(u, i, j));
    Eigen::Vector2d v = geo[k].gi * du;
    out.x1[k] = v[0];
    out.x2[k] = v[1];
  }
  return out;
}

VectorField grad_hat(const ScalarField& u, const Metric& metric) {
  return grad_hat(u, GeometryCache(metric, u.grid()));
}

HessianField hess_hat(const ScalarField& u, const GeometryCache& geo) {
  const Grid& g = u.grid();
  require_same_grid(g, geo.grid(), "hess_hat");
  HessianField out(g);
  for (int k = 0; k < g.size(); ++k) {
    int i = g.col(k), j = g.row(k);
    double du[2] = {fd::d1(u, i, j), fd::d2(u, i, j)};
    double h[2][2];
    h[0][0] = fd::d11(u, i, j);
    h[1][1] = fd::d22(u, i, j);
    h[0][1] = h[1][0] = fd::d12(u, i, j);
    const auto& gam = geo[k].gam;
    auto cov = [&](int a, int b) { return h[a][b] - gam[0][a][b] * du[0] - gam[1][a][b] * du[1]; };
    out.h11[k] = cov(0, 0);
    out.h12[k] = cov(0, 1);
    out.h22[k] = cov(1, 1);
  }
  return out;
}

HessianField hess_hat(const ScalarField& u, const Metric& metric) {
  return hess_hat(u, GeometryCache(metric, u.grid()));
}

ScalarField laplace_beltrami_hat(const ScalarField& u, const GeometryCache& geo) {
  HessianField H = hess_hat(u, geo);
  ScalarField out(u.grid());
  for (int k = 0; k < u.grid().size(); ++k) {
    const auto& gi = geo[k].gi;
    out[k] = gi(0, 0) * H.h11[k] + 2.0 * gi(0, 1) * H.h12[k] + gi(1, 1) * H.h22[k];
  }
  return out;
}

ScalarField laplace_beltrami_hat(const ScalarField& u, const Metric& metric) {
  return laplace_beltrami_hat(u, GeometryCache(metric, u.grid()));
}

ScalarField norm_grad_sq_hat(const ScalarField& u, const GeometryCache& geo) {
  const Grid& g = u.grid();
  require_same_grid(g, geo.grid(), "norm_grad_sq_hat");
  ScalarField out(g);
  for (int k = 0; k < g.size(); ++k) {
    int i = g.col(k), j = g.row(k);
    Eigen::Vector2d du(fd::d1(u, i, j), fd::d2(u, i, j));
    out[k] = du.dot(geo[k].gi * du);
  }
  return out;
}

ScalarField norm_grad_sq_hat(const ScalarField& u, const Metric& metric) {
  return norm_grad_sq_hat(u, GeometryCache(metric, u.grid()));
}

ScalarField divergence_hat(const VectorField& X, const GeometryCache& geo) {
  const Grid& g = X.grid();
  require_same_grid(g, geo.grid(), "divergence_hat");
  ScalarField f1(g), f2(g);
  for (int k = 0; k < g.size(); ++k) {
    f1[k] = geo[k].sqrt_det * X.x1[k];
    f2[k] = geo[k].sqrt_det * X.x2[k];
  }
  ScalarField out(g);
  for (int k = 0; k < g.size(); ++k) {
    int i = g.col(k), j = g.row(k);
    out[k] = (fd::d1(f1, i, j) + fd::d2(f2, i, j)) / geo[k].sqrt_det;
  }
  return out;
}

}  // namespace mselab
