#include "mselab/gauge.hpp"

#include <cmath>
#include <sstream>

#include "mselab/error.hpp"
#include "mselab/operators.hpp"

namespace mselab {

ScalarField discrete_curl(const ScalarField& alpha1, const ScalarField& alpha2) {
  require_same_grid(alpha1.grid(), alpha2.grid(), "discrete_curl");
  const Grid& g = alpha1.grid();
  ScalarField c(g);
  for (int j = 0; j < g.n(); ++j)
    for (int i = 0; i < g.n(); ++i) c(i, j) = fd::d1(alpha2, i, j) - fd::d2(alpha1, i, j);
  return c;
}

ScalarField integrate_closed_form(const ScalarField& alpha1, const ScalarField& alpha2, int i0, int j0,
                                  double curl_tol) {
  const Grid& g = alpha1.grid();
  if (i0 < 0 || j0 < 0 || i0 >= g.n() || j0 >= g.n()) throw InvalidArgument("anchor node outside the grid");
  double curl = discrete_curl(alpha1, alpha2).max_abs();
  if (!(curl <= curl_tol)) {
    std::ostringstream os;
    os << "1-form is not closed: max |curl| = " << curl << " > " << curl_tol;
    throw NotClosed(os.str());
  }
  const double h = g.h();
  ScalarField phi(g);
  for (int i = 1; i < g.n(); ++i) phi(i, 0) = phi(i - 1, 0) + 0.5 * h * (alpha1(i - 1, 0) + alpha1(i, 0));
  for (int i = 0; i < g.n(); ++i)
    for (int j = 1; j < g.n(); ++j) phi(i, j) = phi(i, j - 1) + 0.5 * h * (alpha2(i, j - 1) + alpha2(i, j));
  double a = phi(i0, j0);
  for (int k = 0; k < g.size(); ++k) phi[k] -= a;
  return phi;
}

ScalarField poincare_potential(const VectorField& X1, const VectorField& X2, const Metric& metric,
                               const Gamma& gamma, double curl_tol) {
  const Grid& g = gamma.grid();
  require_same_grid(g, X1.x1.grid(), "poincare_potential");
  require_same_grid(g, X2.x1.grid(), "poincare_potential");
  ScalarField a1(g), a2(g);
  for (int k = 0; k < g.size(); ++k) {
    Eigen::Matrix2d G = metric.ghat(g.x(g.col(k)), g.x(g.row(k)));
    Eigen::Vector2d a = G * Eigen::Vector2d(X1.x1[k] - X2.x1[k], X1.x2[k] - X2.x2[k]);
    a1[k] = a[0];
    a2[k] = a[1];
  }
  const auto& mn = gamma.measurement_nodes();
  int anchor = mn[mn.size() / 2];
  return integrate_closed_form(a1, a2, g.col(anchor), g.row(anchor), curl_tol);
}

ScalarField gauge_pde_residual(const ScalarField& phi, const VectorField& X1, const Metric& metric) {
  const Grid& g = phi.grid();
  require_same_grid(g, X1.x1.grid(), "gauge_pde_residual");
  GeometryCache geo(metric, g);
  ScalarField lap = laplace_beltrami_hat(phi, geo);
  ScalarField n2 = norm_grad_sq_hat(phi, geo);
  VectorField d = partials(phi);
  ScalarField r(g);
  for (int k : g.interior_nodes()) r[k] = lap[k] - (X1.x1[k] * d.x1[k] + X1.x2[k] * d.x2[k]) + 0.5 * n2[k];
  return r;
}

}  // namespace mselab
