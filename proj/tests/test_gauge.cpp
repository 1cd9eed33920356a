#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mselab/error.hpp"
#include "mselab/gauge.hpp"
#include "mselab/operators.hpp"

using namespace mselab;

TEST(Gauge, QuadraticPotentialIsRecoveredExactly) {
  Grid g(17);
  Metric m(MetricSpec::preset("euclidean"));
  auto psi = [](double x, double y) { return x * x + x * y - 0.5 * y * y; };
  VectorField X1(ScalarField::sample(g, [](double x, double y) { return 2 * x + y + 0.3; }),
                 ScalarField::sample(g, [](double x, double y) { return x - y - 0.1; }));
  VectorField X2(ScalarField::sample(g, [](double, double) { return 0.3; }),
                 ScalarField::sample(g, [](double, double) { return -0.1; }));
  ScalarField phi = poincare_potential(X1, X2, m, Gamma::all(g));
  ScalarField d = phi - ScalarField::sample(g, psi);
  EXPECT_LE(d.values().maxCoeff() - d.values().minCoeff(), 1e-13);
  int anchor = Gamma::all(g).measurement_nodes()[Gamma::all(g).measurement_nodes().size() / 2];
  EXPECT_EQ(phi[anchor], 0.0);
}

TEST(Gauge, DiscreteGradientsAreClosed) {
  Grid g(33);
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  ScalarField psi(g);
  for (int k = 0; k < g.size(); ++k) psi[k] = U(rng);
  ScalarField a1(g), a2(g);
  for (int j = 0; j < g.n(); ++j)
    for (int i = 0; i < g.n(); ++i) {
      a1(i, j) = fd::d1(psi, i, j);
      a2(i, j) = fd::d2(psi, i, j);
    }
  EXPECT_LE(discrete_curl(a1, a2).max_abs(), 1e-9);
  EXPECT_NO_THROW(integrate_closed_form(a1, a2, 0, 0));
}

TEST(Gauge, RotationalFieldIsNotClosed) {
  Grid g(17);
  auto a1 = ScalarField::sample(g, [](double, double y) { return -y; });
  auto a2 = ScalarField::sample(g, [](double x, double) { return x; });
  EXPECT_NEAR(discrete_curl(a1, a2)(5, 7), 2.0, 1e-12);
  EXPECT_THROW(integrate_closed_form(a1, a2, 0, 0), NotClosed);
  EXPECT_THROW(integrate_closed_form(a1, a1, 0, 20), InvalidArgument);
}

TEST(Gauge, PdeResidualMatchesSymbolicOracle) {
  Metric m(MetricSpec::preset("diag_poly"));
  struct P {
    double x, y, v;
  };
  const P probes[] = {{0.25, 0.25, -0.22661254581393374597},
                      {0.5, 0.5, -0.27366080144296578022},
                      {0.75, 0.25, -0.58640673012001532998}};
  std::vector<double> err;
  for (int n : {33, 65}) {
    Grid g(n);
    auto phi = ScalarField::sample(g, [](double x, double y) { return std::sin(x) * std::cos(2 * y) / 5 + x * y / 10; });
    // ĝ(X1, ∇_ĝφ) = X1ʲ∂ⱼφ.
    VectorField X1(ScalarField::sample(g, [](double, double y) { return 0.3 * y; }),
                   ScalarField::sample(g, [](double x, double) { return -0.2 * x; }));
    ScalarField r = gauge_pde_residual(phi, X1, m);
    double e = 0.0;
    for (const auto& p : probes) {
      int i = static_cast<int>(std::lround(p.x * (n - 1))), j = static_cast<int>(std::lround(p.y * (n - 1)));
      e = std::max(e, std::abs(r(i, j) - p.v));
    }
    err.push_back(e);
  }
  EXPECT_LT(err[1], 1e-3);
  EXPECT_NEAR(std::log2(err[0] / err[1]), 2.0, 0.3);
}
