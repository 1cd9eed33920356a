#include <gtest/gtest.h>

#include <cmath>

#include "mselab/error.hpp"
#include "mselab/metric.hpp"
#include "mselab/residual.hpp"

using namespace mselab;

namespace {

Metric custom(const char* g11, const char* g22, const char* c, bool analytic = true) {
  MetricSpec s;
  s.g11 = Expr::parse(g11);
  s.g22 = Expr::parse(g22);
  s.c = Expr::parse(c);
  s.analytic_derivatives = analytic;
  return Metric(s);
}

}  // namespace

// Reference values from tests/oracles/geometry_oracles.py at (1/4, 1/2).
TEST(Christoffel, ConformalExpOracle) {
  auto G = christoffel_at(custom("exp(2*x1)", "exp(2*x1)", "1"), 0.25, 0.5);
  EXPECT_NEAR(G[0][0][0], 1.0, 1e-14);
  EXPECT_NEAR(G[0][0][1], 0.0, 1e-14);
  EXPECT_NEAR(G[0][1][1], -1.0, 1e-14);
  EXPECT_NEAR(G[1][0][0], 0.0, 1e-14);
  EXPECT_NEAR(G[1][0][1], 1.0, 1e-14);
  EXPECT_NEAR(G[1][1][0], 1.0, 1e-14);
  EXPECT_NEAR(G[1][1][1], 0.0, 1e-14);
}

TEST(Christoffel, DiagonalOracleAndFiniteDifferenceFallback) {
  for (bool analytic : {true, false}) {
    auto G = christoffel_at(custom("1", "x1^2 + 1", "1", analytic), 0.25, 0.5);
    const double tol = analytic ? 1e-14 : 1e-9;
    EXPECT_NEAR(G[0][0][0], 0.0, tol);
    EXPECT_NEAR(G[0][1][1], -0.25, tol);
    EXPECT_NEAR(G[1][0][1], 0.23529411764705882353, tol);
    EXPECT_NEAR(G[1][1][1], 0.0, tol);
  }
}

TEST(MetricSpec, TaylorConstructionRejectsLowOrders) {
  EXPECT_THROW(MetricSpec::from_taylor("bad", Expr(1.0), Expr(0.0), Expr(1.0), Expr(1.0),
                                       {{2, Expr(1.0)}}),
               MetricInvalid);
  EXPECT_THROW(MetricSpec::from_taylor("bad", Expr(1.0), Expr(0.0), Expr(1.0), Expr::parse("1 + x3"), {}),
               MetricInvalid);
  EXPECT_THROW(MetricSpec::from_taylor("bad", Expr(1.0), Expr(0.0), Expr(1.0), Expr(1.0),
                                       {{3, Expr::parse("x3")}}),
               MetricInvalid);
  EXPECT_THROW(MetricSpec::preset("hyperbolic"), InvalidArgument);
}

TEST(MetricSpec, TaylorCoefficientsAreRecovered) {
  Metric m(MetricSpec::preset("conformal_exp"));
  const double x = 0.3, y = 0.7;
  EXPECT_NEAR(m.c_dn(0, x, y), std::exp(0.3 * x - 0.2 * y), 1e-14);
  EXPECT_NEAR(m.c_dn(1, x, y), 0.0, 1e-14);
  EXPECT_NEAR(m.c_dn(2, x, y), 0.0, 1e-14);
  EXPECT_NEAR(m.c_dn(3, x, y), 0.5 * std::sin(M_PI * x) * std::sin(M_PI * y), 1e-13);
  EXPECT_NEAR(m.c_dn(4, x, y), 0.3 * y, 1e-13);
}

TEST(Metric, ValidateRejectsBadMetrics) {
  Grid g(9);
  for (const auto& name : MetricSpec::preset_names()) EXPECT_NO_THROW(Metric(MetricSpec::preset(name)).validate(g));
  EXPECT_THROW(custom("1", "1", "1 + x3^2").validate(g), MetricInvalid);
  EXPECT_THROW(custom("1", "1", "1 + x3").validate(g), MetricInvalid);
  EXPECT_THROW(custom("1 - 2*x1", "1", "1").validate(g), MetricInvalid);
  EXPECT_THROW(custom("1", "1", "x1 - 0.5").validate(g), MetricInvalid);
}

TEST(Metric, ResidualIsInvariantUnderConstantScaling) {
  Grid g(33);
  auto u = ScalarField::sample(g, [](double x, double y) { return 0.05 * std::sin(M_PI * x) * std::cos(y) + 0.01 * x; });
  for (const auto& name : MetricSpec::preset_names()) {
    MetricSpec s = MetricSpec::preset(name);
    ScalarField a = residual_F(u, Metric(s));
    ScalarField b = residual_F(u, Metric(s.scaled(2.5)));
    EXPECT_LE((a - b).max_abs(), 1e-12 * (1.0 + a.max_abs())) << name;
  }
}
