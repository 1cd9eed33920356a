#include <gtest/gtest.h>

#include <cmath>

#include "mselab/error.hpp"
#include "mselab/residual.hpp"

using namespace mselab;

namespace {

Metric euclid_with(const char* c) {
  MetricSpec s;
  s.c = Expr::parse(c);
  return Metric(s);
}

struct Probe {
  double x, y, value;
};

// F for ĝ = I, c = 1 + xₙ³, u = 0.01 sin(πx₁) sin(πx₂) (sympy).
const Probe kDefF[] = {{0.25, 0.25, 0.098819785558047466287},
                       {0.5, 0.5, 0.19769208772178747238},
                       {0.75, 0.25, 0.098819785558047466287},
                       {0.25, 0.75, 0.098819785558047466287},
                       {0.375, 0.625, 0.16872765809027124702}};

double at(const ScalarField& f, double x, double y) {
  const Grid& g = f.grid();
  return f(static_cast<int>(std::lround(x / g.h())), static_cast<int>(std::lround(y / g.h())));
}

}  // namespace

TEST(Residual, VanishesAtZeroForEveryPreset) {
  Grid g(17);
  for (const auto& name : MetricSpec::preset_names())
    EXPECT_LE(residual_F(ScalarField(g), Metric(MetricSpec::preset(name))).max_abs(), 1e-15) << name;
}

TEST(Residual, AffineGraphsAreMinimalInEuclideanSpace) {
  Grid g(17);
  auto u = ScalarField::sample(g, [](double x, double y) { return 0.1 + 0.3 * x - 0.2 * y; });
  EXPECT_LE(residual_F(u, euclid_with("1")).max_abs(), 1e-13);
}

TEST(Residual, MatchesSymbolicOracleWithSecondOrderError) {
  Metric m = euclid_with("1 + x3^3");
  double err[2];
  int k = 0;
  for (int n : {33, 65}) {
    Grid g(n);
    auto u = ScalarField::sample(g, [](double x, double y) { return 0.01 * std::sin(M_PI * x) * std::sin(M_PI * y); });
    ScalarField F = residual_F(u, m);
    ScalarField Fx = residual_F_exact(Expr::parse("0.01*sin(pi*x1)*sin(pi*x2)"), m, g);
    double e = 0.0;
    for (const auto& p : kDefF) {
      EXPECT_NEAR(at(Fx, p.x, p.y), p.value, 1e-13);
      e = std::max(e, std::abs(at(F, p.x, p.y) - p.value));
    }
    err[k++] = e;
  }
  double rate = std::log2(err[0] / err[1]);
  EXPECT_GT(rate, 1.8);
  EXPECT_LT(rate, 2.2);
}

TEST(Residual, MeanCurvatureFormMatchesOracle) {
  Grid g(17);
  auto u = ScalarField::sample(g, [](double x, double y) { return 0.02 * x * y; });
  Metric m = euclid_with("1");
  for (auto hs : {HessianStencil::fourth_order, HessianStencil::gradient_of_gradient, HessianStencil::compact}) {
    ScalarField mc = residual_mean_curvature(u, m, hs);
    for (int j = 1; j < g.n() - 1; ++j)
      for (int i = 1; i < g.n() - 1; ++i)
        EXPECT_NEAR(mc(i, j), g.x(i) * g.x(j) / 62500.0, 1e-13);
  }
  ScalarField F = residual_F(u, m);
  EXPECT_NEAR(at(F, 0.25, 0.25), 1e-6, 1e-15);
  EXPECT_NEAR(at(F, 0.5, 0.5), 4e-6, 1e-15);
}

TEST(Residual, DomainEscapeWhenConformalFactorTurnsNegative) {
  Grid g(9);
  ScalarField u(g);
  for (int k : g.interior_nodes()) u[k] = 2.0;
  EXPECT_THROW(residual_F(u, euclid_with("1 - x3^3")), DomainEscape);
}

TEST(Residual, DivergenceFormIsWeightedResidual) {
  double gap[2];
  int k = 0;
  for (int n : {33, 65}) {
    Grid g(n);
    auto u = ScalarField::sample(g, [](double x, double y) { return 0.05 * std::sin(M_PI * x) * std::sin(M_PI * y); });
    Metric m(MetricSpec::preset("diag_poly"));
    ScalarField wf = divergence_form_weight(u, m) * residual_F(u, m);
    ScalarField d = residual_divergence_form(u, m) - wf;
    gap[k++] = d.max_abs_interior(true);
  }
  EXPECT_LT(gap[1], 1e-4);
  EXPECT_GT(std::log2(gap[0] / gap[1]), 1.7);
}

TEST(Residual, DivergenceFormReducesAtUnitFactor) {
  Grid g(33);
  auto u = ScalarField::sample(g, [](double x, double y) { return 0.1 * x * x - 0.05 * x * y + 0.02; });
  Metric m = euclid_with("1");
  ScalarField d = residual_divergence_form(u, m) - divergence_form_weight(u, m) * residual_F(u, m);
  EXPECT_LT(d.max_abs_interior(true), 1e-4);
}
