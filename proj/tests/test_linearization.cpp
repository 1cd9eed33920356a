#include <gtest/gtest.h>

#include <cmath>

#include "mselab/error.hpp"
#include "mselab/linearization.hpp"
#include "mselab/residual.hpp"

using namespace mselab;

namespace {

BoundaryData datum(const Grid& g, int k) {
  return BoundaryData::from_function(Gamma::all(g), [k](double x, double y) {
    return 0.5 * std::sin((k + 1) * M_PI * (x + 0.3 * y)) + 0.3 * std::cos(k * x - y);
  });
}

FdOptions fd(double eps) {
  FdOptions o;
  o.eps = eps;
  o.solver.newton_tol = 1e-13;
  o.threads = 1;
  return o;
}

double rel(const ScalarField& a, const ScalarField& b) { return (a - b).max_abs() / b.max_abs(); }

}  // namespace

TEST(Linearization, OperatorIsTheDerivativeOfTheResidual) {
  Grid g(17);
  Metric m(MetricSpec::preset("conformal_exp"));
  AdvectionDiffusion L(m, g);
  auto v = ScalarField::sample(g, [](double x, double y) { return std::sin(M_PI * x) * std::sin(2 * M_PI * y); });
  const double eps = 1e-5;
  ScalarField d = (1 / (2 * eps)) * (residual_F(eps * v, m) - residual_F(-eps * v, m));
  EXPECT_LE((L.apply(v) - d).max_abs(), 1e-6 * d.max_abs());
}

TEST(Linearization, FirstOrderDifferenceQuotientSlopes) {
  Grid g(17);
  Metric m(MetricSpec::preset("conformal_exp"));
  // Slowly varying data keep the ε² term of the one-sided quotient below the ε term.
  BoundaryData f = BoundaryData::from_function(Gamma::all(g), [](double x, double y) { return 0.6 + 0.4 * x * y; });
  ScalarField v = first_lin_solve(m, f);
  std::vector<double> e1, e2;
  for (double eps : {4e-2, 2e-2, 1e-2}) {
    e1.push_back((first_lin_fd_onesided(m, f, fd(eps)) - v).max_abs());
    e2.push_back((higher_lin_fd(m, {f}, fd(eps)) - v).max_abs());
  }
  for (int k = 0; k < 2; ++k) {
    EXPECT_NEAR(std::log2(e1[k] / e1[k + 1]), 1.0, 0.15);
    EXPECT_NEAR(std::log2(e2[k] / e2[k + 1]), 2.0, 0.2);
  }
}

TEST(Linearization, SecondOrderMatchesDifferenceQuotient) {
  Grid g(17);
  Metric m(MetricSpec::preset("diag_poly"));
  BoundaryData f1 = datum(g, 1), f2 = datum(g, 2);
  ScalarField w = second_lin_solve(m, std::nullopt, first_lin_solve(m, f1), first_lin_solve(m, f2));
  double a = rel(higher_lin_fd(m, {f1, f2}, fd(4e-2)), w);
  double b = rel(higher_lin_fd(m, {f1, f2}, fd(2e-2)), w);
  EXPECT_LT(b, 5e-3);
  EXPECT_NEAR(std::log2(a / b), 2.0, 0.3);
}

TEST(Linearization, ThirdOrderMatchesDifferenceQuotient) {
  Grid g(17);
  Metric m(MetricSpec::preset("conformal_exp"));
  AdvectionDiffusion L(m, g);
  BoundaryData f[3] = {datum(g, 0), datum(g, 1), datum(g, 2)};
  ScalarField v[3] = {first_lin_solve(m, f[0]), first_lin_solve(m, f[1]), first_lin_solve(m, f[2])};
  ScalarField w12 = second_lin_solve(L, v[0], v[1]), w13 = second_lin_solve(L, v[0], v[2]),
              w23 = second_lin_solve(L, v[1], v[2]);
  ScalarField U = third_lin_solve(L, m, {&v[0], &v[1], &v[2]}, w12, w13, w23);
  ScalarField fdU = higher_lin_fd(m, {f[0], f[1], f[2]}, fd(2e-2));
  EXPECT_LT(rel(fdU, U), 5e-2);
}

TEST(Linearization, DifferenceQuotientGuards) {
  Grid g(9);
  Metric m(MetricSpec::preset("euclidean"));
  EXPECT_THROW(higher_lin_fd(m, {}, fd(1e-2)), InvalidArgument);
  EXPECT_THROW(higher_lin_fd(m, {datum(g, 0)}, fd(0.0)), InvalidArgument);
  EXPECT_THROW(first_lin_fd_onesided(m, datum(g, 0), fd(0.5)), StencilEscape);
  EXPECT_THROW(higher_lin_fd(m, {datum(g, 0)}, fd(0.5)), StencilEscape);
}

TEST(Linearization, MagneticFormAgreesWithAdvectionForm) {
  std::vector<double> gap;
  for (int n : {33, 65}) {
    Grid g(n);
    Metric m(MetricSpec::preset("diag_poly"));
    VectorField X = advection_spec(m, g).X;
    auto u = ScalarField::sample(g, [](double x, double y) { return std::exp(x) * std::sin(2 * y) + x * y; });
    ScalarField d = magnetic_apply(advection_to_magnetic(X, m), m, u) - advection_apply(X, m, u);
    gap.push_back(d.max_abs_interior());
  }
  EXPECT_LT(gap[1], 1e-4);
  EXPECT_NEAR(std::log2(gap[0] / gap[1]), 2.0, 0.3);
}

TEST(Adjoint, PotentialMatchesSymbolicOracle) {
  Grid g(5);
  EXPECT_LE(adjoint_potential(Metric(MetricSpec::preset("conformal_exp")), g).max_abs(), 1e-14);
  ScalarField q = adjoint_potential(Metric(MetricSpec::preset("diag_poly")), g);
  EXPECT_NEAR(q(1, 1), 0.010592953424497737524, 1e-14);
  EXPECT_NEAR(q(2, 2), 0.035704623170982263639, 1e-14);
}

TEST(Adjoint, SpecialSolutionIsNonvanishingAtTheTarget) {
  Grid g(33);
  Metric m(MetricSpec::preset("conformal_exp"));
  for (const char* spec : {"all", "left"}) {
    Gamma gamma = Gamma::parse(spec, g);
    auto r = adjoint_special_solution(m, gamma, 16, 16);
    EXPECT_GE(std::abs(r.v0(16, 16)), 1e-3 * r.v0.max_abs());
    AdjointOperator op(m, g);
    EXPECT_LE(op.apply(r.v0).max_abs(), 1e-10 * (1 + r.v0.max_abs()));
    for (int k : g.boundary_nodes()) EXPECT_EQ(r.v0[k], r.trace[k]);
  }
  EXPECT_THROW(adjoint_special_solution(m, Gamma::all(g), 0, 5), InvalidArgument);
}
