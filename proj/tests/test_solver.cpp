#include <gtest/gtest.h>

#include <cmath>

#include "mselab/error.hpp"
#include "mselab/residual.hpp"
#include "mselab/solver.hpp"

using namespace mselab;

TEST(Solver, ZeroDataGivesZeroSolution) {
  Grid g(17);
  for (const auto& name : MetricSpec::preset_names()) {
    auto r = solve_bvp(Metric(MetricSpec::preset(name)), BoundaryData(g));
    EXPECT_EQ(r.u.max_abs(), 0.0) << name;
  }
}

TEST(Solver, ReproducesAffineGraphsInEuclideanSpace) {
  Grid g(17);
  Metric m(MetricSpec::preset("euclidean"));
  auto aff = [](double x, double y) { return 0.02 + 0.03 * x - 0.01 * y; };
  auto r = solve_bvp(m, BoundaryData::from_function(Gamma::all(g), aff));
  EXPECT_LE((r.u - ScalarField::sample(g, aff)).max_abs(), 1e-12);
}

TEST(Solver, ManufacturedSolutionConvergesAtSecondOrder) {
  Metric m(MetricSpec::preset("conformal_exp"));
  Expr ue = Expr::parse("0.05*sin(pi*x1)*cos(x2) + 0.02*x1*x2");
  std::vector<double> err;
  for (int n : {17, 33, 65}) {
    Grid g(n);
    SolverOptions o;
    o.newton_tol = 1e-12;
    o.source = residual_F_exact(ue, m, g);
    auto r = solve_bvp(m, BoundaryData::from_expr(Gamma::all(g), ue), o);
    auto exact = ScalarField::sample(g, [&](double x, double y) { return ue.eval(x, y); });
    err.push_back((r.u - exact).max_abs());
  }
  for (int k = 0; k + 1 < 3; ++k) {
    double rate = std::log2(err[k] / err[k + 1]);
    EXPECT_GT(rate, 1.8);
    EXPECT_LT(rate, 2.2);
  }
}

TEST(Solver, NewtonReachesQuadraticPhase) {
  Grid g(33);
  Metric m(MetricSpec::preset("diag_poly"));
  SolverOptions o;
  o.newton_tol = 1e-13;
  auto f = BoundaryData::from_function(Gamma::all(g), [](double x, double y) { return 0.08 * std::cos(M_PI * x * y); });
  auto r = solve_bvp(m, f, o);
  EXPECT_LE(r.residual, 1e-13);
  EXPECT_TRUE(newton_phase(r.history).quadratic);
  EXPECT_EQ(r.history.size(), static_cast<size_t>(r.iterations + 1));
}

TEST(Solver, RejectsLargeDataAndBadOptions) {
  Grid g(9);
  Metric m(MetricSpec::preset("euclidean"));
  auto big = BoundaryData::from_function(Gamma::all(g), [](double, double) { return 0.2; });
  EXPECT_THROW(solve_bvp(m, big), InvalidArgument);
  SolverOptions o;
  o.newton_tol = 0.0;
  EXPECT_THROW(solve_bvp(m, BoundaryData(g), o), InvalidArgument);
  o = {};
  o.max_newton_iters = 0;
  EXPECT_THROW(solve_bvp(m, BoundaryData(g), o), InvalidArgument);
  ScalarField nan(g);
  nan(0, 4) = std::nan("");
  EXPECT_THROW(BoundaryData(Gamma::all(g), nan), InvalidArgument);
}

TEST(Solver, ReportsNonConvergence) {
  Grid g(17);
  Metric m(MetricSpec::preset("conformal_exp"));
  SolverOptions o;
  o.max_newton_iters = 1;
  o.newton_tol = 1e-15;
  auto f = BoundaryData::from_function(Gamma::all(g), [](double x, double y) { return 0.09 * std::sin(3 * x + y); });
  EXPECT_THROW(solve_bvp(m, f, o), NoConvergence);
}
