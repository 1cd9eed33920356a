#include <gtest/gtest.h>

#include <cmath>

#include "mselab/error.hpp"
#include "mselab/recovery.hpp"
#include "mselab/surface_gradient.hpp"

using namespace mselab;

namespace {

std::vector<BoundaryTrace> dn1(const Metric& m, const Gamma& gamma, const std::vector<BoundaryData>& fam) {
  std::vector<BoundaryTrace> out;
  for (const auto& f : fam) out.push_back(neumann_trace(first_lin_solve(m, f), m, gamma));
  return out;
}

}  // namespace

TEST(SurfaceGradient, MatchedDataGivesZeroCorrection) {
  Grid g(33);
  Metric m(MetricSpec::preset("diag_poly"));
  Gamma all = Gamma::all(g);
  auto fam = family_data(all, 2);
  auto d = dn1(m, all, fam);
  auto r = recover_surface_gradient(m, all, fam, d, d, 1.7);
  EXPECT_LE(r.deltaX.x1.max_abs() + r.deltaX.x2.max_abs(), 1e-10);
  EXPECT_NEAR(r.lambda_hat, 1.7, 1e-10);
}

TEST(SurfaceGradient, RecoversLinearLogFactor) {
  Grid g(33);
  MetricSpec base = MetricSpec::preset("euclidean");
  Expr ct = Expr::parse("1 + 0.1*x1");
  Metric m(base), mt(base.conformal_product(ct));
  Gamma all = Gamma::all(g);
  auto fam = family_data(all, 2);
  const int anchor = all.measurement_nodes()[all.measurement_nodes().size() / 2];
  const double c_anchor = ct.eval(g.x(g.col(anchor)), g.x(g.row(anchor)));
  auto r = recover_surface_gradient(m, all, fam, dn1(m, all, fam), dn1(mt, all, fam), c_anchor);
  EXPECT_LT(relative_l2_interior(r.deltaX, surface_gradient_exact(m, ct, g)), 0.15);
  // exp(mean log c̃) over the interior, ≈ 1.0488 for 1 + 0.1x₁.
  double mean_log = 0.0;
  for (int k : g.interior_nodes()) mean_log += std::log(ct.eval(g.x(g.col(k)), g.x(g.row(k))));
  mean_log /= static_cast<double>(g.interior_nodes().size());
  EXPECT_NEAR(r.lambda_hat, std::exp(mean_log), 0.01);
}

TEST(SurfaceGradient, InputValidation) {
  Grid g(17);
  Metric m(MetricSpec::preset("euclidean"));
  Gamma all = Gamma::all(g);
  auto fam = family_data(all, 1);
  auto d = dn1(m, all, fam);
  EXPECT_THROW(recover_surface_gradient(m, all, {}, {}, {}), InvalidArgument);
  EXPECT_THROW(recover_surface_gradient(m, all, fam, d, {d.front()}), InvalidArgument);
  EXPECT_THROW(recover_surface_gradient(m, all, fam, d, d, 0.0), InvalidArgument);
}

TEST(SurfaceGradient, ExactFieldOfConformalFactor) {
  Grid g(9);
  Metric m(MetricSpec::preset("euclidean"));
  auto X = surface_gradient_exact(m, Expr::parse("exp(0.2*x1 - 0.4*x2)"), g);
  // ((1−n)/2)∇log c̃ = −(0.2, −0.4) for n = 3.
  EXPECT_NEAR(X.x1(3, 5), -0.2, 1e-14);
  EXPECT_NEAR(X.x2(3, 5), 0.4, 1e-14);
}
