#include <gtest/gtest.h>

#include <cmath>

#include "mselab/quadrature.hpp"

using namespace mselab;

TEST(Quadrature, TrapezoidIsExactForBilinear) {
  Grid g(9);
  Metric m(MetricSpec::preset("euclidean"));
  EXPECT_NEAR(integrate(ScalarField::sample(g, [](double, double) { return 1.0; }), m), 1.0, 1e-15);
  EXPECT_NEAR(integrate(ScalarField::sample(g, [](double x, double y) { return 2 + x - 3 * x * y; }), m), 1.75,
              1e-14);
  EXPECT_NEAR(trapezoid_weights(g).values().sum(), 1.0, 1e-15);
}

TEST(Quadrature, VolumeFormConvergesAtSecondOrder) {
  Metric m(MetricSpec::preset("conformal_exp"));
  // |ĝ|^{1/2} = exp(0.4x₁ − 0.2x₂).
  const double exact = (std::exp(0.4) - 1) / 0.4 * (1 - std::exp(-0.2)) / 0.2;
  double e[2];
  int k = 0;
  for (int n : {17, 33}) {
    Grid g(n);
    e[k++] = std::abs(integrate(ScalarField::sample(g, [](double, double) { return 1.0; }), m) - exact);
  }
  EXPECT_LT(e[1], 1e-4);
  EXPECT_NEAR(std::log2(e[0] / e[1]), 2.0, 0.05);
}

TEST(Quadrature, BoundaryIntegralOfLinearData) {
  Grid g(17);
  Metric m(MetricSpec::preset("euclidean"));
  Gamma all = Gamma::all(g);
  auto a = ScalarField::sample(g, [](double x, double) { return x; });
  BoundaryTrace ones{all.measurement_nodes(), Eigen::VectorXd::Ones(all.measurement_nodes().size()), 4};
  // ∮ x₁ ds over the unit square: 0 + 1 + ½ + ½.
  EXPECT_NEAR(boundary_integral(all, a, ones, m), 2.0, 1e-13);
  auto one = ScalarField::sample(g, [](double, double) { return 1.0; });
  EXPECT_NEAR(boundary_integral(all, one, ones, m), 4.0, 1e-13);
  Gamma left = Gamma::parse("left", g);
  BoundaryTrace lt{left.measurement_nodes(), Eigen::VectorXd::Ones(left.measurement_nodes().size()), 2};
  EXPECT_NEAR(boundary_integral(left, one, lt, m), 1.0, 1e-13);
  EXPECT_EQ(boundary_integral_outside(all, one, ones), 0.0);
}
