#include <gtest/gtest.h>

#include "mselab/error.hpp"
#include "mselab/grid.hpp"
#include "mselab/solver.hpp"

using namespace mselab;

TEST(Grid, IndexingAndClassification) {
  Grid g(9);
  EXPECT_EQ(g.size(), 81);
  EXPECT_DOUBLE_EQ(g.h(), 0.125);
  EXPECT_EQ(g.index(2, 3), 2 + 9 * 3);
  EXPECT_EQ(g.col(g.index(2, 3)), 2);
  EXPECT_EQ(g.row(g.index(2, 3)), 3);
  EXPECT_EQ(g.boundary_nodes().size(), 32u);
  EXPECT_EQ(g.interior_nodes().size(), 49u);
  EXPECT_TRUE(g.is_corner(8, 0));
  EXPECT_FALSE(g.is_inner(1, 1));
  EXPECT_TRUE(g.is_inner(1, 2));
  EXPECT_THROW(Grid(4), InvalidArgument);
  EXPECT_THROW(require_same_grid(Grid(9), Grid(17), "test"), GridMismatch);
}

TEST(Gamma, ParsesSpecsAndCountsNodes) {
  Grid g(17);
  Gamma all = Gamma::parse("all", g);
  EXPECT_TRUE(all.is_full());
  EXPECT_EQ(all.measurement_nodes().size(), 4u * 15u);
  Gamma left = Gamma::parse("left", g);
  EXPECT_FALSE(left.is_full());
  EXPECT_EQ(left.measurement_nodes().size(), 15u);
  EXPECT_TRUE(left.contains(0, 5));
  EXPECT_FALSE(left.contains(16, 5));
  // The two nodes nearest each end of the arc (corner included) carry no data.
  EXPECT_FALSE(left.in_support(0, 0));
  EXPECT_FALSE(left.in_support(0, 1));
  EXPECT_TRUE(left.in_support(0, 2));
  EXPECT_TRUE(left.in_support(0, 14));
  EXPECT_FALSE(left.in_support(0, 15));
  Gamma arc = Gamma::parse("arc:4:12:bottom", g);
  EXPECT_EQ(arc.measurement_nodes().size(), 9u);
  EXPECT_THROW(Gamma::parse("arc:4:40:bottom", g), InvalidArgument);
  EXPECT_THROW(Gamma::parse("middle", g), InvalidArgument);
}

TEST(BoundaryData, SupportIsEnforced) {
  Grid g(17);
  Gamma left = Gamma::parse("left", g);
  ScalarField v(g);
  v(16, 8) = 1.0;
  EXPECT_THROW(BoundaryData(left, v), InvalidArgument);
  auto d = BoundaryData::from_function(left, [](double, double y) { return y * (1 - y); });
  EXPECT_NEAR(d.smallness(), 0.25, 1e-12);
  EXPECT_DOUBLE_EQ(d.values()(16, 8), 0.0);
  EXPECT_DOUBLE_EQ(d.values()(0, 1), 0.0);
  EXPECT_NEAR((d + d.scaled(-1.0)).smallness(), 0.0, 0.0);
}

TEST(ScalarField, ArithmeticAndNorms) {
  Grid g(5);
  auto a = ScalarField::sample(g, [](double x, double y) { return x + y; });
  auto b = ScalarField::sample(g, [](double x, double) { return 2 * x; });
  EXPECT_DOUBLE_EQ((a * b)(4, 4), 4.0);
  EXPECT_DOUBLE_EQ((a - b).max_abs(), 1.0);
  EXPECT_DOUBLE_EQ(a.max_abs_interior(), 1.5);
  EXPECT_TRUE(a.all_finite());
  EXPECT_THROW(ScalarField(g, Eigen::VectorXd::Zero(3)), GridMismatch);
}
