#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mselab/error.hpp"
#include "mselab/expr.hpp"

using namespace mselab;
using V = Expr::Var;

TEST(Expr, ParsesAndEvaluates) {
  Expr e = Expr::parse("1 + 2*x1 - x2/4 + x3^2");
  EXPECT_DOUBLE_EQ(e.eval(1, 2, 3), 1 + 2 - 0.5 + 9);
  EXPECT_DOUBLE_EQ(Expr::parse("-x1^2").eval(3, 0), -9.0);
  EXPECT_DOUBLE_EQ(Expr::parse("2^3^2").eval(0, 0), 512.0);
  EXPECT_NEAR(Expr::parse("sin(pi*x1)*cos(x2) + exp(1) - e").eval(0.5, 0), 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(Expr::parse("xn").eval(0, 0, 7), 7.0);
  EXPECT_NEAR(Expr::parse("sqrt(x1)*log(x2)").eval(4, std::exp(1.0)), 2.0, 1e-15);
}

TEST(Expr, RejectsMalformedInput) {
  EXPECT_THROW(Expr::parse("1 +"), ParseError);
  EXPECT_THROW(Expr::parse("sin(x1"), ParseError);
  EXPECT_THROW(Expr::parse("foo(x1)"), ParseError);
  EXPECT_THROW(Expr::parse("x4"), ParseError);
  EXPECT_THROW(Expr::parse(""), ParseError);
}

TEST(Expr, SymbolicDerivativesMatchClosedForms) {
  Expr e = Expr::parse("x1^3*sin(x2) + exp(2*x3)*x1");
  const double a = 0.3, b = 0.7, c = 0.2;
  EXPECT_NEAR(e.diff(V::x1).eval(a, b, c), 3 * a * a * std::sin(b) + std::exp(2 * c), 1e-14);
  EXPECT_NEAR(e.diff(V::x2).eval(a, b, c), a * a * a * std::cos(b), 1e-14);
  EXPECT_NEAR(e.diff(V::x3, 3).eval(a, b, c), 8 * std::exp(2 * c) * a, 1e-13);
  EXPECT_NEAR(Expr::parse("log(x1)").diff(V::x1, 2).eval(2, 0), -0.25, 1e-15);
  EXPECT_NEAR(Expr::parse("sqrt(x1)").diff(V::x1).eval(4, 0), 0.25, 1e-15);
  EXPECT_NEAR(Expr::parse("x1^x2").diff(V::x2).eval(2, 3), 8 * std::log(2.0), 1e-14);
}

TEST(Expr, DerivativeAgreesWithFiniteDifferences) {
  Expr e = Expr::parse("exp(0.4*x1 - 0.2*x2)/(1 + x1*x2) + cos(x1*x3)");
  const double h = 1e-5;
  for (V v : {V::x1, V::x2, V::x3}) {
    double p[3] = {0.3, 0.6, 0.1}, m[3] = {0.3, 0.6, 0.1};
    p[static_cast<int>(v)] += h;
    m[static_cast<int>(v)] -= h;
    double fd = (e.eval(p[0], p[1], p[2]) - e.eval(m[0], m[1], m[2])) / (2 * h);
    EXPECT_NEAR(e.diff(v).eval(0.3, 0.6, 0.1), fd, 1e-9);
  }
}

TEST(Expr, StructuralQueries) {
  EXPECT_TRUE(Expr::parse("2*pi").is_constant());
  EXPECT_TRUE(Expr::parse("x1 - x1").diff(V::x2).is_zero());
  EXPECT_TRUE(Expr::parse("x2*x3").depends_on(V::x3));
  EXPECT_FALSE(Expr::parse("x2*x3").at_x3(0.5).depends_on(V::x3));
  EXPECT_DOUBLE_EQ(Expr::parse("x2*x3").at_x3(0.5).eval(0, 4), 2.0);
  Expr r = Expr::parse(Expr::parse("1 + x1*sin(x2)").str());
  EXPECT_DOUBLE_EQ(r.eval(0.2, 0.9), 1 + 0.2 * std::sin(0.9));
}
