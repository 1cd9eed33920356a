#include <gtest/gtest.h>

#include <cmath>

#include "mselab/dn_map.hpp"
#include "mselab/error.hpp"

using namespace mselab;

namespace {

std::vector<BoundaryData> trig_family(const Gamma& gamma, int count) {
  std::vector<BoundaryData> out;
  for (int k = 1; k <= count; ++k)
    out.push_back(BoundaryData::from_function(gamma, [k](double x, double y) {
      return 0.02 * std::sin(k * M_PI * (x + 0.5 * y)) + 0.01 * std::cos(k * x * y);
    }));
  return out;
}

}  // namespace

TEST(NeumannTrace, ExactForLinearFunctions) {
  Grid g(17);
  Metric m(MetricSpec::preset("diag_poly"));
  auto u = ScalarField::sample(g, [](double x, double) { return x; });
  auto tr = neumann_trace(u, m, Gamma::all(g));
  ASSERT_EQ(tr.values.size(), 60);
  for (std::size_t q = 0; q < tr.nodes.size(); ++q) {
    int i = g.col(tr.nodes[q]), j = g.row(tr.nodes[q]);
    double x = g.x(i), y = g.x(j);
    double expect = 0.0;
    if (i == 0) expect = -1.0 / (1 + 0.5 * x * x);
    if (i == g.n() - 1) expect = 1.0 / (1 + 0.5 * x * x);
    (void)y;
    EXPECT_NEAR(tr.values[q], expect, 1e-12);
  }
  EXPECT_EQ(neumann_trace(u, m, Gamma::parse("top", g)).nodes.size(), 15u);
}

TEST(DnMap, InvariantUnderConstantConformalScaling) {
  Grid g(33);
  Gamma all = Gamma::all(g);
  MetricSpec s = MetricSpec::preset("conformal_exp");
  SolverOptions o;
  o.newton_tol = 1e-12;
  auto fam = trig_family(all, 4);
  auto a = dn_batch(Metric(s), fam, all, o);
  auto b = dn_batch(Metric(s.scaled(2.5)), fam, all, o);
  for (std::size_t k = 0; k < fam.size(); ++k)
    EXPECT_LE((a[k].neumann.values - b[k].neumann.values).cwiseAbs().maxCoeff(), 10 * o.newton_tol);
}

TEST(DnBatch, PreservesOrderAndIsDeterministic) {
  Grid g(17);
  Gamma all = Gamma::all(g);
  Metric m(MetricSpec::preset("diag_poly"));
  auto fam = trig_family(all, 5);
  auto serial = dn_batch(m, fam, all, {}, 1);
  auto threaded = dn_batch(m, fam, all, {}, 4);
  for (std::size_t k = 0; k < fam.size(); ++k) {
    auto single = dn_map(m, fam[k], all);
    EXPECT_EQ(serial[k].neumann.values, single.neumann.values);
    EXPECT_EQ(threaded[k].neumann.values, single.neumann.values);
    EXPECT_EQ(serial[k].gamma, "all");
  }
}

TEST(DnBatch, FailureNamesTheDatum) {
  Grid g(17);
  Gamma all = Gamma::all(g);
  auto fam = trig_family(all, 3);
  fam[1] = fam[1].scaled(20.0);
  try {
    dn_batch(Metric(MetricSpec::preset("euclidean")), fam, all);
    FAIL() << "expected a failure";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("datum 1"), std::string::npos) << e.what();
  }
}
