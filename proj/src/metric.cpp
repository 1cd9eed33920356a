#include "mselab/metric.hpp"

#include <Eigen/LU>
#include <cmath>
#include <sstream>

#include "mselab/error.hpp"

namespace mselab {

using V = Expr::Var;

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

Expr xn_power_sum(const std::map<int, Expr>& phi) {
  Expr sum(0.0);
  Expr xn = Expr::variable(V::x3);
  for (const auto& [k, e] : phi) {
    if (k < 3)
      throw MetricInvalid("xn-Taylor coefficient of order " + std::to_string(k) +
                          " must vanish (only k >= 3 allowed)");
    if (e.depends_on(V::x3)) throw MetricInvalid("Taylor coefficient must not depend on xn");
    sum = sum + pow(xn, Expr(k)) * e / Expr(factorial(k));
  }
  return sum;
}

constexpr double kFdStep = 1e-5;

}  // namespace

Expr taylor_profile(const Expr& c0, const std::map<int, Expr>& phi) {
  return c0 + xn_power_sum(phi);
}

Expr taylor_profile(double lambda, const std::map<int, Expr>& phi) {
  return taylor_profile(Expr(lambda), phi);
}

MetricSpec MetricSpec::from_taylor(std::string name, Expr g11, Expr g12, Expr g22, Expr c0,
                                   const std::map<int, Expr>& ck) {
  MetricSpec s;
  s.name = std::move(name);
  s.g11 = std::move(g11);
  s.g12 = std::move(g12);
  s.g22 = std::move(g22);
  if (c0.depends_on(V::x3)) throw MetricInvalid("c0 must not depend on xn");
  s.c = taylor_profile(c0, ck);
  return s;
}

std::vector<std::string> MetricSpec::preset_names() { return {"euclidean", "conformal_exp", "diag_poly"}; }

MetricSpec MetricSpec::preset(const std::string& name) {
  if (name == "euclidean") {
    return from_taylor(name, Expr(1.0), Expr(0.0), Expr(1.0), Expr(1.0), {});
  }
  if (name == "conformal_exp") {
    Expr e = Expr::parse("exp(0.4*x1 - 0.2*x2)");
    return from_taylor(name, e, Expr(0.0), e, Expr::parse("exp(0.3*x1 - 0.2*x2)"),
                       {{3, Expr::parse("0.5*sin(pi*x1)*sin(pi*x2)")}, {4, Expr::parse("0.3*x2")}});
  }
  if (name == "diag_poly") {
    return from_taylor(name, Expr::parse("1 + 0.5*x1^2"), Expr(0.0), Expr::parse("1 + 0.25*x1*x2"),
                       Expr::parse("1 + 0.2*x1*x2"),
                       {{3, Expr::parse("0.4*(1 + x1*x2)")}, {4, Expr(-0.2)}});
  }
  throw InvalidArgument("unknown metric preset '" + name + "'");
}

MetricSpec MetricSpec::scaled(double mu) const {
  MetricSpec s = *this;
  s.c = Expr(mu) * c;
  std::ostringstream os;
  os << name << "*" << mu;
  s.name = os.str();
  return s;
}

MetricSpec MetricSpec::conformal_product(const Expr& ctilde) const {
  MetricSpec s = *this;
  s.c = c * ctilde;
  s.name = name + "*ctilde";
  return s;
}

Metric::Metric(MetricSpec spec) : spec_(std::move(spec)) {
  if (spec_.n < 3) throw InvalidArgument("dimension n must be >= 3");
  g_ = {spec_.g11, spec_.g12, spec_.g22};
  for (int a = 0; a < 3; ++a)
    if (g_[a].depends_on(V::x3)) throw MetricInvalid("ghat must not depend on xn");
  if (spec_.analytic_derivatives) {
    for (int a = 0; a < 3; ++a) {
      dg_[0][a] = g_[a].diff(V::x1);
      dg_[1][a] = g_[a].diff(V::x2);
    }
  }
  c_ = spec_.c;
  c1_ = c_.diff(V::x1);
  c2_ = c_.diff(V::x2);
  cn_ = c_.diff(V::x3);
  s_ = c_.at_x3(0.0);
  s1_ = s_.diff(V::x1);
  s2_ = s_.diff(V::x2);
  s11_ = s1_.diff(V::x1);
  s12_ = s1_.diff(V::x2);
  s22_ = s2_.diff(V::x2);
  Expr d = c_;
  dn0_.reserve(spec_.k_max + 1);
  for (int k = 0; k <= spec_.k_max; ++k) {
    dn0_.push_back(d.at_x3(0.0));
    d = d.diff(V::x3);
  }
}

Eigen::Matrix2d Metric::ghat(double x1, double x2) const {
  Eigen::Matrix2d m;
  m(0, 0) = g_[0].eval(x1, x2);
  m(0, 1) = m(1, 0) = g_[1].eval(x1, x2);
  m(1, 1) = g_[2].eval(x1, x2);
  return m;
}

std::array<Eigen::Matrix2d, 2> Metric::dghat(double x1, double x2) const {
  std::array<Eigen::Matrix2d, 2> out;
  if (spec_.analytic_derivatives) {
    for (int k = 0; k < 2; ++k) {
      out[k](0, 0) = dg_[k][0].eval(x1, x2);
      out[k](0, 1) = out[k](1, 0) = dg_[k][1].eval(x1, x2);
      out[k](1, 1) = dg_[k][2].eval(x1, x2);
    }
  } else {
    out[0] = (ghat(x1 + kFdStep, x2) - ghat(x1 - kFdStep, x2)) / (2 * kFdStep);
    out[1] = (ghat(x1, x2 + kFdStep) - ghat(x1, x2 - kFdStep)) / (2 * kFdStep);
  }
  return out;
}

CJet Metric::c_jet(double x1, double x2, double t) const {
  return {c_.eval(x1, x2, t), c1_.eval(x1, x2, t), c2_.eval(x1, x2, t), cn_.eval(x1, x2, t)};
}

SurfaceJet Metric::surface(double x1, double x2) const {
  return {s_.eval(x1, x2),   s1_.eval(x1, x2),  s2_.eval(x1, x2),
          s11_.eval(x1, x2), s12_.eval(x1, x2), s22_.eval(x1, x2)};
}

double Metric::c_dn(int k, double x1, double x2) const {
  if (k < 0 || k > spec_.k_max)
    throw InvalidArgument("xn-derivative order " + std::to_string(k) + " outside 0.." +
                          std::to_string(spec_.k_max));
  return dn0_[k].eval(x1, x2);
}

void Metric::validate(const Grid& grid) const {
  for (int j = 0; j < grid.n(); ++j)
    for (int i = 0; i < grid.n(); ++i) {
      double x1 = grid.x(i), x2 = grid.x(j);
      Eigen::Matrix2d g = ghat(x1, x2);
      if (!(g.determinant() > 0.0 && g.trace() > 0.0) || !g.allFinite()) {
        std::ostringstream os;
        os << "ghat not SPD at (" << x1 << ", " << x2 << ")";
        throw MetricInvalid(os.str());
      }
      double c0 = c_dn(0, x1, x2);
      if (!(c0 > 0.0)) {
        std::ostringstream os;
        os << "c(x', 0) = " << c0 << " not positive at (" << x1 << ", " << x2 << ")";
        throw MetricInvalid(os.str());
      }
      for (int k = 1; k <= 2; ++k) {
        double d = c_dn(k, x1, x2);
        if (std::abs(d) > 1e-12 * std::max(1.0, std::abs(c0))) {
          std::ostringstream os;
          os << "d^" << k << "c/dxn^" << k << "(x', 0) = " << d << " != 0 at (" << x1 << ", " << x2
             << ")";
          throw MetricInvalid(os.str());
        }
      }
    }
}

std::array<std::array<std::array<double, 2>, 2>, 2> christoffel_at(const Metric& m, double x1,
                                                                    double x2) {
  Eigen::Matrix2d gi = m.ghat(x1, x2).inverse();
  auto dg = m.dghat(x1, x2);
  std::array<std::array<std::array<double, 2>, 2>, 2> gam{};
  for (int mm = 0; mm < 2; ++mm)
    for (int i = 0; i < 2; ++i)
      for (int j = i; j < 2; ++j) {
        double s = 0.0;
        for (int r = 0; r < 2; ++r) s += gi(mm, r) * (dg[j](i, r) + dg[i](j, r) - dg[r](i, j));
        gam[mm][i][j] = gam[mm][j][i] = 0.5 * s;
      }
  return gam;
}

ChristoffelData christoffel_hat(const Metric& metric, const Grid& grid) {
  ChristoffelData out{grid, {}};
  out.gamma.resize(grid.size());
  for (int j = 0; j < grid.n(); ++j)
    for (int i = 0; i < grid.n(); ++i) {
      Eigen::Matrix2d g = metric.ghat(grid.x(i), grid.x(j));
      if (!(g.determinant() > 0.0 && g.trace() > 0.0))
        throw MetricInvalid("ghat not SPD at node (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      out.gamma[grid.index(i, j)] = christoffel_at(metric, grid.x(i), grid.x(j));
    }
  return out;
}

GeometryCache::GeometryCache(const Metric& metric, const Grid& grid) : grid_(grid) {
  nodes_.resize(grid.size());
  for (int j = 0; j < grid.n(); ++j)
    for (int i = 0; i < grid.n(); ++i) {
      NodeGeom& ng = nodes_[grid.index(i, j)];
      ng.x1 = grid.x(i);
      ng.x2 = grid.x(j);
      ng.g = metric.ghat(ng.x1, ng.x2);
      double det = ng.g.determinant();
      if (!(det > 0.0 && ng.g.trace() > 0.0))
        throw MetricInvalid("ghat not SPD at node (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      ng.gi = ng.g.inverse();
      ng.sqrt_det = std::sqrt(det);
      ng.gam = christoffel_at(metric, ng.x1, ng.x2);
    }
}

}  // namespace mselab
