#include "mselab/study.hpp"

#include <cmath>
#include <limits>

#include "mselab/error.hpp"
#include "mselab/gauge.hpp"
#include "mselab/linearization.hpp"
#include "mselab/recovery.hpp"
#include "mselab/residual.hpp"
#include "mselab/solver.hpp"

namespace mselab {

double observed_rate(const std::vector<double>& h, const std::vector<double>& err) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < h.size() && i < err.size(); ++i)
    if (std::isfinite(err[i]) && err[i] > 0 && h[i] > 0) {
      x.push_back(std::log(h[i]));
      y.push_back(std::log(err[i]));
    }
  if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

CsvTable RateTable::values_csv() const {
  CsvTable t;
  t.header = {"grid", "h"};
  for (const auto& q : quantities) t.header.push_back(q);
  for (std::size_t g = 0; g < grids.size(); ++g) {
    std::vector<double> row{static_cast<double>(grids[g]), 1.0 / (grids[g] - 1)};
    row.insert(row.end(), values[g].begin(), values[g].end());
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable RateTable::rates_csv() const { return CsvTable{quantities, {rates}}; }

RateTable convergence_table(const std::string& study, const std::vector<int>& grids,
                            const std::vector<std::string>& quantities,
                            const std::function<std::vector<double>(int)>& per_grid) {
  if (grids.size() < 3) throw InvalidArgument("a convergence study needs at least 3 grid sizes");
  RateTable t;
  t.study = study;
  t.grids = grids;
  t.quantities = quantities;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int n : grids) {
    std::vector<double> v(quantities.size(), nan);
    try {
      auto r = per_grid(n);
      if (r.size() != quantities.size()) throw InvalidArgument("study returned the wrong number of quantities");
      v = r;
    } catch (const std::exception& e) {
      t.failures.push_back("grid " + std::to_string(n) + ": " + e.what());
    }
    t.values.push_back(std::move(v));
  }
  std::vector<double> h;
  for (int n : grids) h.push_back(1.0 / (n - 1));
  for (std::size_t q = 0; q < quantities.size(); ++q) {
    std::vector<double> e;
    for (const auto& row : t.values) e.push_back(row[q]);
    t.rates.push_back(observed_rate(h, e));
  }
  return t;
}

namespace {

double max_interior(const ScalarField& f) { return f.max_abs_interior(true); }

}  // namespace

RateTable run_convergence_study(const ExperimentConfig& cfg) {
  if (cfg.grids.size() < 3) throw InvalidArgument("a convergence study needs at least 3 grid sizes");
  const Metric metric(cfg.metric);
  const std::string& s = cfg.study;

  if (s == "mms") {
    return convergence_table(s, cfg.grids, {"err_inf"}, [&](int n) {
      Grid g(n);
      SolverOptions o = cfg.solver;
      o.source = residual_F_exact(cfg.u_exact, metric, g);
      ScalarField exact = ScalarField::sample(g, [&](double a, double b) { return cfg.u_exact.eval(a, b, 0); });
      BoundaryData f(Gamma::all(g), exact);
      SolveResult r = solve_bvp(metric, f, o);
      return std::vector<double>{(r.u - exact).max_abs()};
    });
  }
  if (s == "equivalence") {
    return convergence_table(s, cfg.grids, {"defect_mean_curvature", "defect_divergence"}, [&](int n) {
      Grid g(n);
      ScalarField u = ScalarField::sample(g, [&](double a, double b) { return cfg.u_exact.eval(a, b, 0); });
      ScalarField F = residual_F(u, metric);
      ScalarField mc = residual_mean_curvature(u, metric);
      ScalarField dv = residual_divergence_form(u, metric);
      ScalarField wF = divergence_form_weight(u, metric) * F;
      return std::vector<double>{max_interior(mc - F), max_interior(dv - wF)};
    });
  }
  if (s == "identity") {
    return convergence_table(s, cfg.grids, {"identity_defect"}, [&](int n) {
      Grid g(n);
      Gamma gamma = Gamma::parse(cfg.gamma, g);
      auto fam = make_boundary_family(cfg.family, gamma, cfg.seed, cfg.amplitude);
      if (fam.size() < 3) throw InvalidArgument("identity study needs a family of at least 3 data");
      AdjointOperator adj(metric, g);
      ScalarField v0 = adj.solve(adjoint_candidate_traces(gamma, 1).front());
      auto r = identity_residual_check_direct(metric, cfg.ctilde, fam[1], fam[2], v0, gamma);
      return std::vector<double>{r.residual};
    });
  }
  if (s == "poincare") {
    const Expr psi = cfg.raw.get_expr("psi", "x1^3 + x2^3 + x1^2*x2 + 0.5*x1*x2^2");
    const Expr p1 = psi.diff(Expr::Var::x1), p2 = psi.diff(Expr::Var::x2);
    const Expr p11 = p1.diff(Expr::Var::x1), p12 = p1.diff(Expr::Var::x2), p22 = p2.diff(Expr::Var::x2);
    const Expr X11 = cfg.raw.get_expr("X1_1", "0.3*x2"), X12 = cfg.raw.get_expr("X1_2", "-0.2*x1");
    const double curl_tol = cfg.raw.get_double("curl_tol", 1e-6);
    return convergence_table(s, cfg.grids, {"potential_err", "gauge_residual_err"}, [&](int n) {
      Grid g(n);
      Gamma gamma = Gamma::parse(cfg.gamma, g);
      // X1 − X2 = ∇_ĝψ, so the potential is ψ up to a constant.
      VectorField X1(ScalarField::sample(g, [&](double a, double b) { return X11.eval(a, b, 0); }),
                     ScalarField::sample(g, [&](double a, double b) { return X12.eval(a, b, 0); }));
      VectorField X2(g);
      for (int k = 0; k < g.size(); ++k) {
        double a = g.x(g.col(k)), b = g.x(g.row(k));
        Eigen::Vector2d v = metric.ghat(a, b).inverse() * Eigen::Vector2d(p1.eval(a, b, 0), p2.eval(a, b, 0));
        X2.x1[k] = X1.x1[k] - v[0];
        X2.x2[k] = X1.x2[k] - v[1];
      }
      ScalarField phi = poincare_potential(X1, X2, metric, gamma, curl_tol);
      ScalarField ps = ScalarField::sample(g, [&](double a, double b) { return psi.eval(a, b, 0); });
      int anchor = gamma.measurement_nodes()[gamma.measurement_nodes().size() / 2];
      double shift = ps[anchor];
      double perr = 0.0;
      for (int k = 0; k < g.size(); ++k) perr = std::max(perr, std::abs(phi[k] - (ps[k] - shift)));
      ScalarField gr = gauge_pde_residual(ps, X1, metric);
      ScalarField ex(g);
      for (int k : g.interior_nodes()) {
        double a = g.x(g.col(k)), b = g.x(g.row(k));
        auto gam = christoffel_at(metric, a, b);
        Eigen::Matrix2d gi = metric.ghat(a, b).inverse();
        double d[2] = {p1.eval(a, b, 0), p2.eval(a, b, 0)};
        double d2[2][2] = {{p11.eval(a, b, 0), p12.eval(a, b, 0)}, {p12.eval(a, b, 0), p22.eval(a, b, 0)}};
        double lap = 0.0, n2 = 0.0;
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            lap += gi(i, j) * (d2[i][j] - gam[0][i][j] * d[0] - gam[1][i][j] * d[1]);
            n2 += gi(i, j) * d[i] * d[j];
          }
        ex[k] = lap - (X1.x1[k] * d[0] + X1.x2[k] * d[1]) + 0.5 * n2;
      }
      return std::vector<double>{perr, max_interior(gr - ex)};
    });
  }
  throw InvalidArgument("unknown study '" + s + "' (mms | equivalence | identity | poincare)");
}

}  // namespace mselab
