#include "mselab/pipeline.hpp"

#include <chrono>
#include <cmath>

#include "mselab/dn_map.hpp"
#include "mselab/error.hpp"

namespace mselab {

namespace {

template <class Fn>
auto stage(const std::string& name, RunManifest& m, Fn&& fn) {
  auto t0 = std::chrono::steady_clock::now();
  try {
    auto r = fn();
    m.wall_times[name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

// Family size parameter of a `sides:P` spec; 4 otherwise.
int sides_P(const std::string& family) {
  if (family.rfind("sides:", 0) == 0) return std::stoi(family.substr(6));
  return 4;
}

double rms_interior(const ScalarField& f) {
  double s = 0.0;
  auto in = f.grid().interior_nodes();
  for (int k : in) s += f[k] * f[k];
  return std::sqrt(s / static_cast<double>(in.size()));
}

}  // namespace

PipelineResult run_pipeline(const ExperimentConfig& cfg, OutputWriter& out) {
  RunManifest& man = out.manifest();
  man.command = "pipeline";
  man.config_hash = hex64(cfg.raw.hash());
  man.seed = cfg.seed;
  const Grid g(cfg.grids.back());
  const Metric base(cfg.metric);
  const Metric meas(cfg.metric.conformal_product(cfg.ctilde));
  const double eps = cfg.eps.front();

  struct Dn {
    Gamma gamma;
    std::vector<BoundaryData> family;
    std::vector<BoundaryTrace> g1, ct1;
  };
  Dn dn = stage("dn", man, [&] {
    base.validate(g);
    meas.validate(g);
    Gamma gamma = Gamma::parse(cfg.gamma, g);
    auto family = make_boundary_family(cfg.family, gamma, cfg.seed, cfg.amplitude);
    std::vector<BoundaryData> pm;
    for (const auto& f : family) {
      pm.push_back(f.scaled(eps));
      pm.push_back(f.scaled(-eps));
    }
    auto rg = dn_batch(base, pm, gamma, cfg.solver, cfg.threads);
    auto rc = dn_batch(meas, pm, gamma, cfg.solver, cfg.threads);
    Dn d{gamma, family, {}, {}};
    CsvTable t;
    t.header = {"x1", "x2"};
    for (std::size_t i = 0; i < family.size(); ++i) {
      BoundaryTrace a = rg[2 * i].neumann, b = rc[2 * i].neumann;
      a.values = (rg[2 * i].neumann.values - rg[2 * i + 1].neumann.values) / (2 * eps);
      b.values = (rc[2 * i].neumann.values - rc[2 * i + 1].neumann.values) / (2 * eps);
      d.g1.push_back(a);
      d.ct1.push_back(b);
      t.header.push_back("g_" + std::to_string(i));
      t.header.push_back("ctilde_" + std::to_string(i));
    }
    for (std::size_t q = 0; q < d.g1.front().nodes.size(); ++q) {
      int k = d.g1.front().nodes[q];
      std::vector<double> row{g.x(g.col(k)), g.x(g.row(k))};
      for (std::size_t i = 0; i < family.size(); ++i) {
        row.push_back(d.g1[i].values[static_cast<Eigen::Index>(q)]);
        row.push_back(d.ct1[i].values[static_cast<Eigen::Index>(q)]);
      }
      t.rows.push_back(std::move(row));
    }
    double worst = 0.0;
    for (const auto& r : rg) worst = std::max(worst, r.residual);
    for (const auto& r : rc) worst = std::max(worst, r.residual);
    man.residuals["dn_newton_residual_max"] = worst;
    out.csv("dn_first_order.csv", t);
    return d;
  });

  std::map<std::string, double> errors;
  SurfaceGradientResult surface = stage("surface", man, [&] {
    SurfaceGradientOptions o;
    o.threads = cfg.threads;
    auto s = recover_surface_gradient(base, dn.gamma, dn.family, dn.g1, dn.ct1, cfg.anchor_value, o);
    VectorField exact = surface_gradient_exact(base, cfg.ctilde, g);
    std::vector<NamedField> f{{"deltaX1", s.deltaX.x1}, {"deltaX2", s.deltaX.x2}, {"log_c", s.log_c},
                              {"deltaX1_exact", exact.x1}, {"deltaX2_exact", exact.x2}};
    out.fields("surface_gradient.csv", f);
    man.residuals["surface_gn_residual"] = s.history.back();
    man.residuals["lambda_hat"] = s.lambda_hat;
    errors["deltaX_rms"] = std::sqrt(0.5 * (std::pow(rms_interior(s.deltaX.x1), 2) + std::pow(rms_interior(s.deltaX.x2), 2)));
    errors["deltaX_rel"] = relative_l2_interior(s.deltaX, exact);
    return s;
  });

  RecoveryResult recovery = stage("recover", man, [&] {
    RecoveryProblem p;
    p.base = cfg.metric;
    p.ctilde = cfg.ctilde;
    p.gamma = cfg.gamma;
    p.grid = g.n();
    p.max_order = cfg.max_order;
    p.pairs = cfg.pairs;
    p.family_P = sides_P(cfg.family);
    p.amplitude = 1.0;
    p.fd.eps = eps;
    p.fd.richardson = cfg.raw.get_bool("richardson", false);
    p.fd.solver = cfg.solver;
    p.fd.threads = cfg.threads;
    p.basis.per_dim = cfg.raw.get_int("basis_per_dim", p.basis.per_dim);
    p.basis.tikhonov = cfg.raw.get_double("tikhonov", 0.0);
    p.basis.gram_limit = cfg.raw.get_double("gram_limit", p.basis.gram_limit);
    p.adjoint_count = cfg.raw.get_int("adjoint_count", p.adjoint_count);
    p.lambda_hat = surface.lambda_hat;
    auto r = run_recovery(p);
    std::vector<NamedField> f;
    for (const auto& [k, phi] : r.coeff_fields) {
      Expr truth = cfg.ctilde.diff(Expr::Var::x3, k).at_x3(0.0);
      ScalarField tf = ScalarField::sample(g, [&](double a, double b) { return truth.eval(a, b, 0); });
      f.push_back({"phi" + std::to_string(k), phi});
      f.push_back({"phi" + std::to_string(k) + "_exact", tf});
      errors["phi" + std::to_string(k) + "_rel"] = relative_l2_interior(phi, tf);
      errors["phi" + std::to_string(k) + "_rms"] = rms_interior(phi);
    }
    for (const auto& d : r.diagnostics) {
      man.residuals["order" + std::to_string(d.order) + "_ls_residual"] = d.residual_norm;
      man.residuals["order" + std::to_string(d.order) + "_gram_condition"] = d.gram_condition;
    }
    out.fields("coefficients.csv", f);
    return r;
  });
  for (const auto& [k, v] : errors) man.residuals[k] = v;
  return PipelineResult{std::move(surface), std::move(recovery), std::move(errors)};
}

}  // namespace mselab
