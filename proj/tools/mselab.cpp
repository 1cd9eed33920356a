#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <iostream>
#include <optional>

#include "mselab/config.hpp"
#include "mselab/dn_map.hpp"
#include "mselab/error.hpp"
#include "mselab/linearization.hpp"
#include "mselab/manifest.hpp"
#include "mselab/parallel.hpp"
#include "mselab/pipeline.hpp"
#include "mselab/recovery.hpp"
#include "mselab/residual.hpp"
#include "mselab/study.hpp"

using namespace mselab;

namespace {

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::vector<std::string> set;
};

ExperimentConfig load(const Common& c) {
  Config raw = c.config.empty() ? Config() : Config::load(c.config);
  for (const auto& kv : c.set) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw ParseError("--set expects key=value, got '" + kv + "'");
    raw.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!c.out.empty()) raw.set("out", c.out);
  if (c.seed) raw.set("seed", std::to_string(*c.seed));
  if (c.threads) raw.set("threads", std::to_string(*c.threads));
  ExperimentConfig e = ExperimentConfig::from(raw);
  e.threads = resolve_threads(e.threads);
  return e;
}

void stamp(OutputWriter& w, const ExperimentConfig& e, const std::string& command) {
  w.manifest().command = command;
  w.manifest().config_hash = hex64(e.raw.hash());
  w.manifest().seed = e.seed;
}

ScalarField sample(const Expr& f, const Grid& g) {
  return ScalarField::sample(g, [&](double a, double b) { return f.eval(a, b, 0); });
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_forward(const ExperimentConfig& e) {
  auto t0 = std::chrono::steady_clock::now();
  OutputWriter w(e.out_dir);
  stamp(w, e, "forward");
  Metric metric(e.metric);
  Grid g(e.grids.back());
  metric.validate(g);
  Expr f = e.raw.get_expr("f", e.raw.get("u_exact", "0"));
  SolverOptions o = e.solver;
  if (e.raw.get_bool("mms", false)) o.source = residual_F_exact(e.u_exact, metric, g);
  SolveResult r = solve_bvp(metric, BoundaryData(Gamma::all(g), sample(f, g)), o);
  std::vector<NamedField> fields{{"u", r.u}};
  if (e.raw.get_bool("mms", false)) {
    ScalarField ex = sample(e.u_exact, g);
    fields.push_back({"u_exact", ex});
    w.manifest().residuals["mms_err_inf"] = (r.u - ex).max_abs();
  }
  w.fields("solution.csv", fields);
  CsvTable hist{{"iteration", "residual"}, {}};
  for (std::size_t i = 0; i < r.history.size(); ++i) hist.rows.push_back({static_cast<double>(i), r.history[i]});
  w.csv("newton_history.csv", hist);
  w.manifest().residuals["newton_residual"] = r.residual;
  w.manifest().residuals["newton_iterations"] = r.iterations;
  w.manifest().notes["quadratic_phase"] = newton_phase(r.history).quadratic ? "yes" : "no";
  w.manifest().wall_times["forward"] = since(t0);
  w.finish();
  std::cout << "forward: grid " << g.n() << ", " << r.iterations << " Newton iterations, residual " << r.residual
            << "\n";
  return 0;
}

int cmd_dn(const ExperimentConfig& e) {
  auto t0 = std::chrono::steady_clock::now();
  OutputWriter w(e.out_dir);
  stamp(w, e, "dn");
  Metric metric(e.metric);
  Grid g(e.grids.back());
  metric.validate(g);
  Gamma gamma = Gamma::parse(e.gamma, g);
  auto fam = make_boundary_family(e.family, gamma, e.seed, e.amplitude);
  auto recs = dn_batch(metric, fam, gamma, e.solver, e.threads);
  CsvTable t;
  t.header = {"x1", "x2"};
  for (std::size_t i = 0; i < recs.size(); ++i) t.header.push_back("dn_" + std::to_string(i));
  const auto& nodes = recs.front().neumann.nodes;
  for (std::size_t q = 0; q < nodes.size(); ++q) {
    std::vector<double> row{g.x(g.col(nodes[q])), g.x(g.row(nodes[q]))};
    for (const auto& r : recs) row.push_back(r.neumann.values[static_cast<Eigen::Index>(q)]);
    t.rows.push_back(std::move(row));
  }
  w.csv("dn.csv", t);
  double worst = 0.0;
  for (const auto& r : recs) worst = std::max(worst, r.residual);
  w.manifest().residuals["newton_residual_max"] = worst;
  w.manifest().wall_times["dn"] = since(t0);
  w.finish();
  std::cout << "dn: " << recs.size() << " data on " << gamma.name() << ", max Newton residual " << worst << "\n";
  return 0;
}

int cmd_linearize(const ExperimentConfig& e) {
  auto t0 = std::chrono::steady_clock::now();
  OutputWriter w(e.out_dir);
  stamp(w, e, "linearize");
  Metric metric(e.metric);
  Grid g(e.grids.back());
  metric.validate(g);
  Gamma gamma = Gamma::parse(e.gamma, g);
  auto fam = make_boundary_family(e.family, gamma, e.seed, e.amplitude);
  if (fam.size() < 2) throw InvalidArgument("linearize needs at least two data");
  AdvectionDiffusion op(metric, g);
  ScalarField v0 = op.solve(fam[0].values()), v1 = op.solve(fam[1].values());
  ScalarField w01 = second_lin_solve(op, v0, v1);
  CsvTable gaps{{"eps", "first_gap", "second_gap"}, {}};
  std::vector<NamedField> fields{{"v0", v0}, {"v1", v1}, {"w01", w01}};
  for (double eps : e.eps) {
    FdOptions o;
    o.eps = eps;
    o.solver = e.solver;
    o.threads = e.threads;
    ScalarField fd1 = higher_lin_fd(metric, {fam[0]}, o);
    ScalarField fd2 = higher_lin_fd(metric, {fam[0], fam[1]}, o);
    gaps.rows.push_back({eps, (fd1 - v0).max_abs(), (fd2 - w01).max_abs()});
  }
  w.fields("linearization.csv", fields);
  w.csv("fd_gaps.csv", gaps);
  std::vector<double> ev, g1, g2;
  for (const auto& r : gaps.rows) {
    ev.push_back(r[0]);
    g1.push_back(r[1]);
    g2.push_back(r[2]);
  }
  if (ev.size() >= 2) {
    w.manifest().slopes["first_gap_eps"] = observed_rate(ev, g1);
    w.manifest().slopes["second_gap_eps"] = observed_rate(ev, g2);
  }
  w.manifest().wall_times["linearize"] = since(t0);
  w.finish();
  for (const auto& r : gaps.rows)
    std::cout << "linearize: eps " << r[0] << "  first gap " << r[1] << "  second gap " << r[2] << "\n";
  return 0;
}

int cmd_identity(const ExperimentConfig& e) {
  auto t0 = std::chrono::steady_clock::now();
  OutputWriter w(e.out_dir);
  stamp(w, e, "identity-check");
  Metric metric(e.metric);
  CsvTable t{{"grid", "volume", "boundary", "residual", "outside"}, {}};
  for (int n : e.grids) {
    Grid g(n);
    metric.validate(g);
    Gamma gamma = Gamma::parse(e.gamma, g);
    auto fam = make_boundary_family(e.family, gamma, e.seed, e.amplitude);
    if (fam.size() < 2) throw InvalidArgument("identity-check needs at least two data");
    AdjointResult v0 = adjoint_special_solution(metric, gamma, g.n() / 2, g.n() / 2);
    auto r = identity_residual_check_direct(metric, e.ctilde, fam[0], fam[1], v0.v0, gamma);
    t.rows.push_back({static_cast<double>(n), r.volume, r.boundary, r.residual, r.outside});
    std::cout << "identity-check: grid " << n << "  volume " << r.volume << "  boundary " << r.boundary
              << "  defect " << r.residual << "  outside " << r.outside << "\n";
  }
  w.csv("identity.csv", t);
  if (t.rows.size() >= 2) {
    std::vector<double> h, d;
    for (const auto& r : t.rows) {
      h.push_back(1.0 / (r[0] - 1));
      d.push_back(r[3]);
    }
    w.manifest().slopes["identity_defect"] = observed_rate(h, d);
  }
  w.manifest().wall_times["identity-check"] = since(t0);
  w.finish();
  return 0;
}

int cmd_recover(const ExperimentConfig& e) {
  auto t0 = std::chrono::steady_clock::now();
  OutputWriter w(e.out_dir);
  stamp(w, e, "recover");
  RecoveryProblem p;
  p.base = e.metric;
  p.ctilde = e.ctilde;
  p.gamma = e.gamma;
  p.grid = e.grids.back();
  p.max_order = e.max_order;
  p.pairs = e.pairs;
  p.family_P = e.raw.get_int("family_P", p.family_P);
  p.fd.eps = e.eps.front();
  p.fd.richardson = e.raw.get_bool("richardson", false);
  p.fd.solver = e.solver;
  p.fd.threads = e.threads;
  p.unit_padded = e.raw.get_bool("unit_padded", false);
  p.adjoint_count = e.raw.get_int("adjoint_count", p.adjoint_count);
  p.basis.gram_limit = e.raw.get_double("gram_limit", p.basis.gram_limit);
  p.basis.per_dim = e.raw.get_int("basis_per_dim", p.basis.per_dim);
  p.basis.tikhonov = e.raw.get_double("tikhonov", 0.0);
  p.lambda_hat = e.raw.get_double("lambda_hat", e.ctilde.at_x3(0.0).eval(0.5, 0.5, 0.0));
  RecoveryResult r = run_recovery(p);
  Grid g(p.grid);
  std::vector<NamedField> f;
  for (const auto& [k, phi] : r.coeff_fields) {
    ScalarField tf = sample(e.ctilde.diff(Expr::Var::x3, k).at_x3(0.0), g);
    double err = relative_l2_interior(phi, tf);
    f.push_back({"phi" + std::to_string(k), phi});
    f.push_back({"phi" + std::to_string(k) + "_exact", tf});
    w.manifest().residuals["phi" + std::to_string(k) + "_rel"] = err;
    std::cout << "recover: order " << k << "  relative L2 error " << err << "\n";
  }
  for (const auto& d : r.diagnostics) {
    w.manifest().residuals["order" + std::to_string(d.order) + "_gram_condition"] = d.gram_condition;
    w.manifest().residuals["order" + std::to_string(d.order) + "_ls_residual"] = d.residual_norm;
  }
  w.fields("coefficients.csv", f);
  w.manifest().wall_times["recover"] = since(t0);
  w.finish();
  return 0;
}

int cmd_convergence(const ExperimentConfig& e) {
  auto t0 = std::chrono::steady_clock::now();
  OutputWriter w(e.out_dir);
  stamp(w, e, "convergence");
  RateTable t = run_convergence_study(e);
  w.csv("convergence.csv", t.values_csv());
  w.csv("convergence_rates.csv", t.rates_csv());
  for (std::size_t q = 0; q < t.quantities.size(); ++q) {
    w.manifest().slopes[t.quantities[q]] = t.rates[q];
    std::cout << "convergence: " << t.study << " " << t.quantities[q] << " rate " << t.rates[q] << "\n";
  }
  for (std::size_t i = 0; i < t.failures.size(); ++i) {
    w.manifest().notes["failure_" + std::to_string(i)] = t.failures[i];
    std::cerr << "convergence: " << t.failures[i] << "\n";
  }
  w.manifest().wall_times["convergence"] = since(t0);
  w.finish();
  return t.failures.empty() ? 0 : 1;
}

int cmd_pipeline(const ExperimentConfig& e) {
  OutputWriter w(e.out_dir);
  stamp(w, e, "pipeline");
  PipelineResult r = run_pipeline(e, w);
  w.finish();
  for (const auto& [k, v] : r.errors) std::cout << "pipeline: " << k << " " << v << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimal-surface inverse problem laboratory"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* s) {
    s->add_option("--config", common.config, "key = value config file");
    s->add_option("--out", common.out, "output directory");
    s->add_option("--seed", common.seed, "seed for randomized families");
    s->add_option("--threads", common.threads, "worker threads (MSE_LAB_THREADS otherwise)");
    s->add_option("--set", common.set, "override a config key: key=value");
  };
  struct Sub {
    const char* name;
    const char* help;
    int (*run)(const ExperimentConfig&);
  };
  const Sub subs[] = {
      {"forward", "solve the Dirichlet problem", cmd_forward},
      {"dn", "DN map of a boundary-data family", cmd_dn},
      {"linearize", "first and second linearizations with FD checks", cmd_linearize},
      {"identity-check", "integral identity defect per grid", cmd_identity},
      {"recover", "recover Taylor coefficients of the conformal factor", cmd_recover},
      {"convergence", "grid convergence study", cmd_convergence},
      {"pipeline", "dn -> surface gradient -> recovery", cmd_pipeline},
  };
  std::vector<std::pair<CLI::App*, const Sub*>> handles;
  for (const auto& s : subs) {
    CLI::App* a = app.add_subcommand(s.name, s.help);
    add_common(a);
    handles.emplace_back(a, &s);
  }
  CLI11_PARSE(app, argc, argv);
  try {
    for (auto [a, s] : handles)
      if (a->parsed()) return s->run(load(common));
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 1;
}
