#include "mselab/surface_gradient.hpp"

#include <Eigen/QR>
#include <cmath>
#include <memory>

#include "mselab/bspline.hpp"
#include "mselab/error.hpp"
#include "mselab/operators.hpp"
#include "mselab/parallel.hpp"

namespace mselab {

namespace {

// δX for ℓ with sampled partials l1, l2.
VectorField delta_field(const Metric& metric, const Grid& g, const Eigen::VectorXd& l1, const Eigen::VectorXd& l2) {
  const double a = (1.0 - metric.n()) / 2.0;
  VectorField X(g);
  for (int k = 0; k < g.size(); ++k) {
    Eigen::Vector2d v = a * (metric.ghat(g.x(g.col(k)), g.x(g.row(k))).inverse() * Eigen::Vector2d(l1[k], l2[k]));
    X.x1[k] = v[0];
    X.x2[k] = v[1];
  }
  return X;
}

Eigen::VectorXd stack(const std::vector<BoundaryTrace>& t) {
  Eigen::Index n = 0;
  for (const auto& x : t) n += x.values.size();
  Eigen::VectorXd out(n);
  Eigen::Index o = 0;
  for (const auto& x : t) {
    out.segment(o, x.values.size()) = x.values;
    o += x.values.size();
  }
  return out;
}

}  // namespace

SurfaceGradientResult recover_surface_gradient(const Metric& metric, const Gamma& gamma,
                                               const std::vector<BoundaryData>& family,
                                               const std::vector<BoundaryTrace>& dn1_g,
                                               const std::vector<BoundaryTrace>& dn1_ctilde,
                                               double anchor_value, const SurfaceGradientOptions& opts) {
  if (family.empty()) throw InvalidArgument("empty family");
  if (dn1_g.size() != family.size() || dn1_ctilde.size() != family.size())
    throw InvalidArgument("one measured trace per datum is required");
  if (!(anchor_value > 0)) throw InvalidArgument("anchor value must be positive");
  const Grid& g = gamma.grid();
  for (const auto& f : family) require_same_grid(g, f.grid(), "recover_surface_gradient");
  const int threads = resolve_threads(opts.threads);

  TensorBasis B(opts.per_dim, false);
  const Eigen::MatrixXd Bs = B.sample(g), B1 = B.sample_d1(g), B2 = B.sample_d2(g);
  const AdvectionOperatorSpec base = advection_spec(metric, g);
  std::vector<VectorField> dXb;
  for (int b = 0; b < B.size(); ++b) dXb.push_back(delta_field(metric, g, B1.col(b), B2.col(b)));

  const int D = static_cast<int>(family.size());
  // Λ_θ(f_d) for every datum, and the solutions when sensitivities are needed.
  auto forward = [&](const Eigen::VectorXd& theta, std::vector<ScalarField>* sols) {
    AdvectionOperatorSpec s = base;
    VectorField dX = delta_field(metric, g, B1 * theta, B2 * theta);
    s.X.x1 += dX.x1;
    s.X.x2 += dX.x2;
    auto op = std::make_unique<AdvectionDiffusion>(metric, g, std::move(s));
    std::vector<BoundaryTrace> tr;
    for (int d = 0; d < D; ++d) {
      ScalarField v = op->solve(family[static_cast<std::size_t>(d)].values());
      tr.push_back(neumann_trace(v, metric, gamma));
      if (sols) sols->push_back(std::move(v));
    }
    return std::make_pair(std::move(op), stack(tr));
  };

  const Eigen::VectorXd target = stack(dn1_ctilde) - stack(dn1_g);
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(B.size());
  const Eigen::VectorXd lambda0 = forward(theta, nullptr).second;

  SurfaceGradientResult res{VectorField(g), ScalarField(g), anchor_value, 0, {}};
  for (int it = 0; it < opts.max_iters; ++it) {
    std::vector<ScalarField> sols;
    auto fw = forward(theta, &sols);
    const AdvectionDiffusion& op = *fw.first;
    Eigen::VectorXd r = (fw.second - lambda0) - target;
    res.history.push_back(r.norm());
    Eigen::MatrixXd J(r.size(), B.size());
    parallel_for(B.size(), threads, [&](int b) {
      std::vector<BoundaryTrace> col;
      for (int d = 0; d < D; ++d) {
        const ScalarField& v = sols[static_cast<std::size_t>(d)];
        VectorField dv = partials(v);
        ScalarField rhs(g);
        for (int k : g.interior_nodes())
          rhs[k] = -(dXb[static_cast<std::size_t>(b)].x1[k] * dv.x1[k] + dXb[static_cast<std::size_t>(b)].x2[k] * dv.x2[k]);
        col.push_back(neumann_trace(op.solve(ScalarField(g), &rhs), metric, gamma));
      }
      J.col(b) = stack(col);
    });
    Eigen::VectorXd step;
    if (opts.tikhonov > 0) {
      Eigen::MatrixXd Ja(J.rows() + J.cols(), J.cols());
      Ja << J, std::sqrt(opts.tikhonov) * Eigen::MatrixXd::Identity(J.cols(), J.cols());
      Eigen::VectorXd ra(Ja.rows());
      ra << -r, -std::sqrt(opts.tikhonov) * theta;
      step = Ja.completeOrthogonalDecomposition().solve(ra);
    } else {
      step = J.completeOrthogonalDecomposition().solve(-r);
    }
    theta += step;
    res.iterations = it + 1;
    if (step.norm() <= opts.step_tol * (1.0 + theta.norm())) break;
  }
  res.history.push_back(((forward(theta, nullptr).second - lambda0) - target).norm());

  const auto& mn = gamma.measurement_nodes();
  const int anchor = mn[mn.size() / 2];
  Eigen::VectorXd ell = Bs * theta;
  ell.array() -= ell[anchor];
  res.log_c = ScalarField(g, ell);
  res.deltaX = delta_field(metric, g, B1 * theta, B2 * theta);
  double mean = 0.0;
  auto in = g.interior_nodes();
  for (int k : in) mean += ell[k];
  mean /= static_cast<double>(in.size());
  res.lambda_hat = anchor_value * std::exp(mean);
  return res;
}

VectorField surface_gradient_exact(const Metric& metric, const Expr& ctilde, const Grid& grid) {
  Expr l = log(ctilde.at_x3(0.0));
  Expr l1 = l.diff(Expr::Var::x1), l2 = l.diff(Expr::Var::x2);
  Eigen::VectorXd a(grid.size()), b(grid.size());
  for (int k = 0; k < grid.size(); ++k) {
    double x1 = grid.x(grid.col(k)), x2 = grid.x(grid.row(k));
    a[k] = l1.eval(x1, x2, 0.0);
    b[k] = l2.eval(x1, x2, 0.0);
  }
  return delta_field(metric, grid, a, b);
}

double relative_l2_interior(const VectorField& a, const VectorField& b) {
  require_same_grid(a.x1.grid(), b.x1.grid(), "relative_l2_interior");
  double num = 0.0, den = 0.0;
  for (int k : a.x1.grid().interior_nodes()) {
    double d1 = a.x1[k] - b.x1[k], d2 = a.x2[k] - b.x2[k];
    num += d1 * d1 + d2 * d2;
    den += b.x1[k] * b.x1[k] + b.x2[k] * b.x2[k];
  }
  return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace mselab
