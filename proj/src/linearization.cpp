#include "mselab/linearization.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "mselab/error.hpp"
#include "mselab/operators.hpp"
#include "mselab/parallel.hpp"

namespace mselab {

AdvectionOperatorSpec advection_spec(const Metric& metric, const Grid& grid) {
  AdvectionOperatorSpec s{VectorField(grid), ScalarField(grid), ScalarField(grid), ScalarField(grid)};
  const double n = metric.n();
  for (int k = 0; k < grid.size(); ++k) {
    double x1 = grid.x(grid.col(k)), x2 = grid.x(grid.row(k));
    SurfaceJet sj = metric.surface(x1, x2);
    if (!(sj.c > 0.0)) throw MetricInvalid("c(x', 0) not positive");
    Eigen::Vector2d b = (1 - n) / (2 * sj.c) * (metric.ghat(x1, x2).inverse() * Eigen::Vector2d(sj.c1, sj.c2));
    s.X.x1[k] = b[0];
    s.X.x2[k] = b[1];
    s.zeroth[k] = (n - 1) / (2 * sj.c) * metric.c_dn(2, x1, x2);
    s.s2[k] = (n - 1) / (2 * sj.c) * metric.c_dn(3, x1, x2);
    s.s3[k] = (n - 1) / (2 * sj.c) * metric.c_dn(4, x1, x2);
  }
  return s;
}

namespace {

// Interior row of a·(second-order part) + first-order coefficients β and zeroth ζ:
//   sign·(gi11 v11 + 2gi12 v12 + gi22 v22) + β·∇v + ζv.
void add_row(std::vector<Triplet>& t, const Grid& g, int i, int j, const Eigen::Matrix2d& gi,
             double sign, double beta1, double beta2, double zeta) {
  const double h = g.h(), h2 = h * h;
  auto at = [&](int a, int b) { return g.index(i + a, j + b); };
  const int k = g.index(i, j);
  double a11 = sign * gi(0, 0), a12 = sign * 2 * gi(0, 1), a22 = sign * gi(1, 1);
  t.emplace_back(k, k, -2 * a11 / h2 - 2 * a22 / h2 + zeta);
  t.emplace_back(k, at(1, 0), a11 / h2 + beta1 / (2 * h));
  t.emplace_back(k, at(-1, 0), a11 / h2 - beta1 / (2 * h));
  t.emplace_back(k, at(0, 1), a22 / h2 + beta2 / (2 * h));
  t.emplace_back(k, at(0, -1), a22 / h2 - beta2 / (2 * h));
  if (a12 != 0.0) {
    t.emplace_back(k, at(1, 1), a12 / (4 * h2));
    t.emplace_back(k, at(1, -1), -a12 / (4 * h2));
    t.emplace_back(k, at(-1, 1), -a12 / (4 * h2));
    t.emplace_back(k, at(-1, -1), a12 / (4 * h2));
  }
}

// ĝ^{ij}Γ̂ᵐᵢⱼ
Eigen::Vector2d contracted_gamma(const NodeGeom& ng) {
  Eigen::Vector2d gam;
  for (int m = 0; m < 2; ++m)
    gam[m] = ng.gi(0, 0) * ng.gam[m][0][0] + 2 * ng.gi(0, 1) * ng.gam[m][0][1] + ng.gi(1, 1) * ng.gam[m][1][1];
  return gam;
}

SparseMatrix assemble(const Grid& g, const GeometryCache& geo, double sign, const VectorField& b,
                      double bsign, const ScalarField& zeta) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(9) * g.size());
  for (int j = 0; j < g.n(); ++j)
    for (int i = 0; i < g.n(); ++i) {
      int k = g.index(i, j);
      if (g.is_boundary(i, j)) {
        t.emplace_back(k, k, 1.0);
        continue;
      }
      // sign·Δ̂v = sign·(ĝ^{ij}∂ᵢⱼv − γᵐ∂ₘv)
      Eigen::Vector2d gam = contracted_gamma(geo[k]);
      add_row(t, g, i, j, geo[k].gi, sign, -sign * gam[0] + bsign * b.x1[k], -sign * gam[1] + bsign * b.x2[k],
              zeta[k]);
    }
  SparseMatrix A(g.size(), g.size());
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

Eigen::VectorXd rhs_vector(const Grid& g, const ScalarField& boundary, const ScalarField* rhs) {
  Eigen::VectorXd r(g.size());
  for (int j = 0; j < g.n(); ++j)
    for (int i = 0; i < g.n(); ++i) {
      int k = g.index(i, j);
      r[k] = g.is_boundary(i, j) ? boundary[k] : (rhs ? (*rhs)[k] : 0.0);
    }
  return r;
}

// Boundary rows are identities; copy the data so the trace is exact.
ScalarField with_trace(const Grid& g, Eigen::VectorXd x, const ScalarField& boundary) {
  for (int k : g.boundary_nodes()) x[k] = boundary[k];
  return ScalarField(g, std::move(x));
}

ScalarField apply_interior(const SparseMatrix& A, const ScalarField& v) {
  const Grid& g = v.grid();
  Eigen::VectorXd r = A * v.values();
  for (int k : g.boundary_nodes()) r[k] = 0.0;
  return ScalarField(g, std::move(r));
}

}  // namespace

AdvectionDiffusion::AdvectionDiffusion(const Metric& metric, const Grid& grid)
    : grid_(grid), spec_(advection_spec(metric, grid)),
      A_(assemble(grid, GeometryCache(metric, grid), -1.0, spec_.X, 1.0, spec_.zeroth)),
      solver_(A_) {}

AdvectionDiffusion::AdvectionDiffusion(const Metric& metric, const Grid& grid, AdvectionOperatorSpec spec)
    : grid_(grid), spec_(std::move(spec)),
      A_(assemble(grid, GeometryCache(metric, grid), -1.0, spec_.X, 1.0, spec_.zeroth)),
      solver_(A_) {
  require_same_grid(grid, spec_.X.x1.grid(), "AdvectionDiffusion");
}

ScalarField AdvectionDiffusion::solve(const ScalarField& boundary, const ScalarField* rhs) const {
  require_same_grid(grid_, boundary.grid(), "linear solve");
  if (rhs) require_same_grid(grid_, rhs->grid(), "linear solve rhs");
  return with_trace(grid_, solver_.solve(rhs_vector(grid_, boundary, rhs)), boundary);
}

ScalarField AdvectionDiffusion::apply(const ScalarField& v) const {
  require_same_grid(grid_, v.grid(), "linear apply");
  return apply_interior(A_, v);
}

ScalarField first_lin_solve(const Metric& metric, const BoundaryData& f) {
  return AdvectionDiffusion(metric, f.grid()).solve(f.values());
}

ScalarField second_lin_solve(const AdvectionDiffusion& op, const ScalarField& v_k, const ScalarField& v_l,
                             const ScalarField& s2) {
  require_same_grid(op.grid(), v_k.grid(), "second_lin_solve");
  require_same_grid(op.grid(), v_l.grid(), "second_lin_solve");
  require_same_grid(op.grid(), s2.grid(), "second_lin_solve");
  ScalarField rhs = v_k * v_l;
  rhs = -1.0 * (s2 * rhs);
  return op.solve(ScalarField(op.grid()), &rhs);
}

ScalarField second_lin_solve(const AdvectionDiffusion& op, const ScalarField& v_k, const ScalarField& v_l) {
  return second_lin_solve(op, v_k, v_l, op.spec().s2);
}

ScalarField second_lin_solve(const Metric& metric, const std::optional<Expr>& ctilde, const ScalarField& v_k,
                             const ScalarField& v_l) {
  if (ctilde) {
    Metric m(metric.spec().conformal_product(*ctilde));
    return second_lin_solve(AdvectionDiffusion(m, v_k.grid()), v_k, v_l);
  }
  return second_lin_solve(AdvectionDiffusion(metric, v_k.grid()), v_k, v_l);
}

ScalarField third_lin_solve(const AdvectionDiffusion& op, const Metric& metric,
                            const std::array<const ScalarField*, 3>& v, const ScalarField& w12,
                            const ScalarField& w13, const ScalarField& w23) {
  return third_lin_solve(op, metric, v, w12, w13, w23, op.spec().s2, op.spec().s3);
}

ScalarField third_lin_solve(const AdvectionDiffusion& op, const Metric& metric,
                            const std::array<const ScalarField*, 3>& v, const ScalarField& w12,
                            const ScalarField& w13, const ScalarField& w23, const ScalarField& s2,
                            const ScalarField& s3) {
  const Grid& g = op.grid();
  for (const ScalarField* f : v) require_same_grid(g, f->grid(), "third_lin_solve");
  GeometryCache geo(metric, g);
  std::array<HessianField, 3> H = {hess_hat(*v[0], geo), hess_hat(*v[1], geo), hess_hat(*v[2], geo)};
  std::array<VectorField, 3> G = {grad_hat(*v[0], geo), grad_hat(*v[1], geo), grad_hat(*v[2], geo)};
  ScalarField rhs(g);
  for (int k : g.interior_nodes()) {
    auto T = [&](int a, int b, int c) {
      double p1 = G[b].x1[k], p2 = G[b].x2[k], q1 = G[c].x1[k], q2 = G[c].x2[k];
      return H[a].h11[k] * p1 * q1 + H[a].h12[k] * (p1 * q2 + p2 * q1) + H[a].h22[k] * p2 * q2;
    };
    double src = s2[k] * ((*v[0])[k] * w23[k] + (*v[1])[k] * w13[k] + (*v[2])[k] * w12[k]) +
                 s3[k] * (*v[0])[k] * (*v[1])[k] * (*v[2])[k] + 2.0 * (T(0, 1, 2) + T(1, 0, 2) + T(2, 0, 1));
    rhs[k] = -src;
  }
  return op.solve(ScalarField(g), &rhs);
}

namespace {

ScalarField tensor_fd(const Metric& metric, const std::vector<BoundaryData>& f, double eps,
                      const FdOptions& o) {
  const int N = static_cast<int>(f.size());
  const Grid& g = f.front().grid();
  const int count = 1 << N;
  std::vector<BoundaryData> data;
  std::vector<double> weight;
  for (int mask = 0; mask < count; ++mask) {
    BoundaryData d = f[0].scaled((mask & 1) ? -eps : eps);
    double w = (mask & 1) ? -1.0 : 1.0;
    for (int q = 1; q < N; ++q) {
      bool neg = (mask >> q) & 1;
      d = d + f[q].scaled(neg ? -eps : eps);
      if (neg) w = -w;
    }
    if (!(d.smallness() < o.solver.delta_cap)) {
      std::ostringstream os;
      os << "finite-difference stencil leaves the small-data region: |f| = " << d.smallness()
         << " >= delta_cap " << o.solver.delta_cap << "; use a smaller eps than " << eps;
      throw StencilEscape(os.str());
    }
    data.push_back(std::move(d));
    weight.push_back(w);
  }
  std::vector<Eigen::VectorXd> sol(count);
  parallel_for(count, resolve_threads(o.threads), [&](int m) { sol[m] = solve_bvp(metric, data[m], o.solver).u.values(); });
  // Fixed summation order keeps the result independent of the thread count.
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(g.size());
  for (int m = 0; m < count; ++m) acc += weight[m] * sol[m];
  acc /= std::pow(2 * eps, N);
  return ScalarField(g, std::move(acc));
}

}  // namespace

ScalarField higher_lin_fd(const Metric& metric, const std::vector<BoundaryData>& f, const FdOptions& o) {
  if (f.empty() || f.size() > 4) throw InvalidArgument("higher_lin_fd supports 1 to 4 data");
  if (!(o.eps > 0.0)) throw InvalidArgument("eps must be positive");
  for (const auto& d : f) require_same_grid(f.front().grid(), d.grid(), "higher_lin_fd");
  ScalarField d1 = tensor_fd(metric, f, o.eps, o);
  if (!o.richardson) return d1;
  ScalarField d2 = tensor_fd(metric, f, 0.5 * o.eps, o);
  return (1.0 / 3.0) * (4.0 * d2 - d1);
}

ScalarField first_lin_fd_onesided(const Metric& metric, const BoundaryData& f, const FdOptions& o) {
  if (!(o.eps > 0.0)) throw InvalidArgument("eps must be positive");
  BoundaryData d = f.scaled(o.eps);
  if (!(d.smallness() < o.solver.delta_cap)) throw StencilEscape("one-sided stencil leaves the small-data region");
  ScalarField up = solve_bvp(metric, d, o.solver).u;
  ScalarField u0 = solve_bvp(metric, BoundaryData(f.grid()), o.solver).u;
  return (1.0 / o.eps) * (up - u0);
}

ScalarField adjoint_potential(const Metric& metric, const Grid& grid) {
  ScalarField q(grid);
  const double n = metric.n();
  for (int k = 0; k < grid.size(); ++k) {
    double x1 = grid.x(grid.col(k)), x2 = grid.x(grid.row(k));
    SurfaceJet s = metric.surface(x1, x2);
    Eigen::Matrix2d gi = metric.ghat(x1, x2).inverse();
    auto gam = christoffel_at(metric, x1, x2);
    // Δ_ĝ log c with ∂ᵢlog c = cᵢ/c and ∂ᵢⱼlog c = cᵢⱼ/c − cᵢcⱼ/c².
    double l[2] = {s.c1 / s.c, s.c2 / s.c};
    double ll[2][2] = {{s.c11 / s.c - l[0] * l[0], s.c12 / s.c - l[0] * l[1]},
                       {s.c12 / s.c - l[0] * l[1], s.c22 / s.c - l[1] * l[1]}};
    double lap = 0.0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) lap += gi(a, b) * (ll[a][b] - gam[0][a][b] * l[0] - gam[1][a][b] * l[1]);
    q[k] = (1 - n) / 2 * lap;
  }
  return q;
}

AdjointOperator::AdjointOperator(const Metric& metric, const Grid& grid)
    : grid_(grid), q_(adjoint_potential(metric, grid)),
      A_(assemble(grid, GeometryCache(metric, grid), 1.0, advection_spec(metric, grid).X, 1.0, q_)),
      solver_(A_) {}

ScalarField AdjointOperator::solve(const ScalarField& boundary) const {
  require_same_grid(grid_, boundary.grid(), "adjoint solve");
  return with_trace(grid_, solver_.solve(rhs_vector(grid_, boundary, nullptr)), boundary);
}

ScalarField AdjointOperator::apply(const ScalarField& v) const { return apply_interior(A_, v); }

std::vector<ScalarField> adjoint_candidate_traces(const Gamma& gamma, int count) {
  const Grid& g = gamma.grid();
  std::vector<ScalarField> out;
  if (gamma.is_full()) {
    const int kl[][2] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 0}, {0, 2}, {2, 1}, {1, 2}, {2, 2}};
    for (const auto& p : kl) {
      if (static_cast<int>(out.size()) >= count) break;
      ScalarField t(g);
      for (int k : g.boundary_nodes()) {
        double x1 = g.x(g.col(k)), x2 = g.x(g.row(k));
        t[k] = (p[0] == 0 && p[1] == 0)
                   ? 1.0
                   : 1.0 + 0.5 * std::cos(p[0] * std::numbers::pi * x1) * std::cos(p[1] * std::numbers::pi * x2);
      }
      out.push_back(std::move(t));
    }
    return out;
  }
  const double cw[][2] = {{0.5, 0.45}, {0.3, 0.25}, {0.7, 0.25}, {0.5, 0.2}, {0.2, 0.15},
                          {0.8, 0.15}, {0.4, 0.3},  {0.6, 0.3},  {0.5, 0.1}};
  for (const auto& p : cw) {
    if (static_cast<int>(out.size()) >= count) break;
    ScalarField t(g);
    for (const auto& arc : gamma.arcs()) {
      for (int s = arc.t0; s <= arc.t1; ++s) {
        auto [i, j] = side_node(g, arc.side, s);
        if (!gamma.in_support(i, j)) continue;
        double r = (static_cast<double>(s - arc.t0) / (arc.t1 - arc.t0) - p[0]) / p[1];
        double b = std::max(0.0, 1.0 - r * r);
        t(i, j) = b * b * b;
      }
    }
    out.push_back(std::move(t));
  }
  return out;
}

AdjointResult adjoint_special_solution(const Metric& metric, const Gamma& gamma, int i0, int j0) {
  const Grid& g = gamma.grid();
  if (!g.is_interior(i0, j0)) throw InvalidArgument("x0 must be an interior node");
  AdjointOperator op(metric, g);
  auto traces = adjoint_candidate_traces(gamma);
  std::ostringstream report;
  for (std::size_t a = 0; a < traces.size(); ++a) {
    ScalarField v0 = op.solve(traces[a]);
    double at = std::abs(v0(i0, j0)), mx = v0.max_abs();
    if (mx > 0.0 && at >= 1e-3 * mx) return {std::move(v0), traces[a], static_cast<int>(a)};
    report << " [" << a << "] |v0(x0)| = " << at << ", max = " << mx;
  }
  throw Error("adjoint special solution: no boundary bump gives v0(x0) != 0:" + report.str());
}

MagneticCoeffs advection_to_magnetic(const VectorField& X, const Metric& metric) {
  const Grid& g = X.grid();
  GeometryCache geo(metric, g);
  ScalarField div = divergence_hat(X, geo);
  MagneticCoeffs mc{VectorField(0.5 * X.x1, 0.5 * X.x2), true, ScalarField(g)};
  for (int k = 0; k < g.size(); ++k) {
    Eigen::Vector2d x(X.x1[k], X.x2[k]);
    mc.q[k] = 0.25 * x.dot(geo[k].g * x) - 0.5 * div[k];
  }
  return mc;
}

ScalarField magnetic_apply(const MagneticCoeffs& mc, const Metric& metric, const ScalarField& u) {
  const Grid& g = u.grid();
  const double h = g.h();
  GeometryCache geo(metric, g);
  // iA♭ = −X♭/2 with X = 2·(stored A). The flux |ĝ|^{1/2}ĝ^{jk}(∂ₖ − X♭ₖ/2)u is
  // evaluated on cell faces so that no one-sided boundary derivative enters.
  std::vector<Eigen::Vector2d> xflat(g.size());
  ScalarField du1(g), du2(g);
  for (int k = 0; k < g.size(); ++k) {
    int i = g.col(k), j = g.row(k);
    xflat[k] = geo[k].g * Eigen::Vector2d(2 * mc.A.x1[k], 2 * mc.A.x2[k]);
    du1[k] = fd::d1(u, i, j);
    du2[k] = fd::d2(u, i, j);
  }
  // Component `dir` of the flux on the face between nodes a and b (b = a + e_dir).
  auto face = [&](int a, int b, int dir) {
    const int other = 1 - dir;
    const double normal = (u[b] - u[a]) / h;
    double s = 0.0;
    for (int k : {a, b}) {
      const NodeGeom& G = geo[k];
      double tang = (other == 0 ? du1[k] : du2[k]) - 0.5 * xflat[k][other] * u[k];
      double own = -0.5 * xflat[k][dir] * u[k];
      s += 0.5 * G.sqrt_det * (G.gi(dir, dir) * normal + G.gi(dir, dir) * own + G.gi(dir, other) * tang);
    }
    return s;
  };
  ScalarField out(g);
  for (int j = 1; j < g.n() - 1; ++j)
    for (int i = 1; i < g.n() - 1; ++i) {
      int k = g.index(i, j);
      double divq = (face(k, g.index(i + 1, j), 0) - face(g.index(i - 1, j), k, 0)) / h +
                    (face(k, g.index(i, j + 1), 1) - face(g.index(i, j - 1), k, 1)) / h;
      const NodeGeom& G = geo[k];
      Eigen::Vector2d P(du1[k] - 0.5 * xflat[k][0] * u[k], du2[k] - 0.5 * xflat[k][1] * u[k]);
      Eigen::Vector2d Q = G.sqrt_det * (G.gi * P);
      double aq = -0.5 * (xflat[k][0] * Q[0] + xflat[k][1] * Q[1]);
      out[k] = -(divq + aq) / G.sqrt_det + mc.q[k] * u[k];
    }
  return out;
}

ScalarField advection_apply(const VectorField& X, const Metric& metric, const ScalarField& u) {
  GeometryCache geo(metric, u.grid());
  ScalarField lap = laplace_beltrami_hat(u, geo);
  VectorField du = partials(u);
  ScalarField out(u.grid());
  for (int k = 0; k < u.grid().size(); ++k) out[k] = -lap[k] + X.x1[k] * du.x1[k] + X.x2[k] * du.x2[k];
  return out;
}

}  // namespace mselab
