#include "mselab/residual.hpp"

#include <Eigen/LU>
#include <cmath>
#include <sstream>

#include "mselab/error.hpp"
#include "mselab/expr.hpp"
#include "mselab/operators.hpp"

namespace mselab {

namespace {

[[noreturn]] void escape(double x1, double x2, double t, double c) {
  std::ostringstream os;
  os << "c(" << x1 << ", " << x2 << ", " << t << ") = " << c << " <= 0";
  throw DomainEscape(os.str());
}

CJet checked_jet(const Metric& m, double x1, double x2, double t) {
  CJet cj = m.c_jet(x1, x2, t);
  if (!(cj.c > 0.0)) escape(x1, x2, t, cj.c);
  return cj;
}

}  // namespace

Stencil gather(const ScalarField& u, int i, int j) {
  Stencil s;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) s[a][b] = u(i + a - 1, j + b - 1);
  return s;
}

MseResidual::MseResidual(const Metric& metric, const Grid& grid) : metric_(metric), geo_(metric, grid) {}

CJet MseResidual::jet(int k, double t) const {
  const NodeGeom& ng = geo_[k];
  return checked_jet(metric_, ng.x1, ng.x2, t);
}

double MseResidual::local(int k, const Stencil& s, const CJet& cj) const {
  const NodeGeom& ng = geo_[k];
  const double h = geo_.grid().h();
  const double n = metric_.n();
  double du[2] = {(s[2][1] - s[0][1]) / (2 * h), (s[1][2] - s[1][0]) / (2 * h)};
  double d2[2][2];
  d2[0][0] = (s[2][1] - 2 * s[1][1] + s[0][1]) / (h * h);
  d2[1][1] = (s[1][2] - 2 * s[1][1] + s[1][0]) / (h * h);
  d2[0][1] = d2[1][0] = (s[2][2] - s[2][0] - s[0][2] + s[0][0]) / (4 * h * h);
  double H[2][2];
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) H[a][b] = d2[a][b] - ng.gam[0][a][b] * du[0] - ng.gam[1][a][b] * du[1];
  const auto& gi = ng.gi;
  double lap = gi(0, 0) * H[0][0] + 2 * gi(0, 1) * H[0][1] + gi(1, 1) * H[1][1];
  double gr[2] = {gi(0, 0) * du[0] + gi(0, 1) * du[1], gi(1, 0) * du[0] + gi(1, 1) * du[1]};
  double ng2 = du[0] * gr[0] + du[1] * gr[1];
  double adv = gr[0] * cj.c1 + gr[1] * cj.c2;
  double hgg = H[0][0] * gr[0] * gr[0] + 2 * H[0][1] * gr[0] * gr[1] + H[1][1] * gr[1] * gr[1];
  double first = -lap + (1 - n) / (2 * cj.c) * adv + (n - 1) / (2 * cj.c) * cj.cn;
  return first * (1 + ng2) + hgg;
}

ScalarField MseResidual::eval(const ScalarField& u) const {
  const Grid& g = geo_.grid();
  require_same_grid(g, u.grid(), "residual");
  ScalarField out(g);
  for (int j = 1; j < g.n() - 1; ++j)
    for (int i = 1; i < g.n() - 1; ++i) {
      int k = g.index(i, j);
      out[k] = local(k, gather(u, i, j));
    }
  return out;
}

ScalarField residual_F(const ScalarField& u, const Metric& metric) {
  return MseResidual(metric, u.grid()).eval(u);
}

ScalarField residual_F_exact(const Expr& u, const Metric& metric, const Grid& grid) {
  const Expr u1 = u.diff(Expr::Var::x1), u2 = u.diff(Expr::Var::x2);
  const Expr u11 = u1.diff(Expr::Var::x1), u12 = u1.diff(Expr::Var::x2), u22 = u2.diff(Expr::Var::x2);
  const double n = metric.n();
  ScalarField out(grid);
  for (int k : grid.interior_nodes()) {
    double x1 = grid.x(grid.col(k)), x2 = grid.x(grid.row(k));
    double du[2] = {u1.eval(x1, x2, 0), u2.eval(x1, x2, 0)};
    double d2[2][2] = {{u11.eval(x1, x2, 0), u12.eval(x1, x2, 0)}, {u12.eval(x1, x2, 0), u22.eval(x1, x2, 0)}};
    auto gam = christoffel_at(metric, x1, x2);
    Eigen::Matrix2d gi = metric.ghat(x1, x2).inverse();
    CJet cj = metric.c_jet(x1, x2, u.eval(x1, x2, 0));
    double H[2][2];
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) H[a][b] = d2[a][b] - gam[0][a][b] * du[0] - gam[1][a][b] * du[1];
    double lap = gi(0, 0) * H[0][0] + 2 * gi(0, 1) * H[0][1] + gi(1, 1) * H[1][1];
    double gr[2] = {gi(0, 0) * du[0] + gi(0, 1) * du[1], gi(1, 0) * du[0] + gi(1, 1) * du[1]};
    double ng2 = du[0] * gr[0] + du[1] * gr[1];
    double adv = gr[0] * cj.c1 + gr[1] * cj.c2;
    double hgg = H[0][0] * gr[0] * gr[0] + 2 * H[0][1] * gr[0] * gr[1] + H[1][1] * gr[1] * gr[1];
    out[k] = (-lap + (1 - n) / (2 * cj.c) * adv + (n - 1) / (2 * cj.c) * cj.cn) * (1 + ng2) + hgg;
  }
  return out;
}

ScalarField residual_mean_curvature(const ScalarField& u, const Metric& metric, HessianStencil hs) {
  const Grid& g = u.grid();
  const double h = g.h();
  GeometryCache geo(metric, g);
  VectorField du_full = partials(u);
  ScalarField out(g);
  for (int j = 1; j < g.n() - 1; ++j)
    for (int i = 1; i < g.n() - 1; ++i) {
      const int k = g.index(i, j);
      const NodeGeom& ng = geo[k];
      const double t = u(i, j);
      CJet cj = checked_jet(metric, ng.x1, ng.x2, t);
      double du[2] = {du_full.x1[k], du_full.x2[k]};
      double d2[2][2];
      const bool wide_ok = i >= 2 && j >= 2 && i <= g.n() - 3 && j <= g.n() - 3;
      if (hs == HessianStencil::fourth_order && wide_ok) {
        static constexpr double w1[5] = {1, -8, 0, 8, -1};
        static constexpr double w2[5] = {-1, 16, -30, 16, -1};
        double a1 = 0, a2 = 0, a11 = 0, a22 = 0, a12 = 0;
        for (int q = -2; q <= 2; ++q) {
          a1 += w1[q + 2] * u(i + q, j);
          a2 += w1[q + 2] * u(i, j + q);
          a11 += w2[q + 2] * u(i + q, j);
          a22 += w2[q + 2] * u(i, j + q);
          for (int r = -2; r <= 2; ++r) a12 += w1[q + 2] * w1[r + 2] * u(i + q, j + r);
        }
        du[0] = a1 / (12 * h);
        du[1] = a2 / (12 * h);
        d2[0][0] = a11 / (12 * h * h);
        d2[1][1] = a22 / (12 * h * h);
        d2[0][1] = a12 / (144 * h * h);
      } else if (hs == HessianStencil::gradient_of_gradient && wide_ok) {
        d2[0][0] = (du_full.x1(i + 1, j) - du_full.x1(i - 1, j)) / (2 * h);
        d2[1][1] = (du_full.x2(i, j + 1) - du_full.x2(i, j - 1)) / (2 * h);
        d2[0][1] = 0.5 * ((du_full.x2(i + 1, j) - du_full.x2(i - 1, j)) / (2 * h) +
                          (du_full.x1(i, j + 1) - du_full.x1(i, j - 1)) / (2 * h));
      } else {
        d2[0][0] = (u(i + 1, j) - 2 * t + u(i - 1, j)) / (h * h);
        d2[1][1] = (u(i, j + 1) - 2 * t + u(i, j - 1)) / (h * h);
        d2[0][1] = (u(i + 1, j + 1) - u(i + 1, j - 1) - u(i - 1, j + 1) + u(i - 1, j - 1)) / (4 * h * h);
      }
      d2[1][0] = d2[0][1];
      // Product metric G = ĝ ⊕ 1, indices 0,1 tangential and 2 transversal.
      double G[3][3] = {}, Gi[3][3] = {};
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          G[a][b] = ng.g(a, b);
          Gi[a][b] = ng.gi(a, b);
        }
      G[2][2] = Gi[2][2] = 1.0;
      double dc[3] = {cj.c1, cj.c2, cj.cn};
      double Gdc[3];
      for (int a = 0; a < 3; ++a) Gdc[a] = Gi[a][0] * dc[0] + Gi[a][1] * dc[1] + Gi[a][2] * dc[2];
      double df[3] = {-du[0], -du[1], 1.0};
      double Hf[3][3];
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          double second = (a < 2 && b < 2) ? -d2[a][b] : 0.0;
          double conn = 0.0;
          for (int m = 0; m < 3; ++m) {
            double gam = (a < 2 && b < 2 && m < 2) ? ng.gam[m][a][b] : 0.0;
            gam += ((m == a ? dc[b] : 0.0) + (m == b ? dc[a] : 0.0) - G[a][b] * Gdc[m]) / (2 * cj.c);
            conn += gam * df[m];
          }
          Hf[a][b] = second - conn;
        }
      double gradf[3];
      for (int a = 0; a < 3; ++a) {
        double s = 0.0;
        for (int b = 0; b < 3; ++b) s += Gi[a][b] * df[b];
        gradf[a] = s / cj.c;
      }
      double nf = 0.0, lf = 0.0, hff = 0.0;
      for (int a = 0; a < 3; ++a) {
        nf += df[a] * gradf[a];
        for (int b = 0; b < 3; ++b) {
          lf += Gi[a][b] / cj.c * Hf[a][b];
          hff += Hf[a][b] * gradf[a] * gradf[b];
        }
      }
      out[k] = cj.c * cj.c * (nf * lf - hff);
    }
  return out;
}

namespace {

struct FaceGeom {
  double x1, x2;
  Eigen::Matrix2d gi;
  double sqrt_det;
};

FaceGeom face_geom(const Metric& m, double x1, double x2) {
  Eigen::Matrix2d g = m.ghat(x1, x2);
  double det = g.determinant();
  if (!(det > 0.0)) throw MetricInvalid("ghat not SPD at a cell face");
  return {x1, x2, g.inverse(), std::sqrt(det)};
}

}  // namespace

ScalarField residual_divergence_form(const ScalarField& u, const Metric& metric) {
  const Grid& g = u.grid();
  const int N = g.n();
  const double h = g.h();
  const double n = metric.n();
  GeometryCache geo(metric, g);
  // Faces normal to x1 at (i+½, j) and normal to x2 at (i, j+½).
  std::vector<FaceGeom> fx(N * N), fy(N * N);
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) {
      if (i + 1 < N) fx[g.index(i, j)] = face_geom(metric, g.x(i) + 0.5 * h, g.x(j));
      if (j + 1 < N) fy[g.index(i, j)] = face_geom(metric, g.x(i), g.x(j) + 0.5 * h);
    }
  ScalarField out(g);
  for (int j = 1; j < N - 1; ++j)
    for (int i = 1; i < N - 1; ++i) {
      const int k = g.index(i, j);
      const NodeGeom& ng = geo[k];
      const double t = u(i, j);
      auto flux = [&](const FaceGeom& f, double u1, double u2, int comp) {
        double c = metric.c(f.x1, f.x2, t);
        if (!(c > 0.0)) escape(f.x1, f.x2, t, c);
        Eigen::Vector2d du(u1, u2);
        Eigen::Vector2d gr = f.gi * du;
        double eta = std::sqrt(1.0 + du.dot(gr) / c);
        return std::pow(c, 0.5 * n) * f.sqrt_det * gr[comp] / (c * eta);
      };
      double fe = flux(fx[g.index(i, j)], (u(i + 1, j) - u(i, j)) / h,
                       (u(i, j + 1) + u(i + 1, j + 1) - u(i, j - 1) - u(i + 1, j - 1)) / (4 * h), 0);
      double fw = flux(fx[g.index(i - 1, j)], (u(i, j) - u(i - 1, j)) / h,
                       (u(i - 1, j + 1) + u(i, j + 1) - u(i - 1, j - 1) - u(i, j - 1)) / (4 * h), 0);
      double fn = flux(fy[g.index(i, j)],
                       (u(i + 1, j) + u(i + 1, j + 1) - u(i - 1, j) - u(i - 1, j + 1)) / (4 * h),
                       (u(i, j + 1) - u(i, j)) / h, 1);
      double fs = flux(fy[g.index(i, j - 1)],
                       (u(i + 1, j - 1) + u(i + 1, j) - u(i - 1, j - 1) - u(i - 1, j)) / (4 * h),
                       (u(i, j) - u(i, j - 1)) / h, 1);
      CJet cj = checked_jet(metric, ng.x1, ng.x2, t);
      const double c = cj.c;
      double div = (fe - fw + fn - fs) / (h * std::pow(c, 0.5 * n) * ng.sqrt_det);

      Stencil s = gather(u, i, j);
      double du[2] = {(s[2][1] - s[0][1]) / (2 * h), (s[1][2] - s[1][0]) / (2 * h)};
      double d2[2][2];
      d2[0][0] = (s[2][1] - 2 * s[1][1] + s[0][1]) / (h * h);
      d2[1][1] = (s[1][2] - 2 * s[1][1] + s[1][0]) / (h * h);
      d2[0][1] = d2[1][0] = (s[2][2] - s[2][0] - s[0][2] + s[0][0]) / (4 * h * h);
      const auto& gi = ng.gi;
      double lap_hat = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          lap_hat += gi(a, b) * (d2[a][b] - ng.gam[0][a][b] * du[0] - ng.gam[1][a][b] * du[1]);
      double gr[2] = {gi(0, 0) * du[0] + gi(0, 1) * du[1], gi(1, 0) * du[0] + gi(1, 1) * du[1]};
      double ng2_hat = du[0] * gr[0] + du[1] * gr[1];
      double adv = gr[0] * cj.c1 + gr[1] * cj.c2;  // ĝ^{mr}∂ᵣc∂ₘu
      double lap_g = (lap_hat + (n - 2) / (2 * c) * adv) / c;
      double eta = std::sqrt(1.0 + ng2_hat / c);
      double Y = adv / c;  // (∇_gu)ʲ∂ⱼc
      double br = lap_g * (1 - 1 / c) - Y / (2 * c * c) + (n - 1) / (2 * c * c * c) * cj.cn * (1 + ng2_hat);
      out[k] = -div + br / (eta * eta * eta);
    }
  return out;
}

ScalarField divergence_form_weight(const ScalarField& u, const Metric& metric) {
  const Grid& g = u.grid();
  ScalarField ng2 = norm_grad_sq_hat(u, metric);
  ScalarField w(g);
  for (int j = 0; j < g.n(); ++j)
    for (int i = 0; i < g.n(); ++i) {
      int k = g.index(i, j);
      if (g.is_boundary(i, j)) {
        w[k] = 1.0;
        continue;
      }
      double c = checked_jet(metric, g.x(i), g.x(j), u[k]).c;
      double eta = std::sqrt(1.0 + ng2[k] / c);
      w[k] = 1.0 / (c * c * eta * eta * eta);
    }
  return w;
}

}  // namespace mselab
