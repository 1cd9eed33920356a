#include "mselab/quadrature.hpp"

#include <Eigen/LU>
#include <cmath>
#include <unordered_map>

#include "mselab/error.hpp"

namespace mselab {

ScalarField trapezoid_weights(const Grid& grid) {
  ScalarField w(grid);
  const int m = grid.n() - 1;
  const double h = grid.h();
  for (int j = 0; j <= m; ++j)
    for (int i = 0; i <= m; ++i) {
      double wi = (i == 0 || i == m) ? 0.5 : 1.0;
      double wj = (j == 0 || j == m) ? 0.5 : 1.0;
      w(i, j) = wi * wj * h * h;
    }
  return w;
}

ScalarField volume_weights(const Metric& metric, const Grid& grid) {
  ScalarField w = trapezoid_weights(grid);
  for (int k = 0; k < grid.size(); ++k)
    w[k] *= std::sqrt(metric.ghat(grid.x(grid.col(k)), grid.x(grid.row(k))).determinant());
  return w;
}

double integrate(const ScalarField& f, const ScalarField& w) {
  require_same_grid(f.grid(), w.grid(), "integrate");
  return f.values().dot(w.values());
}

double integrate(const ScalarField& f, const Metric& metric) {
  return integrate(f, volume_weights(metric, f.grid()));
}

namespace {

double side_sum(const Grid& g, Side side, int t0, int t1, const std::unordered_map<int, double>& val,
                const ScalarField& a, const Metric& metric) {
  const int m = g.n() - 1;
  std::vector<double> y(static_cast<std::size_t>(m + 1), 0.0);
  for (int t = t0; t <= t1; ++t) {
    auto [i, j] = side_node(g, side, t);
    auto it = val.find(g.index(i, j));
    if (it == val.end()) continue;
    double sq = std::sqrt(metric.ghat(g.x(i), g.x(j)).determinant());
    y[t] = a(i, j) * it->second * sq;
  }
  if (t0 == 0) y[0] = 3 * y[1] - 3 * y[2] + y[3];
  if (t1 == m) y[m] = 3 * y[m - 1] - 3 * y[m - 2] + y[m - 3];
  double s = 0.0;
  for (int t = t0; t <= t1; ++t) s += ((t == t0 || t == t1) ? 0.5 : 1.0) * y[t];
  return s * g.h();
}

}  // namespace

double boundary_integral(const Gamma& gamma, const ScalarField& a, const BoundaryTrace& b, const Metric& metric) {
  const Grid& g = gamma.grid();
  require_same_grid(g, a.grid(), "boundary_integral");
  std::unordered_map<int, double> val;
  for (std::size_t q = 0; q < b.nodes.size(); ++q) val[b.nodes[q]] = b.values[static_cast<Eigen::Index>(q)];
  double s = 0.0;
  for (const auto& arc : gamma.arcs()) s += side_sum(g, arc.side, arc.t0, arc.t1, val, a, metric);
  return s;
}

double boundary_integral_outside(const Gamma& gamma, const ScalarField& a, const BoundaryTrace& full_b) {
  const Grid& g = gamma.grid();
  std::unordered_map<int, double> val;
  for (std::size_t q = 0; q < full_b.nodes.size(); ++q) {
    int k = full_b.nodes[q];
    if (!gamma.contains(g.col(k), g.row(k))) val[k] = full_b.values[static_cast<Eigen::Index>(q)];
  }
  double s = 0.0;
  for (Side sd : {Side::left, Side::right, Side::bottom, Side::top})
    for (int t = 1; t < g.n() - 1; ++t) {
      auto [i, j] = side_node(g, sd, t);
      auto it = val.find(g.index(i, j));
      if (it == val.end()) continue;
      s += std::abs(a(i, j) * it->second) * g.h();
    }
  return s;
}

}  // namespace mselab
