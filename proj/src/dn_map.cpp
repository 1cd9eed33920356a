#include "mselab/dn_map.hpp"

#include <optional>

#include "mselab/error.hpp"
#include "mselab/operators.hpp"
#include "mselab/parallel.hpp"

namespace mselab {

namespace {

Side side_of(const Grid& g, int i, int j) {
  const int m = g.n() - 1;
  if (i == 0) return Side::left;
  if (i == m) return Side::right;
  if (j == 0) return Side::bottom;
  return Side::top;
}

}  // namespace

BoundaryTrace neumann_trace(const ScalarField& u, const Metric& metric, const Gamma& gamma) {
  const Grid& g = u.grid();
  require_same_grid(g, gamma.grid(), "neumann_trace");
  BoundaryTrace tr;
  tr.nodes = gamma.measurement_nodes();
  tr.values.resize(static_cast<Eigen::Index>(tr.nodes.size()));
  for (const auto& arc : gamma.arcs()) {
    for (int t = arc.t0; t <= arc.t1; ++t) {
      auto [i, j] = side_node(g, arc.side, t);
      if (g.is_corner(i, j)) ++tr.corners_skipped;
    }
  }
  for (std::size_t q = 0; q < tr.nodes.size(); ++q) {
    int k = tr.nodes[q];
    int i = g.col(k), j = g.row(k);
    Eigen::Vector2d nu = side_normal(side_of(g, i, j));
    Eigen::Vector2d du(fd::d1(u, i, j), fd::d2(u, i, j));
    Eigen::Matrix2d gi = metric.ghat(g.x(i), g.x(j)).inverse();
    tr.values[static_cast<Eigen::Index>(q)] = (gi * du).dot(nu);
  }
  return tr;
}

DNRecord dn_map(const Metric& metric, const BoundaryData& f, const Gamma& gamma, const SolverOptions& opts) {
  require_same_grid(f.grid(), gamma.grid(), "dn_map");
  SolveResult s = solve_bvp(metric, f, opts);
  DNRecord rec{f, neumann_trace(s.u, metric, gamma), gamma.name(), s.iterations, s.residual, s.wall_seconds};
  return rec;
}

std::vector<DNRecord> dn_batch(const Metric& metric, const std::vector<BoundaryData>& family,
                               const Gamma& gamma, const SolverOptions& opts, int threads) {
  std::vector<std::optional<DNRecord>> tmp(family.size());
  parallel_for(static_cast<int>(family.size()), resolve_threads(threads), [&](int i) {
    try {
      tmp[i] = dn_map(metric, family[i], gamma, opts);
    } catch (const Error& e) {
      throw Error("dn_batch: datum " + std::to_string(i) + " failed: " + e.what());
    }
  });
  std::vector<DNRecord> out;
  out.reserve(family.size());
  for (auto& r : tmp) out.push_back(std::move(*r));
  return out;
}

}  // namespace mselab
