#pragma once

#include <string>
#include <vector>

#include "mselab/grid.hpp"
#include "mselab/metric.hpp"
#include "mselab/solver.hpp"

namespace mselab {

/// Values on the measurement nodes of Γ (corners excluded), in Γ order.
struct BoundaryTrace {
  std::vector<int> nodes;
  Eigen::VectorXd values;
  int corners_skipped = 0;

  [[nodiscard]] double max_abs() const { return values.size() ? values.cwiseAbs().maxCoeff() : 0.0; }
};

/// ∂_νu = ĝ^{ij}∂ᵢu νⱼ with ν the outward Euclidean normal of each side;
/// the normal derivative is one-sided, the tangential one centered.
BoundaryTrace neumann_trace(const ScalarField& u, const Metric& metric, const Gamma& gamma);

struct DNRecord {
  BoundaryData f;
  BoundaryTrace neumann;
  std::string gamma;
  int iterations = 0;
  double residual = 0.0;
  double wall_seconds = 0.0;
};

DNRecord dn_map(const Metric& metric, const BoundaryData& f, const Gamma& gamma,
                const SolverOptions& opts = {});

/// Element-wise dn_map; output order matches input order. A failure is
/// rethrown naming the index of the datum.
std::vector<DNRecord> dn_batch(const Metric& metric, const std::vector<BoundaryData>& family,
                               const Gamma& gamma, const SolverOptions& opts = {}, int threads = 0);

}  // namespace mselab
