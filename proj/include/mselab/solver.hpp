#pragma once

#include <optional>
#include <vector>

#include "mselab/expr.hpp"
#include "mselab/grid.hpp"
#include "mselab/metric.hpp"

namespace mselab {

/// Dirichlet data on the boundary nodes, zero outside the support Γ.
class BoundaryData {
public:
  /// Zero data on the full boundary.
  explicit BoundaryData(const Grid& grid);
  BoundaryData(const Gamma& support, ScalarField values);

  /// Sample a closed form on the support nodes of Γ.
  static BoundaryData from_expr(const Gamma& support, const Expr& f);
  template <class F>
  static BoundaryData from_function(const Gamma& support, F&& f) {
    const Grid& g = support.grid();
    ScalarField v(g);
    for (int k : g.boundary_nodes()) {
      int i = g.col(k), j = g.row(k);
      if (support.in_support(i, j)) v[k] = f(g.x(i), g.x(j));
    }
    return BoundaryData(support, std::move(v));
  }

  [[nodiscard]] const Grid& grid() const { return values_.grid(); }
  [[nodiscard]] const Gamma& support() const { return support_; }
  /// Full-grid field, zero at interior nodes.
  [[nodiscard]] const ScalarField& values() const { return values_; }
  /// Sup-norm over the boundary, the stand-in for the Hölder norm.
  [[nodiscard]] double smallness() const;

  [[nodiscard]] BoundaryData scaled(double a) const;
  friend BoundaryData operator+(const BoundaryData& a, const BoundaryData& b);

private:
  Gamma support_;
  ScalarField values_;
};

struct SolverOptions {
  double newton_tol = 1e-10;
  int max_newton_iters = 30;
  double damping = 0.5;
  int max_halvings = 20;
  double fd_perturbation = 1e-7;
  double delta_cap = 0.1;
  int direct_limit = 257 * 257;
  /// Solve F(u) = source instead of F(u) = 0.
  std::optional<ScalarField> source;
  std::optional<ScalarField> initial_guess;
};

struct SolveResult {
  ScalarField u;
  int iterations = 0;
  double residual = 0.0;
  /// Sup-norm of the full residual before each Newton step, then the final one.
  std::vector<double> history;
  double wall_seconds = 0.0;
};

/// Damped Newton for the discrete Dirichlet problem F(u) = 0, u = f on ∂Ω.
SolveResult solve_bvp(const Metric& metric, const BoundaryData& f, const SolverOptions& opts = {});

/// Residual-norm ratios rₖ₊₁/rₖ and whether some step shows the quadratic
/// phase (ratio ≤ 0.1 × the previous ratio).
struct NewtonPhase {
  std::vector<double> ratios;
  bool quadratic = false;
};
NewtonPhase newton_phase(const std::vector<double>& history);

}  // namespace mselab
