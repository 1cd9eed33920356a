#pragma once

#include <Eigen/Core>
#include <vector>

#include "mselab/grid.hpp"

namespace mselab {

/// Clamped cubic B-splines on [0,1] with uniformly spaced interior knots.
class BSpline1D {
public:
  explicit BSpline1D(int count);
  [[nodiscard]] int count() const { return count_; }
  /// Value (deriv = 0) or first derivative (deriv = 1) of basis function b at x.
  [[nodiscard]] double eval(int b, double x, int deriv = 0) const;

private:
  int count_;
  std::vector<double> knots_;
};

/// Tensor-product basis B_{pq}(x₁,x₂) = B_p(x₁)B_q(x₂). With `interior_only`
/// the functions that are nonzero on ∂Ω are dropped, so every element of the
/// span vanishes on the boundary.
class TensorBasis {
public:
  TensorBasis(int per_dim, bool interior_only);

  [[nodiscard]] int size() const { return static_cast<int>(idx_.size()); }
  [[nodiscard]] int per_dim() const { return spline_.count(); }

  /// Values of every basis function at every grid node: (nodes × size).
  [[nodiscard]] Eigen::MatrixXd sample(const Grid& grid) const;
  /// ∂/∂x₁ and ∂/∂x₂ samples.
  [[nodiscard]] Eigen::MatrixXd sample_d1(const Grid& grid) const;
  [[nodiscard]] Eigen::MatrixXd sample_d2(const Grid& grid) const;
  /// Σ θ_b B_b on the grid.
  [[nodiscard]] ScalarField field(const Grid& grid, const Eigen::VectorXd& theta) const;

private:
  Eigen::MatrixXd sample_impl(const Grid& grid, int d1, int d2) const;
  BSpline1D spline_;
  std::vector<std::pair<int, int>> idx_;
};

}  // namespace mselab
