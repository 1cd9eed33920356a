#pragma once

#include <Eigen/Sparse>
#include <memory>

namespace mselab {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using Triplet = Eigen::Triplet<double, int>;

/// Factor once, solve many. Sparse LU with one refinement step up to
/// `direct_limit` unknowns, BiCGSTAB with a diagonal preconditioner beyond.
class LinearSolver {
public:
  static constexpr int kDefaultDirectLimit = 257 * 257;

  explicit LinearSolver(const SparseMatrix& A, int direct_limit = kDefaultDirectLimit,
                        double iterative_tol = 1e-13);
  ~LinearSolver();
  LinearSolver(LinearSolver&&) noexcept;
  LinearSolver& operator=(LinearSolver&&) noexcept;

  [[nodiscard]] Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  [[nodiscard]] bool is_direct() const;
  [[nodiscard]] int size() const { return n_; }

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int n_;
};

}  // namespace mselab
