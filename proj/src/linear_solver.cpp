#include "mselab/linear_solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <cmath>
#include <sstream>

#include "mselab/error.hpp"

namespace mselab {

struct LinearSolver::Impl {
  bool direct = true;
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  Eigen::BiCGSTAB<SparseMatrix, Eigen::DiagonalPreconditioner<double>> it;
  SparseMatrix A;
};

LinearSolver::LinearSolver(const SparseMatrix& A, int direct_limit, double iterative_tol)
    : impl_(std::make_unique<Impl>()), n_(static_cast<int>(A.rows())) {
  if (A.rows() != A.cols()) throw InvalidArgument("linear solver needs a square matrix");
  impl_->direct = A.rows() <= direct_limit;
  impl_->A = A;
  if (impl_->direct) {
    impl_->lu.analyzePattern(A);
    impl_->lu.factorize(A);
    if (impl_->lu.info() != Eigen::Success)
      throw SingularOperator("sparse LU failed: " + impl_->lu.lastErrorMessage());
    if (!std::isfinite(impl_->lu.logAbsDeterminant()))
      throw SingularOperator("sparse LU: zero pivot (determinant 0)");
  } else {
    impl_->it.setTolerance(iterative_tol);
    impl_->it.setMaxIterations(20 * n_);
    impl_->it.compute(impl_->A);
    if (impl_->it.info() != Eigen::Success) throw SingularOperator("BiCGSTAB setup failed");
  }
}

LinearSolver::~LinearSolver() = default;
LinearSolver::LinearSolver(LinearSolver&&) noexcept = default;
LinearSolver& LinearSolver::operator=(LinearSolver&&) noexcept = default;

bool LinearSolver::is_direct() const { return impl_->direct; }

Eigen::VectorXd LinearSolver::solve(const Eigen::VectorXd& b) const {
  if (b.size() != n_) throw GridMismatch("right-hand side size mismatch");
  if (impl_->direct) {
    Eigen::VectorXd x = impl_->lu.solve(b);
    if (impl_->lu.info() != Eigen::Success) throw SingularOperator("sparse LU solve failed");
    // One step of iterative refinement.
    Eigen::VectorXd r = b - impl_->A * x;
    x += impl_->lu.solve(r);
    return x;
  }
  Eigen::VectorXd x = impl_->it.solve(b);
  if (impl_->it.info() != Eigen::Success) {
    std::ostringstream os;
    os << "BiCGSTAB did not converge: error " << impl_->it.error() << " after "
       << impl_->it.iterations() << " iterations";
    throw SingularOperator(os.str());
  }
  return x;
}

}  // namespace mselab
