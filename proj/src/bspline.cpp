#include "mselab/bspline.hpp"

#include "mselab/error.hpp"

namespace mselab {

namespace {
constexpr int kDegree = 3;
}

BSpline1D::BSpline1D(int count) : count_(count) {
  if (count < kDegree + 1) throw InvalidArgument("need at least 4 cubic B-splines per dimension");
  const int inner = count - kDegree;  // number of knot intervals
  for (int i = 0; i < kDegree; ++i) knots_.push_back(0.0);
  for (int i = 0; i <= inner; ++i) knots_.push_back(static_cast<double>(i) / inner);
  for (int i = 0; i < kDegree; ++i) knots_.push_back(1.0);
}

double BSpline1D::eval(int b, double x, int deriv) const {
  // De Boor recursion on the support of basis b only.
  const auto& t = knots_;
  auto basis = [&](auto&& self, int i, int p, double xx) -> double {
    if (p == 0) {
      bool last = (t[i + 1] == 1.0 && xx == 1.0 && t[i] < 1.0);
      return ((t[i] <= xx && xx < t[i + 1]) || last) ? 1.0 : 0.0;
    }
    double a = 0.0, c = 0.0;
    if (t[i + p] > t[i]) a = (xx - t[i]) / (t[i + p] - t[i]) * self(self, i, p - 1, xx);
    if (t[i + p + 1] > t[i + 1]) c = (t[i + p + 1] - xx) / (t[i + p + 1] - t[i + 1]) * self(self, i + 1, p - 1, xx);
    return a + c;
  };
  if (deriv == 0) return basis(basis, b, kDegree, x);
  const int p = kDegree;
  double d = 0.0;
  if (t[b + p] > t[b]) d += p / (t[b + p] - t[b]) * basis(basis, b, p - 1, x);
  if (t[b + p + 1] > t[b + 1]) d -= p / (t[b + p + 1] - t[b + 1]) * basis(basis, b + 1, p - 1, x);
  return d;
}

TensorBasis::TensorBasis(int per_dim, bool interior_only) : spline_(per_dim) {
  int lo = interior_only ? 1 : 0;
  int hi = interior_only ? per_dim - 1 : per_dim;
  for (int q = lo; q < hi; ++q)
    for (int p = lo; p < hi; ++p) idx_.emplace_back(p, q);
}

Eigen::MatrixXd TensorBasis::sample_impl(const Grid& grid, int d1, int d2) const {
  const int n = grid.n(), nb = spline_.count();
  Eigen::MatrixXd b1(n, nb), b2(n, nb);
  for (int i = 0; i < n; ++i)
    for (int b = 0; b < nb; ++b) {
      b1(i, b) = spline_.eval(b, grid.x(i), d1);
      b2(i, b) = spline_.eval(b, grid.x(i), d2);
    }
  Eigen::MatrixXd out(grid.size(), size());
  for (int c = 0; c < size(); ++c) {
    auto [p, q] = idx_[c];
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) out(grid.index(i, j), c) = b1(i, p) * b2(j, q);
  }
  return out;
}

Eigen::MatrixXd TensorBasis::sample(const Grid& grid) const { return sample_impl(grid, 0, 0); }
Eigen::MatrixXd TensorBasis::sample_d1(const Grid& grid) const { return sample_impl(grid, 1, 0); }
Eigen::MatrixXd TensorBasis::sample_d2(const Grid& grid) const { return sample_impl(grid, 0, 1); }

ScalarField TensorBasis::field(const Grid& grid, const Eigen::VectorXd& theta) const {
  if (theta.size() != size()) throw InvalidArgument("coefficient vector size does not match the basis");
  return ScalarField(grid, sample(grid) * theta);
}

}  // namespace mselab
