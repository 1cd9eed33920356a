#pragma once

#include <Eigen/Core>
#include <string>
#include <string_view>
#include <vector>

namespace mselab {

/// Uniform N×N node grid on the unit square, h = 1/(N−1).
/// Node (i, j) sits at (i·h, j·h); i runs along x1, linear index i + N·j.
class Grid {
public:
  explicit Grid(int n);

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] double h() const { return h_; }
  [[nodiscard]] int size() const { return n_ * n_; }
  [[nodiscard]] double x(int i) const { return i * h_; }
  [[nodiscard]] int index(int i, int j) const { return i + n_ * j; }
  [[nodiscard]] int col(int k) const { return k % n_; }
  [[nodiscard]] int row(int k) const { return k / n_; }

  [[nodiscard]] bool is_boundary(int i, int j) const {
    return i == 0 || j == 0 || i == n_ - 1 || j == n_ - 1;
  }
  [[nodiscard]] bool is_interior(int i, int j) const { return !is_boundary(i, j); }
  [[nodiscard]] bool is_corner(int i, int j) const {
    return (i == 0 || i == n_ - 1) && (j == 0 || j == n_ - 1);
  }
  /// Interior node with no corner among its 8 neighbours.
  [[nodiscard]] bool is_inner(int i, int j) const {
    return i >= 1 && j >= 1 && i <= n_ - 2 && j <= n_ - 2 &&
           !((i == 1 || i == n_ - 2) && (j == 1 || j == n_ - 2));
  }

  std::vector<int> boundary_nodes() const;
  std::vector<int> interior_nodes() const;

  friend bool operator==(const Grid& a, const Grid& b) { return a.n_ == b.n_; }
  friend bool operator!=(const Grid& a, const Grid& b) { return a.n_ != b.n_; }

private:
  int n_;
  double h_;
};

void require_same_grid(const Grid& a, const Grid& b, const char* what);

enum class Side { left = 0, right = 1, bottom = 2, top = 3 };

const char* side_name(Side s);

/// Outward Euclidean unit normal of a side.
Eigen::Vector2d side_normal(Side s);

/// Node (i, j) of position `t` (0..N−1) along a side, ordered by increasing
/// x1 on bottom/top and increasing x2 on left/right.
std::pair<int, int> side_node(const Grid& g, Side s, int t);

/// A portion Γ of the boundary: a union of index ranges on sides.
/// Accepted strings: all | left | right | bottom | top | arc:i0:i1:side.
class Gamma {
public:
  struct Arc {
    Side side;
    int t0;  // inclusive
    int t1;  // inclusive
  };

  static Gamma parse(std::string_view spec, const Grid& grid);
  static Gamma all(const Grid& grid);
  static Gamma side(const Grid& grid, Side s);

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] const std::vector<Arc>& arcs() const { return arcs_; }
  [[nodiscard]] bool is_full() const { return full_; }
  [[nodiscard]] const Grid& grid() const { return grid_; }

  /// Boundary node in Γ (corners included when covered).
  [[nodiscard]] bool contains(int i, int j) const;
  /// Nodes where Neumann data are measured: Γ nodes minus corners, in arc order.
  [[nodiscard]] const std::vector<int>& measurement_nodes() const { return measure_; }
  /// Nodes allowed to carry Dirichlet data. For a proper sub-arc this drops
  /// the two nodes nearest each end of the arc.
  [[nodiscard]] bool in_support(int i, int j) const;

  static constexpr int kBuffer = 2;

private:
  Gamma(const Grid& grid, std::string name, std::vector<Arc> arcs, bool full);

  Grid grid_;
  std::string name_;
  std::vector<Arc> arcs_;
  bool full_;
  std::vector<char> member_;
  std::vector<char> support_;
  std::vector<int> measure_;
};

class ScalarField {
public:
  explicit ScalarField(const Grid& grid) : grid_(grid), v_(Eigen::VectorXd::Zero(grid.size())) {}
  ScalarField(const Grid& grid, Eigen::VectorXd values);

  template <class F>
  static ScalarField sample(const Grid& grid, F&& f) {
    ScalarField s(grid);
    for (int j = 0; j < grid.n(); ++j)
      for (int i = 0; i < grid.n(); ++i) s(i, j) = f(grid.x(i), grid.x(j));
    return s;
  }

  [[nodiscard]] const Grid& grid() const { return grid_; }
  [[nodiscard]] const Eigen::VectorXd& values() const { return v_; }
  Eigen::VectorXd& values() { return v_; }

  double& operator()(int i, int j) { return v_[grid_.index(i, j)]; }
  double operator()(int i, int j) const { return v_[grid_.index(i, j)]; }
  double& operator[](int k) { return v_[k]; }
  double operator[](int k) const { return v_[k]; }

  [[nodiscard]] bool all_finite() const;
  [[nodiscard]] double max_abs() const { return v_.cwiseAbs().maxCoeff(); }
  /// Max |value| over interior nodes (optionally only corner-free ones).
  [[nodiscard]] double max_abs_interior(bool inner_only = false) const;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double a);
  friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
  friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
  friend ScalarField operator*(double a, ScalarField b) { return b *= a; }
  /// Pointwise product.
  friend ScalarField operator*(const ScalarField& a, const ScalarField& b);

private:
  Grid grid_;
  Eigen::VectorXd v_;
};

struct VectorField {
  ScalarField x1;
  ScalarField x2;
  explicit VectorField(const Grid& g) : x1(g), x2(g) {}
  VectorField(ScalarField a, ScalarField b) : x1(std::move(a)), x2(std::move(b)) {}
  [[nodiscard]] const Grid& grid() const { return x1.grid(); }
};

}  // namespace mselab
