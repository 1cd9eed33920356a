#include "mselab/grid.hpp"

#include <cmath>
#include <sstream>

#include "mselab/error.hpp"

namespace mselab {

Grid::Grid(int n) : n_(n), h_(0.0) {
  if (n < 5) throw InvalidArgument("grid needs at least 5 nodes per side, got " + std::to_string(n));
  h_ = 1.0 / (n - 1);
}

std::vector<int> Grid::boundary_nodes() const {
  std::vector<int> out;
  for (int j = 0; j < n_; ++j)
    for (int i = 0; i < n_; ++i)
      if (is_boundary(i, j)) out.push_back(index(i, j));
  return out;
}

std::vector<int> Grid::interior_nodes() const {
  std::vector<int> out;
  for (int j = 1; j < n_ - 1; ++j)
    for (int i = 1; i < n_ - 1; ++i) out.push_back(index(i, j));
  return out;
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (a != b)
    throw GridMismatch(std::string(what) + ": grids differ (" + std::to_string(a.n()) + " vs " +
                       std::to_string(b.n()) + ")");
}

const char* side_name(Side s) {
  switch (s) {
    case Side::left: return "left";
    case Side::right: return "right";
    case Side::bottom: return "bottom";
    case Side::top: return "top";
  }
  return "?";
}

Eigen::Vector2d side_normal(Side s) {
  switch (s) {
    case Side::left: return {-1.0, 0.0};
    case Side::right: return {1.0, 0.0};
    case Side::bottom: return {0.0, -1.0};
    case Side::top: return {0.0, 1.0};
  }
  return {0.0, 0.0};
}

std::pair<int, int> side_node(const Grid& g, Side s, int t) {
  const int m = g.n() - 1;
  switch (s) {
    case Side::left: return {0, t};
    case Side::right: return {m, t};
    case Side::bottom: return {t, 0};
    case Side::top: return {t, m};
  }
  return {0, 0};
}

namespace {

Side parse_side(const std::string& s) {
  if (s == "left") return Side::left;
  if (s == "right") return Side::right;
  if (s == "bottom") return Side::bottom;
  if (s == "top") return Side::top;
  throw InvalidArgument("unknown side '" + s + "'");
}

}  // namespace

Gamma::Gamma(const Grid& grid, std::string name, std::vector<Arc> arcs, bool full)
    : grid_(grid), name_(std::move(name)), arcs_(std::move(arcs)), full_(full),
      member_(grid.size(), 0), support_(grid.size(), 0) {
  const int m = grid.n() - 1;
  for (const Arc& a : arcs_) {
    if (a.t0 < 0 || a.t1 > m || a.t0 > a.t1)
      throw InvalidArgument("gamma arc out of range: " + std::to_string(a.t0) + ":" +
                            std::to_string(a.t1));
    for (int t = a.t0; t <= a.t1; ++t) {
      auto [i, j] = side_node(grid, a.side, t);
      int k = grid.index(i, j);
      if (!member_[k] && !grid.is_corner(i, j)) measure_.push_back(k);
      member_[k] = 1;
      if (full_) {
        support_[k] = 1;
      } else {
        int lo = a.t0 + kBuffer;
        int hi = a.t1 - kBuffer;
        if (t >= lo && t <= hi && !grid.is_corner(i, j)) support_[k] = 1;
      }
    }
  }
}

Gamma Gamma::all(const Grid& grid) {
  const int m = grid.n() - 1;
  return Gamma(grid, "all",
               {{Side::bottom, 0, m}, {Side::right, 0, m}, {Side::top, 0, m}, {Side::left, 0, m}},
               true);
}

Gamma Gamma::side(const Grid& grid, Side s) {
  return Gamma(grid, side_name(s), {{s, 0, grid.n() - 1}}, false);
}

Gamma Gamma::parse(std::string_view spec, const Grid& grid) {
  std::string s(spec);
  if (s == "all") return all(grid);
  if (s == "left" || s == "right" || s == "bottom" || s == "top") return side(grid, parse_side(s));
  if (s.rfind("arc:", 0) == 0) {
    std::stringstream ss(s.substr(4));
    std::string a, b, c;
    if (std::getline(ss, a, ':') && std::getline(ss, b, ':') && std::getline(ss, c)) {
      int i0 = 0, i1 = 0;
      try {
        i0 = std::stoi(a);
        i1 = std::stoi(b);
      } catch (const std::exception&) {
        throw InvalidArgument("bad gamma spec '" + s + "'");
      }
      return Gamma(grid, s, {{parse_side(c), i0, i1}}, false);
    }
  }
  throw InvalidArgument("bad gamma spec '" + s + "' (expected all|left|right|bottom|top|arc:i0:i1:side)");
}

bool Gamma::contains(int i, int j) const { return member_[grid_.index(i, j)] != 0; }

bool Gamma::in_support(int i, int j) const { return support_[grid_.index(i, j)] != 0; }

ScalarField::ScalarField(const Grid& grid, Eigen::VectorXd values) : grid_(grid), v_(std::move(values)) {
  if (v_.size() != grid.size())
    throw GridMismatch("field has " + std::to_string(v_.size()) + " values for a grid of " +
                       std::to_string(grid.size()));
}

bool ScalarField::all_finite() const { return v_.allFinite(); }

double ScalarField::max_abs_interior(bool inner_only) const {
  double m = 0.0;
  for (int j = 1; j < grid_.n() - 1; ++j)
    for (int i = 1; i < grid_.n() - 1; ++i) {
      if (inner_only && !grid_.is_inner(i, j)) continue;
      m = std::max(m, std::abs((*this)(i, j)));
    }
  return m;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_, "field add");
  v_ += o.v_;
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_, "field subtract");
  v_ -= o.v_;
  return *this;
}

ScalarField& ScalarField::operator*=(double a) {
  v_ *= a;
  return *this;
}

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "field product");
  return ScalarField(a.grid(), a.values().cwiseProduct(b.values()));
}

}  // namespace mselab
