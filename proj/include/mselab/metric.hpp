#pragma once

#include <Eigen/Core>
#include <Eigen/LU>
#include <array>
#include <map>
#include <string>
#include <vector>

#include "mselab/expr.hpp"
#include "mselab/grid.hpp"

namespace mselab {

/// Closed-form description of g = c(x′,xₙ)(ĝ(x′) ⊕ 1).
///
/// c is stored whole; `from_taylor` builds it as c₀(x′) + Σ_{k≥3} xₙᵏc_k(x′)/k!,
/// which makes the ∂ₓₙc = ∂ₓₙ²c = 0 condition at xₙ = 0 hold by construction.
struct MetricSpec {
  std::string name = "custom";
  Expr g11 = Expr(1.0);
  Expr g12 = Expr(0.0);
  Expr g22 = Expr(1.0);
  Expr c = Expr(1.0);
  int n = 3;
  int k_max = 6;
  /// When false, ĝ derivatives come from central differences with step 1e−5.
  bool analytic_derivatives = true;

  static MetricSpec from_taylor(std::string name, Expr g11, Expr g12, Expr g22, Expr c0,
                                const std::map<int, Expr>& ck);
  /// euclidean | conformal_exp | diag_poly
  static MetricSpec preset(const std::string& name);
  static std::vector<std::string> preset_names();

  /// c ↦ μc.
  [[nodiscard]] MetricSpec scaled(double mu) const;
  /// c ↦ c·c̃ (the metric c̃g).
  [[nodiscard]] MetricSpec conformal_product(const Expr& ctilde) const;
};

/// Conformal-factor profile c̃ = λ + Σ_{k≥3} xₙᵏφ_k(x′)/k!.
Expr taylor_profile(double lambda, const std::map<int, Expr>& phi);
Expr taylor_profile(const Expr& c0, const std::map<int, Expr>& phi);

/// c and its first partials at (x′, t).
struct CJet {
  double c;
  double c1;
  double c2;
  double cn;
};

/// Surface quantities at xₙ = 0.
struct SurfaceJet {
  double c;
  double c1, c2;
  double c11, c12, c22;
};

class Metric {
public:
  explicit Metric(MetricSpec spec);

  [[nodiscard]] const MetricSpec& spec() const { return spec_; }
  [[nodiscard]] int n() const { return spec_.n; }

  [[nodiscard]] Eigen::Matrix2d ghat(double x1, double x2) const;
  /// ∂ₖĝ for k = 0 (x1), 1 (x2).
  [[nodiscard]] std::array<Eigen::Matrix2d, 2> dghat(double x1, double x2) const;

  [[nodiscard]] double c(double x1, double x2, double t) const { return c_.eval(x1, x2, t); }
  [[nodiscard]] CJet c_jet(double x1, double x2, double t) const;
  [[nodiscard]] SurfaceJet surface(double x1, double x2) const;
  /// ∂ₓₙᵏc(x′, 0), 0 ≤ k ≤ k_max.
  [[nodiscard]] double c_dn(int k, double x1, double x2) const;

  /// SPD ĝ, c > 0 and the vanishing of ∂ₓₙc, ∂ₓₙ²c at xₙ = 0 on every node.
  void validate(const Grid& grid) const;

private:
  MetricSpec spec_;
  std::array<Expr, 3> g_;
  std::array<std::array<Expr, 3>, 2> dg_;
  Expr c_, c1_, c2_, cn_;
  Expr s_, s1_, s2_, s11_, s12_, s22_;
  std::vector<Expr> dn0_;
};

/// Γ̂ᵐᵢⱼ per node, stored as gamma[node][m][i][j] with indices in {0,1}.
struct ChristoffelData {
  Grid grid;
  std::vector<std::array<std::array<std::array<double, 2>, 2>, 2>> gamma;
  [[nodiscard]] double operator()(int m, int i, int j, int node) const { return gamma[node][m][i][j]; }
};

/// Pointwise Christoffel symbols of ĝ: 2Γ̂ᵐᵢⱼ = ĝ^{mr}(∂ⱼĝᵢᵣ + ∂ᵢĝⱼᵣ − ∂ᵣĝᵢⱼ).
std::array<std::array<std::array<double, 2>, 2>, 2> christoffel_at(const Metric& m, double x1,
                                                                    double x2);

ChristoffelData christoffel_hat(const Metric& metric, const Grid& grid);

/// Everything about ĝ that the discrete operators need at a node.
struct NodeGeom {
  double x1, x2;
  Eigen::Matrix2d g;
  Eigen::Matrix2d gi;
  double sqrt_det;
  std::array<std::array<std::array<double, 2>, 2>, 2> gam;
};

class GeometryCache {
public:
  GeometryCache(const Metric& metric, const Grid& grid);
  [[nodiscard]] const NodeGeom& operator[](int k) const { return nodes_[k]; }
  [[nodiscard]] const Grid& grid() const { return grid_; }

private:
  Grid grid_;
  std::vector<NodeGeom> nodes_;
};

}  // namespace mselab
