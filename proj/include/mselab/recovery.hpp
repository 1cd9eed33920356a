#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mselab/bspline.hpp"
#include "mselab/dn_map.hpp"
#include "mselab/linearization.hpp"
#include "mselab/metric.hpp"

namespace mselab {

/// ∫_Ω ((n−1)/2c̃(x′,0))∂ₓₙ³c̃(x′,0) v_k v_l v⁰ dV_ĝ by trapezoidal quadrature.
double integral_identity_eval(const Metric& metric, const Expr& ctilde, const ScalarField& v_k,
                              const ScalarField& v_l, const ScalarField& v0);

struct IdentityCheck {
  double volume = 0.0;    // ∫ s̃ v_k v_l v⁰ dV_ĝ
  double boundary = 0.0;  // ∮_Γ v⁰ ∂_ν(w − w̃) dS
  double residual = 0.0;  // |volume + boundary|
  double outside = 0.0;   // Σ|v⁰∂_ν(w − w̃)| over boundary nodes outside Γ
};

/// Discrete defect of ∫ s̃ v_k v_l v⁰ dV_ĝ = −∮ v⁰∂_ν(w − w̃) dS, where
/// dn_w and dn_wtilde are the second-order Neumann traces on Γ for g and c̃g.
/// `full_dn_delta`, when given, is ∂_ν(w − w̃) on the whole boundary and is
/// used to report the out-of-Γ terms.
IdentityCheck identity_residual_check(const Metric& metric, const Expr& ctilde, const ScalarField& v_k,
                                      const ScalarField& v_l, const ScalarField& v0, const Gamma& gamma,
                                      const BoundaryTrace& dn_w, const BoundaryTrace& dn_wtilde,
                                      const BoundaryTrace* full_dn_delta = nullptr);

/// The same check with w, w̃ from second_lin_solve and v_k, v_l from first_lin_solve.
IdentityCheck identity_residual_check_direct(const Metric& metric, const Expr& ctilde, const BoundaryData& f_k,
                                             const BoundaryData& f_l, const ScalarField& v0, const Gamma& gamma);

/// First-linearization boundary data standing in for a complete family.
/// Full boundary: the constant 1, then sin(pπs) on each side for p = 1..P.
/// Partial: sin(pπs) on the support of Γ for p = 1..P.
struct SolutionFamily {
  std::vector<BoundaryData> data;
  std::vector<ScalarField> v;
  std::string recipe;
};

std::vector<BoundaryData> family_data(const Gamma& gamma, int P, double amplitude = 1.0);
SolutionFamily make_family(const Metric& metric, const Gamma& gamma, int P, double amplitude = 1.0);

/// Index tuples into a family, increasing order, truncated to `count`.
std::vector<std::vector<int>> family_tuples(int family_size, int order, int count);
/// Tuples (k, l, unit) with k ≤ l, unit = index of the constant datum.
std::vector<std::vector<int>> unit_padded_tuples(int family_size, int unit, int count);

struct BasisOptions {
  int per_dim = 8;
  /// Keep only splines vanishing on ∂Ω (the coefficient vanishes there).
  bool boundary_zero = true;
  double tikhonov = 0.0;
  double gram_limit = 1e10;
};

struct CoefficientEstimate {
  ScalarField psi;  // estimate of ∂ₓₙᵏc̃(·,0)/c̃(·,0)
  Eigen::VectorXd theta;
  double residual_norm = 0.0;
  double gram_condition = 0.0;
  int rows = 0;
};

/// Least squares for ψ on the spline basis from the functionals
///   ((n−1)/2)∫ ψ·P_d·v⁰_e dV_ĝ = rhs(d, e),
/// one row per product P_d (v_kv_l or v₁v₂v₃) and adjoint solution v⁰_e.
/// Rows are scaled to unit norm. Throws IllPosed when the Gram matrix
/// condition number exceeds the limit.
CoefficientEstimate recover_taylor_coefficient(const Metric& metric, int order,
                                               const std::vector<ScalarField>& products,
                                               const std::vector<ScalarField>& v0s,
                                               const Eigen::MatrixXd& rhs, const BasisOptions& basis);

/// Inputs of the synthetic recovery experiment. The measured side uses the
/// metric c̃g with c̃ = `ctilde`; the recovery only sees its DN data.
struct RecoveryProblem {
  MetricSpec base;
  Expr ctilde;
  std::string gamma = "all";
  int grid = 65;
  int max_order = 3;
  int pairs = 24;
  int family_P = 4;
  int adjoint_count = 4;
  double amplitude = 1.0;
  /// Tuples (k, l, constant) at order 4 instead of general triples.
  bool unit_padded = false;
  FdOptions fd;
  BasisOptions basis;
  double lambda_hat = 1.0;
};

struct OrderDiagnostics {
  int order = 0;
  double residual_norm = 0.0;
  double gram_condition = 0.0;
  int tuples = 0;
  int rows = 0;
  double seconds = 0.0;
};

struct RecoveryResult {
  double lambda_hat = 1.0;
  std::map<int, ScalarField> coeff_fields;  // ∂ₓₙᵏc̃(·,0) estimates
  std::map<int, ScalarField> psi;           // ∂ₓₙᵏc̃/c̃ estimates
  std::vector<OrderDiagnostics> diagnostics;
};

RecoveryResult run_recovery(const RecoveryProblem& p);

/// ‖a − b‖₂ / ‖b‖₂ over interior nodes.
double relative_l2_interior(const ScalarField& a, const ScalarField& b);

}  // namespace mselab
