#pragma once

#include <array>
#include <optional>
#include <vector>

#include "mselab/dn_map.hpp"
#include "mselab/grid.hpp"
#include "mselab/linear_solver.hpp"
#include "mselab/metric.hpp"
#include "mselab/solver.hpp"

namespace mselab {

/// Coefficients of the first linearization at u = 0:
///   Xh = ((1−n)/2c(x′,0))ĝ^{ij}∂ᵢc(x′,0)∂ⱼh, zeroth = ((n−1)/2c(x′,0))∂ₓₙ²c(x′,0),
/// plus the source weights s₂ = ((n−1)/2c)∂ₓₙ³c, s₃ = ((n−1)/2c)∂ₓₙ⁴c at xₙ = 0.
struct AdvectionOperatorSpec {
  VectorField X;
  ScalarField zeroth;
  ScalarField s2;
  ScalarField s3;
};

AdvectionOperatorSpec advection_spec(const Metric& metric, const Grid& grid);

/// L = −Δ_ĝ + X + zeroth on interior rows, identity on boundary rows,
/// with the compact stencils of residual_F so that L is exactly the
/// derivative of the discrete residual at u = 0. Factored once.
class AdvectionDiffusion {
public:
  AdvectionDiffusion(const Metric& metric, const Grid& grid);
  /// Same second-order part (ĝ from `metric`), caller-supplied coefficients.
  AdvectionDiffusion(const Metric& metric, const Grid& grid, AdvectionOperatorSpec spec);

  [[nodiscard]] const AdvectionOperatorSpec& spec() const { return spec_; }
  [[nodiscard]] const Grid& grid() const { return grid_; }
  [[nodiscard]] const SparseMatrix& matrix() const { return A_; }

  /// Solve L w = rhs in Ω, w = boundary on ∂Ω (interior entries of
  /// `boundary` and boundary entries of `rhs` are ignored).
  [[nodiscard]] ScalarField solve(const ScalarField& boundary, const ScalarField* rhs = nullptr) const;
  /// L v at interior nodes, zero on the boundary.
  [[nodiscard]] ScalarField apply(const ScalarField& v) const;

private:
  Grid grid_;
  AdvectionOperatorSpec spec_;
  SparseMatrix A_;
  LinearSolver solver_;
};

ScalarField first_lin_solve(const Metric& metric, const BoundaryData& f);

/// −Δ_ĝw + Xw + s₂v_kv_l = 0, w|∂Ω = 0. With `ctilde` the metric is c̃g,
/// which adds ((1−n)/2)ĝ⁻¹∇c̃/c̃ to X and (n−1)∂ₓₙ³c̃/(2c̃) to s₂.
ScalarField second_lin_solve(const Metric& metric, const std::optional<Expr>& ctilde,
                             const ScalarField& v_k, const ScalarField& v_l);
ScalarField second_lin_solve(const AdvectionDiffusion& op, const ScalarField& v_k, const ScalarField& v_l);
/// Same operator, source weight s₂ supplied by the caller.
ScalarField second_lin_solve(const AdvectionDiffusion& op, const ScalarField& v_k, const ScalarField& v_l,
                             const ScalarField& s2);

/// Third linearization ∂³u/∂ε₁∂ε₂∂ε₃ at 0:
///   −Δ_ĝU + XU + s₂(v₁w₂₃ + v₂w₁₃ + v₃w₁₂) + s₃v₁v₂v₃
///     + 2[∇²v₁(∇v₂,∇v₃) + ∇²v₂(∇v₁,∇v₃) + ∇²v₃(∇v₁,∇v₂)] = 0,  U|∂Ω = 0.
ScalarField third_lin_solve(const AdvectionDiffusion& op, const Metric& metric,
                            const std::array<const ScalarField*, 3>& v,
                            const ScalarField& w12, const ScalarField& w13, const ScalarField& w23);
ScalarField third_lin_solve(const AdvectionDiffusion& op, const Metric& metric,
                            const std::array<const ScalarField*, 3>& v,
                            const ScalarField& w12, const ScalarField& w13, const ScalarField& w23,
                            const ScalarField& s2, const ScalarField& s3);

struct FdOptions {
  double eps = 1e-2;
  bool richardson = false;
  SolverOptions solver;
  int threads = 0;
};

/// Tensor-product central difference of ε ↦ u(Σ εₖfₖ) at ε = 0 for the
/// mixed derivative ∂^N/∂ε₁…∂ε_N, N ≤ 4. With Richardson, combines steps
/// ε and ε/2.
ScalarField higher_lin_fd(const Metric& metric, const std::vector<BoundaryData>& f, const FdOptions& o);

/// (u(εf) − u(0))/ε.
ScalarField first_lin_fd_onesided(const Metric& metric, const BoundaryData& f, const FdOptions& o);

/// Adjoint operator Δ_ĝv + Xv + qv with q = div_ĝX = ((1−n)/2)Δ_ĝ log c(·,0).
ScalarField adjoint_potential(const Metric& metric, const Grid& grid);

class AdjointOperator {
public:
  AdjointOperator(const Metric& metric, const Grid& grid);
  [[nodiscard]] ScalarField solve(const ScalarField& boundary) const;
  [[nodiscard]] ScalarField apply(const ScalarField& v) const;
  [[nodiscard]] const ScalarField& q() const { return q_; }

private:
  Grid grid_;
  ScalarField q_;
  SparseMatrix A_;
  LinearSolver solver_;
};

struct AdjointResult {
  ScalarField v0;
  ScalarField trace;
  int attempt = 0;
};

/// Boundary traces tried in order by adjoint_special_solution. Full data:
/// 1, then 1 + ½cos(kπx₁)cos(lπx₂). Partial data: smooth nonnegative bumps on
/// the support nodes of Γ.
std::vector<ScalarField> adjoint_candidate_traces(const Gamma& gamma, int count = 9);

/// v⁰ with |v⁰(x₀)| ≥ 1e−3‖v⁰‖∞, trying up to 9 traces.
AdjointResult adjoint_special_solution(const Metric& metric, const Gamma& gamma, int i0, int j0);

struct MagneticCoeffs {
  /// A = iX/2 stored as the real field X/2.
  VectorField A;
  bool imaginary = true;
  ScalarField q;
};

/// A = iX/2, q = ¼ĝ(X,X) − ½div_ĝX.
MagneticCoeffs advection_to_magnetic(const VectorField& X, const Metric& metric);

/// −|ĝ|^{-1/2}(∂ⱼ + iAⱼ)(|ĝ|^{1/2}ĝ^{jk}(∂ₖ + iAₖ)u) + qu at interior nodes,
/// the outer divergence taken over cell-face fluxes (real arithmetic since
/// iA = −X♭/2). Zero on the boundary.
ScalarField magnetic_apply(const MagneticCoeffs& mc, const Metric& metric, const ScalarField& u);

/// −Δ_ĝu + Xu with the same stencils.
ScalarField advection_apply(const VectorField& X, const Metric& metric, const ScalarField& u);

}  // namespace mselab
