#pragma once

#include <array>
#include <optional>

#include "mselab/grid.hpp"
#include "mselab/metric.hpp"

namespace mselab {

/// 3×3 neighbourhood s[a][b] = u(i+a−1, j+b−1).
using Stencil = std::array<std::array<double, 3>, 3>;

Stencil gather(const ScalarField& u, int i, int j);

/// Minimal surface residual
///   F = (−Δ_ĝu + ((1−n)/2c)ĝ^{mr}∂ᵣc∂ₘu + ((n−1)/2c)∂ₓₙc)(1+|∇_ĝu|²) + ∇²_ĝu(∇_ĝu,∇_ĝu)
/// with c and its partials taken at (x′, u(x′)). Compact centered stencils;
/// the Newton solver differentiates `local` stencil by stencil.
class MseResidual {
public:
  MseResidual(const Metric& metric, const Grid& grid);

  [[nodiscard]] const Metric& metric() const { return metric_; }
  [[nodiscard]] const Grid& grid() const { return geo_.grid(); }
  [[nodiscard]] const GeometryCache& geometry() const { return geo_; }

  /// c-jet at node k for height t; throws DomainEscape when c ≤ 0.
  [[nodiscard]] CJet jet(int k, double t) const;
  [[nodiscard]] double local(int k, const Stencil& s, const CJet& cj) const;
  [[nodiscard]] double local(int k, const Stencil& s) const { return local(k, s, jet(k, s[1][1])); }

  /// Residual at interior nodes, zero on the boundary.
  [[nodiscard]] ScalarField eval(const ScalarField& u) const;

private:
  Metric metric_;
  GeometryCache geo_;
};

ScalarField residual_F(const ScalarField& u, const Metric& metric);

/// F of a closed-form u with exact derivatives, at interior nodes (the
/// manufactured source for u).
ScalarField residual_F_exact(const Expr& u, const Metric& metric, const Grid& grid);

enum class HessianStencil {
  /// Fourth-order centered first and second differences (5-point), compact
  /// on the first ring of interior nodes.
  fourth_order,
  /// ∂ᵢ(∂ⱼu) from the centered gradient field (2h wide), compact on the first ring.
  gradient_of_gradient,
  /// The compact stencils used by residual_F.
  compact,
};

/// c²(|∇_g f|²Δ_g f − ∇²_g f(∇_g f, ∇_g f)) for f = xₙ − u(x′), built from the
/// full n-dimensional Christoffel symbols of g at (x′, u(x′)).
ScalarField residual_mean_curvature(const ScalarField& u, const Metric& metric,
                                    HessianStencil hs = HessianStencil::fourth_order);

/// −div_g(∇_gu/η) + [Δ_gu(1−c⁻¹) − (∇_gu)ʲ∂ⱼc/(2c²) + ((n−1)/2c³)∂ₓₙc(1+|∇_ĝu|²_ĝ)]/η³,
/// η = (1+|∇_gu|²_g)^{1/2}. Equals c⁻²η⁻³F. The divergence is a face-flux
/// difference of |g|^{1/2}(∇_gu)ⁱ/η with the metric frozen at xₙ = u of the
/// centre node.
ScalarField residual_divergence_form(const ScalarField& u, const Metric& metric);

/// c⁻²η⁻³ at every node (1 on the boundary), for comparing against the divergence form.
ScalarField divergence_form_weight(const ScalarField& u, const Metric& metric);

}  // namespace mselab
