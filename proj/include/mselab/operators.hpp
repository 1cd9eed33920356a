#pragma once

#include "mselab/grid.hpp"
#include "mselab/metric.hpp"

namespace mselab {

/// Finite-difference stencils on the full grid: centered in the interior,
/// three-point one-sided (first derivative) or four-point one-sided (second
/// derivative) on the boundary. The mixed derivative is D1∘D2.
namespace fd {

double d1(const ScalarField& u, int i, int j);
double d2(const ScalarField& u, int i, int j);
double d11(const ScalarField& u, int i, int j);
double d22(const ScalarField& u, int i, int j);
double d12(const ScalarField& u, int i, int j);

}  // namespace fd

struct HessianField {
  ScalarField h11;
  ScalarField h12;
  ScalarField h22;
  explicit HessianField(const Grid& g) : h11(g), h12(g), h22(g) {}
};

/// Euclidean partial derivatives (∂₁u, ∂₂u).
VectorField partials(const ScalarField& u);

/// (∇_ĝu)ⁱ = ĝ^{ij}∂ⱼu.
VectorField grad_hat(const ScalarField& u, const Metric& metric);
VectorField grad_hat(const ScalarField& u, const GeometryCache& geo);

/// ∂²ᵢⱼu − Γ̂ᵐᵢⱼ∂ₘu.
HessianField hess_hat(const ScalarField& u, const Metric& metric);
HessianField hess_hat(const ScalarField& u, const GeometryCache& geo);

/// ĝ^{ij}(∇²_ĝu)ᵢⱼ.
ScalarField laplace_beltrami_hat(const ScalarField& u, const Metric& metric);
ScalarField laplace_beltrami_hat(const ScalarField& u, const GeometryCache& geo);

/// ĝ^{ij}∂ᵢu∂ⱼu.
ScalarField norm_grad_sq_hat(const ScalarField& u, const Metric& metric);
ScalarField norm_grad_sq_hat(const ScalarField& u, const GeometryCache& geo);

/// div_ĝ X = |ĝ|^{-1/2}∂ⱼ(|ĝ|^{1/2}Xʲ) with the stencils above.
ScalarField divergence_hat(const VectorField& X, const GeometryCache& geo);

}  // namespace mselab
