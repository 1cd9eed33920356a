#pragma once

#include "mselab/grid.hpp"
#include "mselab/metric.hpp"

namespace mselab {

/// Discrete curl ∂₁α₂ − ∂₂α₁ of a covector field, with the stencils of fd::d1/d2.
ScalarField discrete_curl(const ScalarField& alpha1, const ScalarField& alpha2);

/// φ with dφ = α, integrated along x₁ on the bottom row and then along x₂
/// (cumulative trapezoid), shifted so that φ vanishes at node (i0, j0).
/// Throws NotClosed when max|curl α| > curl_tol.
ScalarField integrate_closed_form(const ScalarField& alpha1, const ScalarField& alpha2, int i0, int j0,
                                  double curl_tol = 1e-6);

/// φ with dφ = ĝ(X1 − X2, ·), normalized to vanish at the middle measurement node of Γ.
ScalarField poincare_potential(const VectorField& X1, const VectorField& X2, const Metric& metric,
                               const Gamma& gamma, double curl_tol = 1e-6);

/// Δ_ĝφ − ĝ(X1, ∇_ĝφ) + ½|∇_ĝφ|² at interior nodes, zero on the boundary.
ScalarField gauge_pde_residual(const ScalarField& phi, const VectorField& X1, const Metric& metric);

}  // namespace mselab
