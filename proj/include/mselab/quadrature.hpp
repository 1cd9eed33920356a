#pragma once

#include "mselab/dn_map.hpp"
#include "mselab/grid.hpp"
#include "mselab/metric.hpp"

namespace mselab {

/// Tensor trapezoidal weights (h² inside, halved on edges, quartered at corners).
ScalarField trapezoid_weights(const Grid& grid);

/// ∫_Ω f dV_ĝ with dV_ĝ = |ĝ|^{1/2}dx.
double integrate(const ScalarField& f, const Metric& metric);
double integrate(const ScalarField& f, const ScalarField& weights_with_volume);

/// Trapezoidal weights times |ĝ|^{1/2}.
ScalarField volume_weights(const Metric& metric, const Grid& grid);

/// ∮_Γ a·b·|ĝ|^{1/2} ds_E, where `b` is a trace on the measurement nodes of
/// Γ and `a` a full-grid field. Corner values are extrapolated quadratically
/// from the three nearest nodes of the same side.
double boundary_integral(const Gamma& gamma, const ScalarField& a, const BoundaryTrace& b,
                         const Metric& metric);

/// Σ |a·b|·h over non-corner boundary nodes outside Γ, for a trace defined
/// on the full boundary. Zero when the boundary terms outside Γ vanish.
double boundary_integral_outside(const Gamma& gamma, const ScalarField& a, const BoundaryTrace& full_b);

}  // namespace mselab
