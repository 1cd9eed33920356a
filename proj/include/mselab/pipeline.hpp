#pragma once

#include <map>
#include <string>

#include "mselab/config.hpp"
#include "mselab/manifest.hpp"
#include "mselab/recovery.hpp"
#include "mselab/surface_gradient.hpp"

namespace mselab {

struct PipelineResult {
  SurfaceGradientResult surface;
  RecoveryResult recovery;
  /// Errors against the closed-form c̃ when it is known: deltaX_rel, phi3_rel, ...
  std::map<std::string, double> errors;
};

/// dn → surface → recover on the finest grid of the config. The measured
/// metric is c̃g; every stage failure is rethrown as StageError. Writes
/// dn_first_order.csv, surface_gradient.csv, coefficients.csv to `out` and
/// fills its manifest (call out.finish() afterwards).
PipelineResult run_pipeline(const ExperimentConfig& cfg, OutputWriter& out);

}  // namespace mselab
