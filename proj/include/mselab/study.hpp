#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mselab/config.hpp"
#include "mselab/csv.hpp"

namespace mselab {

/// Least-squares slope of log e against log h over the finite positive
/// entries. NaN with fewer than two usable points.
double observed_rate(const std::vector<double>& h, const std::vector<double>& err);

struct RateTable {
  std::string study;
  std::vector<int> grids;
  std::vector<std::string> quantities;
  /// values[g][q]; NaN where the sub-run failed.
  std::vector<std::vector<double>> values;
  std::vector<double> rates;
  /// "grid N: message" for every failed sub-run.
  std::vector<std::string> failures;

  [[nodiscard]] CsvTable values_csv() const;
  [[nodiscard]] CsvTable rates_csv() const;
};

/// Runs one quantity function per grid and regresses the rates. A throwing
/// grid is recorded in `failures` and left out of the regression.
RateTable convergence_table(const std::string& study, const std::vector<int>& grids,
                            const std::vector<std::string>& quantities,
                            const std::function<std::vector<double>(int)>& per_grid);

/// Studies selected by `study` in the config:
///   mms          ‖u − u*‖∞ of the forward solver against the closed form `u_exact`
///   equivalence  max interior gaps between the three residual forms at `u_exact`
///   identity     integral identity defect for `ctilde` with data 1 and 2 of the family
///   poincare     potential error and gauge residual error for the closed form `psi`
/// Needs at least three grid sizes.
RateTable run_convergence_study(const ExperimentConfig& cfg);

}  // namespace mselab
