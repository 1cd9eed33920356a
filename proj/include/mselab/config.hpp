#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mselab/expr.hpp"
#include "mselab/metric.hpp"
#include "mselab/solver.hpp"

namespace mselab {

/// Flat `key = value` text. `#` starts a comment; blank lines are ignored.
/// Later keys override earlier ones.
class Config {
public:
  static Config parse(std::string_view text, const std::string& origin = "<string>");
  static Config load(const std::string& path);

  [[nodiscard]] bool has(const std::string& key) const { return kv_.count(key) > 0; }
  [[nodiscard]] std::string get(const std::string& key, const std::string& fallback) const;
  [[nodiscard]] double get_double(const std::string& key, double fallback) const;
  [[nodiscard]] int get_int(const std::string& key, int fallback) const;
  [[nodiscard]] bool get_bool(const std::string& key, bool fallback) const;
  /// Comma-separated lists.
  [[nodiscard]] std::vector<int> get_int_list(const std::string& key, std::vector<int> fallback) const;
  [[nodiscard]] std::vector<double> get_double_list(const std::string& key, std::vector<double> fallback) const;
  [[nodiscard]] Expr get_expr(const std::string& key, const std::string& fallback) const;

  void set(const std::string& key, const std::string& value) { kv_[key] = value; }
  [[nodiscard]] const std::map<std::string, std::string>& entries() const { return kv_; }

  /// Sorted `key=value` lines; the hash is FNV-1a over this text.
  [[nodiscard]] std::string canonical() const;
  [[nodiscard]] std::uint64_t hash() const;

private:
  std::map<std::string, std::string> kv_;
};

std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t v);

struct ExperimentConfig {
  Config raw;
  MetricSpec metric;
  std::vector<int> grids{33, 65};
  /// `sides:P` (constant plus sin(pπs) per side) or `random:K` (seeded).
  std::string family = "sides:4";
  std::vector<double> eps{1e-2};
  std::string gamma = "all";
  int max_order = 3;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  int threads = 0;
  Expr ctilde = Expr(1.0);
  int pairs = 24;
  double amplitude = 1.0;
  double anchor_value = 1.0;
  SolverOptions solver;
  std::string study = "mms";
  Expr u_exact = Expr(0.0);

  /// Reads the keys above; fills defaults; validates grid ordering.
  static ExperimentConfig from(const Config& c);
};

/// Boundary data for a family spec on Γ. `random:K` draws K trigonometric
/// polynomials Σ a_pq cos(pπx₁)cos(qπx₂), p, q ≤ 3, from the seed.
std::vector<BoundaryData> make_boundary_family(const std::string& spec, const Gamma& gamma, std::uint64_t seed,
                                               double amplitude);

}  // namespace mselab
