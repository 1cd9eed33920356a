#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "mselab/csv.hpp"

namespace mselab {

inline constexpr const char* kVersion = "0.1.0";

struct RunManifest {
  std::string command;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> versions;
  std::map<std::string, double> wall_times;
  std::map<std::string, double> residuals;
  std::map<std::string, double> slopes;
  std::map<std::string, std::string> notes;
  /// Output files written by the run, relative to the output directory.
  std::vector<std::string> outputs;

  [[nodiscard]] std::string to_json() const;
};

/// Single writer for a run's output directory. Writes are serialized and
/// every file is registered in the manifest.
class OutputWriter {
public:
  explicit OutputWriter(std::string dir);

  [[nodiscard]] const std::string& dir() const { return dir_; }
  [[nodiscard]] RunManifest& manifest() { return manifest_; }

  void csv(const std::string& name, const CsvTable& t);
  void fields(const std::string& name, const std::vector<NamedField>& f);
  /// Writes manifest.json; call once at the end of the run.
  void finish();

private:
  std::string path(const std::string& name) const;
  void add(const std::string& name);

  std::string dir_;
  RunManifest manifest_;
  std::mutex mu_;
};

}  // namespace mselab
