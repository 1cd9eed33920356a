#include "mselab/manifest.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "mselab/error.hpp"

namespace mselab {

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  j["versions"] = versions;
  j["wall_times"] = wall_times;
  j["residuals"] = residuals;
  j["slopes"] = slopes;
  j["notes"] = notes;
  j["outputs"] = outputs;
  return j.dump(2) + "\n";
}

OutputWriter::OutputWriter(std::string dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw IoError("cannot create output directory " + dir_ + ": " + ec.message());
  manifest_.versions["mselab"] = kVersion;
  manifest_.versions["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                "." + std::to_string(EIGEN_MINOR_VERSION);
  manifest_.versions["compiler"] = __VERSION__;
}

std::string OutputWriter::path(const std::string& name) const { return (std::filesystem::path(dir_) / name).string(); }

void OutputWriter::add(const std::string& name) {
  if (std::find(manifest_.outputs.begin(), manifest_.outputs.end(), name) != manifest_.outputs.end())
    throw IoError("output " + name + " written twice in one run");
  manifest_.outputs.push_back(name);
}

void OutputWriter::csv(const std::string& name, const CsvTable& t) {
  std::lock_guard lock(mu_);
  add(name);
  write_csv(path(name), t);
}

void OutputWriter::fields(const std::string& name, const std::vector<NamedField>& f) {
  std::lock_guard lock(mu_);
  add(name);
  emit_plot_data(f, path(name));
}

void OutputWriter::finish() {
  std::lock_guard lock(mu_);
  std::ofstream f(path("manifest.json"));
  if (!f) throw IoError("cannot write manifest in " + dir_);
  f << manifest_.to_json();
}

}  // namespace mselab
