#include "mselab/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "mselab/error.hpp"
#include "mselab/recovery.hpp"

namespace mselab {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ParseError("config key '" + key + "': not a number: '" + v + "'");
  }
}

int to_int(const std::string& key, const std::string& v) {
  int out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ParseError("config key '" + key + "': not an integer: '" + v + "'");
  return out;
}

}  // namespace

Config Config::parse(std::string_view text, const std::string& origin) {
  Config c;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::string t = trim(line);
    if (t.empty()) continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ParseError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(std::string_view(t).substr(0, eq));
    if (key.empty()) throw ParseError(origin + ":" + std::to_string(lineno) + ": empty key");
    c.kv_[key] = trim(std::string_view(t).substr(eq + 1));
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path);
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? to_double(key, kv_.at(key)) : fallback;
}

int Config::get_int(const std::string& key, int fallback) const {
  return has(key) ? to_int(key, kv_.at(key)) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string& v = kv_.at(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ParseError("config key '" + key + "': not a boolean: '" + v + "'");
}

std::vector<int> Config::get_int_list(const std::string& key, std::vector<int> fallback) const {
  if (!has(key)) return fallback;
  std::vector<int> out;
  for (const auto& s : split(kv_.at(key), ',')) out.push_back(to_int(key, s));
  return out;
}

std::vector<double> Config::get_double_list(const std::string& key, std::vector<double> fallback) const {
  if (!has(key)) return fallback;
  std::vector<double> out;
  for (const auto& s : split(kv_.at(key), ',')) out.push_back(to_double(key, s));
  return out;
}

Expr Config::get_expr(const std::string& key, const std::string& fallback) const {
  try {
    return Expr::parse(get(key, fallback));
  } catch (const ParseError& e) {
    throw ParseError("config key '" + key + "': " + e.what());
  }
}

std::string Config::canonical() const {
  std::string s;
  for (const auto& [k, v] : kv_) s += k + "=" + v + "\n";
  return s;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t Config::hash() const { return fnv1a(canonical()); }

ExperimentConfig ExperimentConfig::from(const Config& c) {
  ExperimentConfig e;
  e.raw = c;
  std::string m = c.get("metric", "euclidean");
  if (m == "custom") {
    e.metric.name = "custom";
    e.metric.g11 = c.get_expr("g11", "1");
    e.metric.g12 = c.get_expr("g12", "0");
    e.metric.g22 = c.get_expr("g22", "1");
    e.metric.c = c.get_expr("c", "1");
    e.metric.analytic_derivatives = c.get_bool("analytic_derivatives", true);
  } else {
    e.metric = MetricSpec::preset(m);
  }
  if (c.has("metric_scale")) e.metric = e.metric.scaled(c.get_double("metric_scale", 1.0));
  e.grids = c.get_int_list("grids", e.grids);
  if (e.grids.empty()) throw InvalidArgument("config: empty grid list");
  for (std::size_t i = 1; i < e.grids.size(); ++i)
    if (e.grids[i] <= e.grids[i - 1]) throw InvalidArgument("config: grid sizes must be strictly increasing");
  e.family = c.get("family", e.family);
  e.eps = c.get_double_list("eps", e.eps);
  e.gamma = c.get("gamma", e.gamma);
  e.max_order = c.get_int("max_order", e.max_order);
  e.out_dir = c.get("out", e.out_dir);
  e.seed = static_cast<std::uint64_t>(c.get_double("seed", 1.0));
  e.threads = c.get_int("threads", 0);
  e.ctilde = c.get_expr("ctilde", "1");
  e.pairs = c.get_int("pairs", e.pairs);
  e.amplitude = c.get_double("amplitude", e.amplitude);
  e.anchor_value = c.get_double("anchor_value", e.anchor_value);
  e.solver.newton_tol = c.get_double("newton_tol", e.solver.newton_tol);
  e.solver.max_newton_iters = c.get_int("max_newton_iters", e.solver.max_newton_iters);
  e.solver.delta_cap = c.get_double("delta_cap", e.solver.delta_cap);
  e.study = c.get("study", e.study);
  e.u_exact = c.get_expr("u_exact", "0");
  return e;
}

std::vector<BoundaryData> make_boundary_family(const std::string& spec, const Gamma& gamma, std::uint64_t seed,
                                               double amplitude) {
  auto colon = spec.find(':');
  std::string kind = spec.substr(0, colon);
  int count = colon == std::string::npos ? 4 : std::stoi(spec.substr(colon + 1));
  if (count < 1) throw InvalidArgument("family count must be positive: " + spec);
  if (kind == "sides") {
    return family_data(gamma, count, amplitude);
  }
  if (kind == "random") {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<BoundaryData> out;
    for (int d = 0; d < count; ++d) {
      double a[4][4];
      for (int p = 0; p < 4; ++p)
        for (int q = 0; q < 4; ++q) a[p][q] = U(rng) / (1.0 + p + q);
      out.push_back(BoundaryData::from_function(gamma, [&](double x1, double x2) {
        double s = 0.0;
        for (int p = 0; p < 4; ++p)
          for (int q = 0; q < 4; ++q)
            s += a[p][q] * std::cos(p * std::numbers::pi * x1) * std::cos(q * std::numbers::pi * x2);
        return amplitude * s;
      }));
    }
    return out;
  }
  throw InvalidArgument("unknown family spec '" + spec + "' (sides:P | random:K)");
}

}  // namespace mselab
