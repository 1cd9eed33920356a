#include "mselab/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mselab/config.hpp"
#include "mselab/error.hpp"

namespace mselab {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_csv(const CsvTable& t) {
  std::string s;
  for (std::size_t c = 0; c < t.header.size(); ++c) s += (c ? "," : "") + t.header[c];
  s += "\n";
  for (const auto& row : t.rows) {
    if (row.size() != t.header.size()) throw InvalidArgument("csv row width does not match header");
    for (std::size_t c = 0; c < row.size(); ++c) s += (c ? "," : "") + format_double(row[c]);
    s += "\n";
  }
  return s;
}

void write_csv(const std::string& path, const CsvTable& t) {
  std::string text = to_csv(t);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  f << text;
  if (!f) throw IoError("write failed: " + path);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read " + path);
  CsvTable t;
  std::string line;
  if (!std::getline(f, line)) throw IoError("empty csv file " + path);
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.header.push_back(cell);
  }
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw IoError("bad number '" + cell + "' in " + path);
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable plot_table(const std::vector<NamedField>& fields) {
  CsvTable t;
  t.header = {"x1", "x2"};
  for (const auto& f : fields) t.header.push_back(f.name);
  if (fields.empty()) return t;
  const Grid& g = fields.front().field.grid();
  for (const auto& f : fields) require_same_grid(g, f.field.grid(), "emit_plot_data");
  for (int k = 0; k < g.size(); ++k) {
    std::vector<double> row{g.x(g.col(k)), g.x(g.row(k))};
    for (const auto& f : fields) row.push_back(f.field[k]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

void emit_plot_data(const std::vector<NamedField>& fields, const std::string& path) {
  write_csv(path, plot_table(fields));
}

std::string file_checksum(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return hex64(fnv1a(ss.str()));
}

}  // namespace mselab
