#pragma once

#include <string>
#include <vector>

#include "mselab/grid.hpp"

namespace mselab {

/// %.17g
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

std::string to_csv(const CsvTable& t);
void write_csv(const std::string& path, const CsvTable& t);
CsvTable read_csv(const std::string& path);

struct NamedField {
  std::string name;
  ScalarField field;
};

/// Columns x1, x2, then one per field, one row per node in index order.
CsvTable plot_table(const std::vector<NamedField>& fields);
void emit_plot_data(const std::vector<NamedField>& fields, const std::string& path);

/// FNV-1a of the file bytes, hex.
std::string file_checksum(const std::string& path);

}  // namespace mselab
