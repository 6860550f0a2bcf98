#ifndef VLCSTAT_CSV_HPP
#define VLCSTAT_CSV_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "vlcstat/common.hpp"

namespace vlcstat {

struct CsvColumn {
  std::string name;
  std::vector<double> values;
};

/// 17 significant digits round-trip a double exactly and the format is
/// locale-independent.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Header row plus one record per grid point. Empty or ragged series are
/// rejected before any file is created.
inline void emit_csv(const std::vector<CsvColumn>& columns,
                     const std::filesystem::path& path) {
  if (columns.empty()) throw ConfigError("emit_csv: no columns");
  const std::size_t rows = columns.front().values.size();
  if (rows == 0) throw ConfigError("emit_csv: empty series");
  for (const auto& c : columns)
    if (c.values.size() != rows)
      throw ConfigError("emit_csv: column '" + c.name + "' length mismatch");

  std::ofstream out(path);
  if (!out) throw ConfigError("emit_csv: cannot open " + path.string());
  for (std::size_t i = 0; i < columns.size(); ++i)
    out << (i ? "," : "") << columns[i].name;
  out << "\n";
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < columns.size(); ++i)
      out << (i ? "," : "") << format_double(columns[i].values[r]);
    out << "\n";
  }
  if (!out) throw ConfigError("emit_csv: write failed for " + path.string());
}

}  // namespace vlcstat

#endif  // VLCSTAT_CSV_HPP
