#pragma once

#include <istream>
#include <string>
#include <vector>

namespace tantra::csv {

// One parsed CSV: header row plus data rows, RFC-4180 quoting.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  // 1-based line number of each data row, for diagnostics.
  std::vector<long> line_numbers;

  int column(const std::string& name) const;  // -1 when absent
};

Table read(std::istream& in);
Table read_file(const std::string& path);

}  // namespace tantra::csv
