#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace slim::csv {

/// Plain comma-separated table; cells are untrimmed except for a trailing CR.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  ///< 1-based source line of each row
};

/// Throws DataError when the file is missing, empty, or a row has the wrong
/// number of cells.
Table read(const std::string& path);

std::vector<std::string> split_line(const std::string& line);

}  // namespace slim::csv
