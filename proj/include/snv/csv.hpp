#pragma once

#include <string>
#include <vector>

namespace snv {

/// Shortest decimal form that round-trips to the exact double.
std::string format_double(double v);

/// Writes header + equal-length columns; values round-trip bit-exactly.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

/// Reads a CSV written by write_csv back into columns (header optional out-param).
std::vector<std::vector<double>> read_csv(const std::string& path,
                                          std::vector<std::string>* header = nullptr);

} // namespace snv
