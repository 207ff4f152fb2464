#pragma once

#include <string>
#include <vector>

namespace shearlab {

// Writes to a temporary sibling and renames it over the target.
void atomic_write(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

// %.17g, so values round-trip exactly
std::string format_double(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Throws ValidationError if the column is missing.
  std::size_t column(const std::string& name) const;
  std::vector<double> numbers(const std::string& name) const;
};

// Plain comma-separated values without quoting.
CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text);
std::string to_csv(const CsvTable& table);

}  // namespace shearlab
