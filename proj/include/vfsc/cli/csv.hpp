#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace vfsc::cli {

/// Shortest round-trip up to 12 significant digits, locale independent.
std::string format_real(double x);
std::string format_uint(std::uint64_t x);

/// CSV with `# key=value` metadata lines above a mandatory header.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add_metadata(const std::string& key, const std::string& value);
  void add_row(std::vector<std::string> cells);
  std::size_t rows() const { return rows_.size(); }
  void write(std::ostream& os) const;

 private:
  std::vector<std::string> metadata_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace vfsc::cli
