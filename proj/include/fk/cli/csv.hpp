// Comma-separated output with a fixed header and round-trip number formatting.
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace fk::cli {

/// Shortest decimal form that parses back to the same double.
std::string format_number(double value);
/// Coordinates joined with ';' so that a point stays a single CSV cell.
std::string format_point(std::span<const double> point);
std::string format_bool(bool value);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& add(std::vector<std::string> row);

  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_; }
  std::string str() const { return body_.str(); }

  /// Throws IoError when the path cannot be written.
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::ostringstream body_;
  std::size_t rows_ = 0;
};

}  // namespace fk::cli
