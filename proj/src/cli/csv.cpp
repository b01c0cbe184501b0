#include "fk/cli/csv.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

#include "fk/cli/config.hpp"

namespace fk::cli {

std::string format_number(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, end);
}

std::string format_point(std::span<const double> point) {
  std::string out;
  for (std::size_t i = 0; i < point.size(); ++i) {
    if (i > 0) out += ';';
    out += format_number(point[i]);
  }
  return out;
}

std::string format_bool(bool value) { return value ? "true" : "false"; }

namespace {

void write_row(std::ostringstream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) os << ',';
    os << cells[i];
  }
  os << '\n';
}

}  // namespace

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
  write_row(body_, header_);
}

CsvTable& CsvTable::add(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw std::logic_error("CSV row width does not match header");
  write_row(body_, row);
  ++rows_;
  return *this;
}

void CsvTable::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write output file '" + path.string() + "'");
  out << body_.str();
  out.flush();
  if (!out) throw IoError("failed writing output file '" + path.string() + "'");
}

}  // namespace fk::cli
