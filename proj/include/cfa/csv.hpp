#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cfa::csv {

/// A parsed CSV file: header plus data rows. Row numbers reported in errors
/// are 1-based file line numbers (the header is line 1).
struct Table {
  std::filesystem::path source;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;

  std::optional<std::size_t> column(std::string_view name) const;
  std::size_t require_column(std::string_view name) const;
  bool empty() const noexcept { return rows.empty(); }
};

/// Reads a comma-separated file with a header row. Blank lines are skipped;
/// quoted fields follow the usual escaped-list rules. A file with no bytes
/// yields an empty header and no rows.
Table read(const std::filesystem::path& path);

/// Whole-file read; throws DataError when the file cannot be opened.
std::string read_text(const std::filesystem::path& path);

/// Parses text already in memory; `source` is used in error messages.
Table parse(std::string_view text, const std::filesystem::path& source = "<memory>");

double parse_double(std::string_view cell, const Table& table, std::size_t row);
long long parse_integer(std::string_view cell, const Table& table, std::size_t row);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

/// Fixed-precision form used in human-facing report columns.
std::string format_fixed(double value, int digits);

class Writer {
 public:
  explicit Writer(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  std::string str() const;
  void save(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace cfa::csv
