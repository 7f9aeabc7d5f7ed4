#include "cfa/csv.hpp"

#include <boost/tokenizer.hpp>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cfa/error.hpp"

namespace cfa::csv {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_line(const std::string& line) {
  using Separator = boost::escaped_list_separator<char>;
  boost::tokenizer<Separator> tokens(line, Separator('\\', ',', '"'));
  std::vector<std::string> cells;
  for (const auto& token : tokens) {
    cells.push_back(trim(token));
  }
  return cells;
}

std::string location(const Table& table, std::size_t row) {
  return table.source.string() + " line " + std::to_string(table.line_numbers.at(row));
}

std::string escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) {
    return cell;
  }
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"' || c == '\\') {
      out += '\\';
    }
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::optional<std::size_t> Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) {
      return i;
    }
  }
  return std::nullopt;
}

std::size_t Table::require_column(std::string_view name) const {
  if (auto idx = column(name)) {
    return *idx;
  }
  throw DataError("csv: " + source.string() + " is missing column '" + std::string(name) + "'");
}

Table parse(std::string_view text, const std::filesystem::path& source) {
  Table table;
  table.source = source;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
      line.erase(0, 3);
    }
    if (trim(line).empty()) {
      continue;
    }
    std::vector<std::string> cells;
    try {
      cells = split_line(line);
    } catch (const boost::escaped_list_error& e) {
      throw DataError("csv: " + source.string() + " line " + std::to_string(line_no) +
                      ": malformed quoting (" + e.what() + ")");
    }
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw DataError("csv: " + source.string() + " line " + std::to_string(line_no) + ": expected " +
                      std::to_string(table.header.size()) + " fields, found " +
                      std::to_string(cells.size()));
    }
    table.rows.push_back(std::move(cells));
    table.line_numbers.push_back(line_no);
  }
  return table;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Table read(const std::filesystem::path& path) { return parse(read_text(path), path); }

double parse_double(std::string_view cell, const Table& table, std::size_t row) {
  if (cell.empty()) {
    throw DataError("csv: " + location(table, row) + ": missing numeric value");
  }
  std::string text(cell);
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || errno == ERANGE) {
    throw DataError("csv: " + location(table, row) + ": cannot parse '" + text + "' as a number");
  }
  if (!std::isfinite(value)) {
    throw NumericError("csv: " + location(table, row) + ": non-finite value '" + text + "'");
  }
  return value;
}

long long parse_integer(std::string_view cell, const Table& table, std::size_t row) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw DataError("csv: " + location(table, row) + ": cannot parse '" + std::string(cell) +
                    "' as an integer");
  }
  return value;
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string format_fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

Writer::Writer(std::vector<std::string> header) : header_(std::move(header)) {}

void Writer::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) {
    throw Error("csv: row width " + std::to_string(cells.size()) + " does not match header width " +
                std::to_string(header_.size()));
  }
  rows_.push_back(std::move(cells));
}

std::string Writer::str() const {
  std::string out;
  auto emit = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) {
        out += ',';
      }
      out += escape(cells[i]);
    }
    out += '\n';
  };
  emit(header_);
  for (const auto& row : rows_) {
    emit(row);
  }
  return out;
}

void Writer::save(const std::filesystem::path& path) const {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DataError("csv: cannot write " + path.string());
  }
  out << str();
}

}  // namespace cfa::csv
