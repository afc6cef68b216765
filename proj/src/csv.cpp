#include "coocnet/csv.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "coocnet/errors.hpp"

namespace coocnet {

std::optional<std::size_t> CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t CsvTable::require_column(std::string_view name) const {
  if (auto i = column(name)) return *i;
  throw DataError("missing required column '" + std::string(name) + "'");
}

namespace {

// One record, possibly spanning several physical lines inside quotes.
// Returns false on clean EOF before any character of a record.
bool read_record(std::istream& in, std::size_t& line_no,
                 std::vector<std::string>& out, std::size_t& record_line) {
  out.clear();
  int c = in.get();
  // Skip blank lines and comment lines.
  while (c != EOF) {
    if (c == '\n') {
      ++line_no;
      c = in.get();
      continue;
    }
    if (c == '\r') {
      c = in.get();
      continue;
    }
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
      continue;
    }
    break;
  }
  if (c == EOF) return false;

  record_line = line_no;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  for (;;) {
    if (c == EOF) {
      if (in_quotes) {
        throw DataError("line " + std::to_string(record_line) +
                        ": unterminated quoted field");
      }
      out.push_back(field);
      return true;
    }
    const char ch = static_cast<char>(c);
    if (in_quotes) {
      if (ch == '"') {
        const int peek = in.peek();
        if (peek == '"') {
          in.get();
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line_no;
        field.push_back(ch);
      }
    } else {
      if (ch == '"') {
        if (!field.empty() || field_was_quoted) {
          throw DataError("line " + std::to_string(line_no) +
                          ": stray quote inside unquoted field");
        }
        in_quotes = true;
        field_was_quoted = true;
      } else if (ch == ',') {
        out.push_back(field);
        field.clear();
        field_was_quoted = false;
      } else if (ch == '\n') {
        ++line_no;
        out.push_back(field);
        return true;
      } else if (ch != '\r') {
        field.push_back(ch);
      }
    }
    c = in.get();
  }
}

} // namespace

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::size_t line_no = 1;
  std::size_t record_line = 0;
  if (!read_record(in, line_no, table.header, record_line)) {
    throw DataError("empty CSV input (no header row)");
  }
  std::vector<std::string> row;
  while (read_record(in, line_no, row, record_line)) {
    if (row.size() != table.header.size()) {
      throw DataError("line " + std::to_string(record_line) + ": expected " +
                      std::to_string(table.header.size()) + " fields, found " +
                      std::to_string(row.size()));
    }
    table.rows.push_back(row);
    table.line_numbers.push_back(record_line);
  }
  return table;
}

CsvTable read_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path.string());
  return read_csv(in);
}

std::string csv_escape(std::string_view field) {
  const bool needs_quotes =
      field.find_first_of(",\"\n\r") != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

void write_csv_row(std::ostream& out, std::span<const std::string> fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << ',';
    out << csv_escape(fields[i]);
  }
  out << '\n';
}

std::vector<std::string> read_line_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path.string());
  std::vector<std::string> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    const auto end = line.find_last_not_of(" \t");
    std::string entry = line.substr(start, end - start + 1);
    if (entry.empty() || entry[0] == '#') continue;
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::string format_double(double value, int decimals) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  // Avoid the "-0.000000" vs "0.000000" wobble.
  std::string s(buf);
  bool all_zero = true;
  for (char ch : s) {
    if (ch >= '1' && ch <= '9') {
      all_zero = false;
      break;
    }
  }
  if (all_zero && !s.empty() && s[0] == '-') s.erase(0, 1);
  return s;
}

} // namespace coocnet
