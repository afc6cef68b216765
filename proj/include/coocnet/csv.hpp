#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace coocnet {

/// Parsed CSV contents: a header row plus data rows. Lines starting with '#'
/// (outside quotes, at record start) are treated as metadata comments and
/// skipped, so files written with a metadata header round-trip.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers; // 1-based source line of each row

  /// Index of a named column, or nullopt.
  std::optional<std::size_t> column(std::string_view name) const;
  /// Index of a named column; throws DataError naming the column if absent.
  std::size_t require_column(std::string_view name) const;
};

/// RFC-4180 reader (quoted fields, doubled quotes, embedded separators and
/// newlines). Malformed input throws DataError naming the offending line.
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::filesystem::path& path);

/// Quote a field only when it needs it.
std::string csv_escape(std::string_view field);
void write_csv_row(std::ostream& out, std::span<const std::string> fields);

/// Read a plain-text list file: one entry per line, '#' comments and blank
/// lines skipped, entries trimmed.
std::vector<std::string> read_line_list(const std::filesystem::path& path);

/// Fixed-format float used in all CSV output so reruns are byte-identical.
std::string format_double(double value, int decimals = 6);

} // namespace coocnet
