#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace tweetsignal::csv {

/// A parsed RFC-4180 style table: quoted fields may contain commas, doubled
/// quotes and line breaks. The first record is the header.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> column(std::string_view name) const;
  /// Throws Error(MissingColumn) naming `source` when the column is absent.
  std::size_t require_column(std::string_view name, std::string_view source) const;
};

Table parse(std::string_view text);
/// Throws Error(Io) when the file cannot be opened.
Table read_file(const std::filesystem::path& path);

std::string escape(std::string_view field);

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
};

}  // namespace tweetsignal::csv
