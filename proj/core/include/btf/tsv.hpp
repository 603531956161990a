// Copyright 2026 The btf Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace btf {

/// Header-addressed tab-separated table. Rows keep their 1-based source line
/// numbers for error messages.
class TsvTable {
 public:
  struct Row {
    std::size_t line = 0;
    std::vector<std::string> fields;
  };

  /// Reads a UTF-8 TSV with a header row. Blank lines are skipped; a row with
  /// the wrong number of fields is a DataError naming the line. Every name in
  /// `required` must appear in the header.
  static TsvTable read(const std::filesystem::path& path,
                       const std::vector<std::string>& required = {});
  static TsvTable parse(std::istream& in, const std::string& source,
                        const std::vector<std::string>& required = {});

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<Row>& rows() const { return rows_; }
  const std::string& source() const { return source_; }

  /// Column position by header name; throws DataError if absent.
  std::size_t column(std::string_view name) const;

 private:
  std::string source_;
  std::vector<std::string> header_;
  std::vector<Row> rows_;
};

std::vector<std::string> split_fields(std::string_view line, char sep = '\t');

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Strict numeric parsing; throw DataError mentioning `what` on failure.
double parse_double(std::string_view text, std::string_view what);
long long parse_int(std::string_view text, std::string_view what);

/// Writes through a sibling temporary file and renames it over `path`, so a
/// reader never observes a partially written file.
void write_atomic(const std::filesystem::path& path,
                  const std::function<void(std::ostream&)>& writer);

}  // namespace btf
