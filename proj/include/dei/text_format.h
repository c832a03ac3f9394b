// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Plain-text building blocks shared by every file format: canonical number
// formatting, a minimal CSV reader, and the sectioned key-value record
// format used for curve registries, plans and evaluations.
//
// Record format:
//
//   # comment
//   [kind arg1 arg2]
//   key = value
//
// Writers emit keys sorted and sections in caller order, so identical data
// always yields identical bytes.

#ifndef DEI_TEXT_FORMAT_H_
#define DEI_TEXT_FORMAT_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dei {

// Up to 12 significant digits, "inf"/"-inf" for infinities.
std::string format_number(double value);

// Parses a finite or infinite real. `where` is prepended to error messages.
double parse_number(std::string_view text, std::string_view where);
std::int64_t parse_integer(std::string_view text, std::string_view where);

std::string read_text_file(const std::filesystem::path& path);

std::string trim(std::string_view text);
std::vector<std::string> split(std::string_view text, char delimiter);

// Header-checked reader for the unquoted comma-separated tables used
// throughout. Blank lines and lines starting with '#' are skipped.
class CsvReader {
 public:
  CsvReader(std::string_view text, std::string source_name);

  // Throws DataError unless the header row equals `expected` exactly.
  void expect_header(const std::vector<std::string>& expected);
  const std::vector<std::string>& header() const { return header_; }

  // Returns false at end of input. Rows must have as many cells as the header.
  bool next(std::vector<std::string>& row);

  int line() const { return line_; }
  // "source:line" of the last row returned.
  std::string where() const;
  const std::vector<std::string>& comments() const { return comments_; }

 private:
  bool next_line(std::string& out);

  std::vector<std::string> lines_;
  std::size_t cursor_ = 0;
  std::string source_;
  std::vector<std::string> header_;
  std::vector<std::string> comments_;
  int line_ = 0;
};

struct RecordSection {
  std::string kind;
  std::vector<std::string> args;
  std::map<std::string, std::string> fields;
  int line = 0;

  // Throws DataError naming the section when the key is absent.
  const std::string& at(const std::string& key, std::string_view source) const;
  std::optional<std::string> get(const std::string& key) const;
};

std::vector<RecordSection> parse_records(std::string_view text,
                                         std::string_view source_name);

void append_section(std::string& out, const RecordSection& section);

}  // namespace dei

#endif  // DEI_TEXT_FORMAT_H_
