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

#include "dei/text_format.h"

#include <fmt/format.h>

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dei/errors.h"

namespace dei {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";  // folds -0
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

double parse_number(std::string_view text, std::string_view where) {
  const std::string s = trim(text);
  if (s == "inf" || s == "+inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  double value = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (!s.empty() && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (s.empty() || ec != std::errc() || ptr != end || std::isnan(value)) {
    throw DataError(fmt::format("{}: cannot parse number '{}'", where, s));
  }
  return value;
}

std::int64_t parse_integer(std::string_view text, std::string_view where) {
  const std::string s = trim(text);
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw DataError(fmt::format("{}: cannot parse integer '{}'", where, s));
  }
  return value;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError(fmt::format("cannot open file '{}'", path.string()));
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view text, char delimiter) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(delimiter, start);
    if (pos == std::string_view::npos) {
      parts.push_back(trim(text.substr(start)));
      return parts;
    }
    parts.push_back(trim(text.substr(start, pos - start)));
    start = pos + 1;
  }
}

CsvReader::CsvReader(std::string_view text, std::string source_name)
    : source_(std::move(source_name)) {
  std::size_t start = 0;
  while (start <= text.size()) {
    auto pos = text.find('\n', start);
    if (pos == std::string_view::npos) pos = text.size();
    lines_.emplace_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  std::string first;
  if (next_line(first)) header_ = split(first, ',');
}

bool CsvReader::next_line(std::string& out) {
  while (cursor_ < lines_.size()) {
    ++line_;
    std::string line = trim(lines_[cursor_++]);
    if (line.empty()) continue;
    if (line.front() == '#') {
      comments_.push_back(trim(std::string_view(line).substr(1)));
      continue;
    }
    out = std::move(line);
    return true;
  }
  return false;
}

void CsvReader::expect_header(const std::vector<std::string>& expected) {
  if (header_ != expected) {
    std::string want;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) want += ',';
      want += expected[i];
    }
    throw DataError(
        fmt::format("{}: expected header '{}'", source_, want));
  }
}

bool CsvReader::next(std::vector<std::string>& row) {
  std::string line;
  if (!next_line(line)) return false;
  row = split(line, ',');
  if (row.size() != header_.size()) {
    throw DataError(fmt::format("{}: expected {} fields, found {}", where(),
                                header_.size(), row.size()));
  }
  return true;
}

std::string CsvReader::where() const {
  return fmt::format("{}:{}", source_, line_);
}

const std::string& RecordSection::at(const std::string& key,
                                     std::string_view source) const {
  auto it = fields.find(key);
  if (it == fields.end()) {
    throw DataError(fmt::format("{}:{}: section [{}] is missing key '{}'",
                                source, line, kind, key));
  }
  return it->second;
}

std::optional<std::string> RecordSection::get(const std::string& key) const {
  auto it = fields.find(key);
  if (it == fields.end()) return std::nullopt;
  return it->second;
}

std::vector<RecordSection> parse_records(std::string_view text,
                                         std::string_view source_name) {
  std::vector<RecordSection> sections;
  int line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto pos = text.find('\n', start);
    if (pos == std::string_view::npos) pos = text.size();
    const std::string line = trim(text.substr(start, pos - start));
    start = pos + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw DataError(fmt::format("{}:{}: unterminated section header",
                                    source_name, line_no));
      }
      auto words = split(line.substr(1, line.size() - 2), ' ');
      std::erase(words, std::string());
      if (words.empty()) {
        throw DataError(
            fmt::format("{}:{}: empty section header", source_name, line_no));
      }
      RecordSection section;
      section.kind = words.front();
      section.args.assign(words.begin() + 1, words.end());
      section.line = line_no;
      sections.push_back(std::move(section));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DataError(fmt::format("{}:{}: expected 'key = value'", source_name,
                                  line_no));
    }
    if (sections.empty()) {
      throw DataError(fmt::format("{}:{}: field outside of any section",
                                  source_name, line_no));
    }
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) {
      throw DataError(fmt::format("{}:{}: empty key", source_name, line_no));
    }
    auto [it, inserted] =
        sections.back().fields.emplace(std::move(key), std::move(value));
    if (!inserted) {
      throw DataError(fmt::format("{}:{}: duplicate key '{}'", source_name,
                                  line_no, it->first));
    }
  }
  return sections;
}

void append_section(std::string& out, const RecordSection& section) {
  out += '[';
  out += section.kind;
  for (const auto& arg : section.args) {
    out += ' ';
    out += arg;
  }
  out += "]\n";
  for (const auto& [key, value] : section.fields) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  }
  out += '\n';
}

}  // namespace dei
