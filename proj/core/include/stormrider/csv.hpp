// Copyright 2026 The Stormrider Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stormrider {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Strict full-field number parses; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_integer(std::string_view text);

std::string_view trim(std::string_view text);

/// Splits one CSV line. Double-quoted fields may contain commas and `""`.
/// Returned views point into `line` or `scratch`; both must outlive them.
std::vector<std::string_view> split_csv_line(std::string_view line, std::string& scratch);

/// Streaming reader for comma-delimited files with a header row. Blank lines
/// and lines starting with '#' are skipped.
class CsvReader {
 public:
  explicit CsvReader(const std::filesystem::path& path);

  [[nodiscard]] const std::vector<std::string>& header() const { return header_; }
  [[nodiscard]] std::optional<std::size_t> column(std::string_view name) const;
  /// Throws DataError naming the file and the available header.
  [[nodiscard]] std::size_t require_column(std::string_view name) const;

  /// Reads the next data row. Views stay valid until the following call.
  bool next(std::vector<std::string_view>& fields);

  /// 1-based line number of the row last returned.
  [[nodiscard]] std::size_t line_number() const { return line_number_; }
  [[nodiscard]] const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::vector<std::string> header_;
  std::string line_;
  std::string scratch_;
  std::size_t line_number_ = 0;
};

class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);

  void comment(std::string_view text);
  void row(const std::vector<std::string>& fields);

  CsvWriter& field(std::string_view text);
  CsvWriter& field(double value);
  CsvWriter& field(long long value);
  void end_row();

 private:
  std::ofstream out_;
  bool row_started_ = false;
};

}  // namespace stormrider
