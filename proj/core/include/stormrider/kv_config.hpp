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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace stormrider {

/// A value in a TOML-style key/value file: bool, number, string or a flat
/// array of those.
struct ConfigValue {
  using Scalar = std::variant<bool, double, std::string>;
  std::variant<bool, double, std::string, std::vector<Scalar>> value;
};

/// Minimal reader for TOML-style configuration: `[section]` headers,
/// `key = value` pairs, `#` comments, single-line arrays. Keys are addressed
/// as `section.key`.
class KvConfig {
 public:
  static KvConfig parse(std::string_view text, std::string_view source = "<config>");
  static KvConfig load(const std::filesystem::path& path);

  [[nodiscard]] bool has(std::string_view key) const;
  [[nodiscard]] bool has_section(std::string_view section) const;
  [[nodiscard]] std::vector<std::string> keys_in(std::string_view section) const;

  [[nodiscard]] std::optional<double> number(std::string_view key) const;
  [[nodiscard]] std::optional<bool> boolean(std::string_view key) const;
  [[nodiscard]] std::optional<std::string> string(std::string_view key) const;
  [[nodiscard]] std::optional<std::vector<double>> numbers(std::string_view key) const;
  [[nodiscard]] std::optional<std::vector<std::string>> strings(std::string_view key) const;
  /// Array or scalar rendered as strings (numbers in shortest form).
  [[nodiscard]] std::optional<std::vector<std::string>> as_strings(std::string_view key) const;

  double number_or(std::string_view key, double fallback) const {
    return number(key).value_or(fallback);
  }
  std::string string_or(std::string_view key, std::string fallback) const {
    return string(key).value_or(std::move(fallback));
  }

  [[nodiscard]] const std::string& text() const { return text_; }
  [[nodiscard]] const std::string& source() const { return source_; }

 private:
  const ConfigValue* find(std::string_view key) const;

  std::map<std::string, ConfigValue, std::less<>> values_;
  std::string text_;
  std::string source_;
};

}  // namespace stormrider
