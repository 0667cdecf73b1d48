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

#include "stormrider/kv_config.hpp"

#include <fstream>
#include <sstream>

#include "stormrider/csv.hpp"
#include "stormrider/errors.hpp"

namespace stormrider {
namespace {

std::string strip_comment(std::string_view line) {
  std::string out;
  bool in_string = false;
  for (char c : line) {
    if (c == '"') in_string = !in_string;
    if (c == '#' && !in_string) break;
    out.push_back(c);
  }
  return out;
}

ConfigValue::Scalar parse_scalar(std::string_view text, const std::string& where) {
  text = trim(text);
  if (text.size() >= 2 && text.front() == '"' && text.back() == '"') {
    return std::string(text.substr(1, text.size() - 2));
  }
  if (text == "true") return true;
  if (text == "false") return false;
  if (auto d = parse_double(text)) return *d;
  throw ConfigError(where + ": cannot parse value '" + std::string(text) + "'");
}

}  // namespace

KvConfig KvConfig::parse(std::string_view text, std::string_view source) {
  KvConfig cfg;
  cfg.text_ = std::string(text);
  cfg.source_ = std::string(source);
  std::istringstream in(cfg.text_);
  std::string raw;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string where = cfg.source_ + ":" + std::to_string(line_no);
    const std::string line = strip_comment(raw);
    const auto t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError(where + ": unterminated section header");
      section = std::string(trim(t.substr(1, t.size() - 2)));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected key = value");
    const auto key = trim(t.substr(0, eq));
    const auto rhs = trim(t.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    ConfigValue value;
    if (!rhs.empty() && rhs.front() == '[') {
      if (rhs.back() != ']') throw ConfigError(where + ": arrays must close on the same line");
      std::vector<ConfigValue::Scalar> items;
      const auto body = trim(rhs.substr(1, rhs.size() - 2));
      if (!body.empty()) {
        // Re-quote after splitting so that strings keep their quotes.
        std::string_view rest = body;
        std::size_t i = 0;
        bool in_string = false;
        std::size_t start = 0;
        for (; i <= rest.size(); ++i) {
          if (i < rest.size() && rest[i] == '"') in_string = !in_string;
          if (i == rest.size() || (rest[i] == ',' && !in_string)) {
            const auto item = trim(rest.substr(start, i - start));
            if (!item.empty()) items.push_back(parse_scalar(item, where));
            start = i + 1;
          }
        }
      }
      value.value = std::move(items);
    } else {
      std::visit([&](auto&& s) { value.value = s; }, parse_scalar(rhs, where));
    }
    const std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
    cfg.values_[full] = std::move(value);
  }
  return cfg;
}

KvConfig KvConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

const ConfigValue* KvConfig::find(std::string_view key) const {
  auto it = values_.find(key);
  return it == values_.end() ? nullptr : &it->second;
}

bool KvConfig::has(std::string_view key) const { return find(key) != nullptr; }

bool KvConfig::has_section(std::string_view section) const {
  const std::string prefix = std::string(section) + ".";
  auto it = values_.lower_bound(prefix);
  return it != values_.end() && it->first.compare(0, prefix.size(), prefix) == 0;
}

std::vector<std::string> KvConfig::keys_in(std::string_view section) const {
  const std::string prefix = std::string(section) + ".";
  std::vector<std::string> keys;
  for (auto it = values_.lower_bound(prefix);
       it != values_.end() && it->first.compare(0, prefix.size(), prefix) == 0; ++it) {
    const auto rest = it->first.substr(prefix.size());
    if (rest.find('.') == std::string::npos) keys.push_back(rest);
  }
  return keys;
}

std::optional<double> KvConfig::number(std::string_view key) const {
  const auto* v = find(key);
  if (!v) return std::nullopt;
  if (const auto* d = std::get_if<double>(&v->value)) return *d;
  throw ConfigError(source_ + ": key '" + std::string(key) + "' must be a number");
}

std::optional<bool> KvConfig::boolean(std::string_view key) const {
  const auto* v = find(key);
  if (!v) return std::nullopt;
  if (const auto* b = std::get_if<bool>(&v->value)) return *b;
  throw ConfigError(source_ + ": key '" + std::string(key) + "' must be true or false");
}

std::optional<std::string> KvConfig::string(std::string_view key) const {
  const auto* v = find(key);
  if (!v) return std::nullopt;
  if (const auto* s = std::get_if<std::string>(&v->value)) return *s;
  throw ConfigError(source_ + ": key '" + std::string(key) + "' must be a string");
}

std::optional<std::vector<double>> KvConfig::numbers(std::string_view key) const {
  const auto* v = find(key);
  if (!v) return std::nullopt;
  const auto* arr = std::get_if<std::vector<ConfigValue::Scalar>>(&v->value);
  if (!arr) throw ConfigError(source_ + ": key '" + std::string(key) + "' must be an array");
  std::vector<double> out;
  for (const auto& item : *arr) {
    const auto* d = std::get_if<double>(&item);
    if (!d) throw ConfigError(source_ + ": key '" + std::string(key) + "' must hold numbers");
    out.push_back(*d);
  }
  return out;
}

std::optional<std::vector<std::string>> KvConfig::strings(std::string_view key) const {
  const auto* v = find(key);
  if (!v) return std::nullopt;
  const auto* arr = std::get_if<std::vector<ConfigValue::Scalar>>(&v->value);
  if (!arr) throw ConfigError(source_ + ": key '" + std::string(key) + "' must be an array");
  std::vector<std::string> out;
  for (const auto& item : *arr) {
    const auto* s = std::get_if<std::string>(&item);
    if (!s) throw ConfigError(source_ + ": key '" + std::string(key) + "' must hold strings");
    out.push_back(*s);
  }
  return out;
}

std::optional<std::vector<std::string>> KvConfig::as_strings(std::string_view key) const {
  const auto* v = find(key);
  if (!v) return std::nullopt;
  auto render = [](const ConfigValue::Scalar& s) -> std::string {
    if (const auto* d = std::get_if<double>(&s)) return format_double(*d);
    if (const auto* b = std::get_if<bool>(&s)) return *b ? "true" : "false";
    return std::get<std::string>(s);
  };
  std::vector<std::string> out;
  if (const auto* arr = std::get_if<std::vector<ConfigValue::Scalar>>(&v->value)) {
    for (const auto& item : *arr) out.push_back(render(item));
  } else {
    std::visit(
        [&](const auto& x) {
          if constexpr (std::is_same_v<std::decay_t<decltype(x)>, std::vector<ConfigValue::Scalar>>) {
          } else {
            out.push_back(render(ConfigValue::Scalar(x)));
          }
        },
        v->value);
  }
  return out;
}

}  // namespace stormrider
