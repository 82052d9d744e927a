// Copyright 2026 The langevin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LANGEVIN_CONFIG_HPP_
#define LANGEVIN_CONFIG_HPP_

// Flat key/value configuration. Two input syntaxes are accepted:
//   * a TOML subset: [section] headers, `key = value` lines, # comments,
//     values that are numbers, booleans, "strings" or one-line [arrays];
//   * JSON objects (nested objects flatten to dotted keys).
// Keys are addressed with dots, e.g. "schedule.kind".

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace langevin {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Config {
 public:
  using Value = std::variant<double, bool, std::string, std::vector<double>, std::vector<std::string>>;

  static Config parse_toml(std::string_view text);
  static Config parse_json(std::string_view text);
  static Config load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const bool json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
    return json ? parse_json(text) : parse_toml(text);
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  void set(const std::string& key, Value v) { values_[key] = std::move(v); }
  const std::map<std::string, Value>& values() const { return values_; }

  double number(const std::string& key) const { return as<double>(key, "a number"); }
  double number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }
  bool boolean(const std::string& key, bool fallback) const { return has(key) ? as<bool>(key, "a boolean") : fallback; }
  std::string string(const std::string& key) const { return as<std::string>(key, "a string"); }
  std::string string(const std::string& key, const std::string& fallback) const {
    return has(key) ? string(key) : fallback;
  }
  std::vector<double> numbers(const std::string& key, std::vector<double> fallback = {}) const {
    if (!has(key)) return fallback;
    const Value& v = values_.at(key);
    if (auto* d = std::get_if<double>(&v)) return {*d};
    return as<std::vector<double>>(key, "a list of numbers");
  }
  std::vector<std::string> strings(const std::string& key, std::vector<std::string> fallback = {}) const {
    if (!has(key)) return fallback;
    const Value& v = values_.at(key);
    if (auto* s = std::get_if<std::string>(&v)) return {*s};
    return as<std::vector<std::string>>(key, "a list of strings");
  }

 private:
  template <class T>
  const T& as(const std::string& key, const char* what) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing config key '" + key + "'");
    if (auto* v = std::get_if<T>(&it->second)) return *v;
    throw ConfigError("config key '" + key + "' must be " + what);
  }
  std::map<std::string, Value> values_;
};

namespace detail {

inline std::string_view cfg_trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::string_view strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

struct ScalarParse {
  bool ok = false;
  Config::Value value;
};

inline ScalarParse parse_scalar(std::string_view s) {
  s = cfg_trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return {true, std::string(s.substr(1, s.size() - 2))};
  if (s == "true") return {true, true};
  if (s == "false") return {true, false};
  std::string digits;
  for (char c : s)
    if (c != '_') digits.push_back(c);
  double v = 0.0;
  const char* first = digits.data();
  if (!digits.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, digits.data() + digits.size(), v);
  if (ec == std::errc() && ptr == digits.data() + digits.size() && !digits.empty()) return {true, v};
  return {};
}

inline std::vector<std::string_view> split_array(std::string_view body) {
  std::vector<std::string_view> out;
  bool in_string = false;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= body.size(); ++i) {
    if (i < body.size() && body[i] == '"') in_string = !in_string;
    if (i == body.size() || (body[i] == ',' && !in_string)) {
      std::string_view item = cfg_trim(body.substr(start, i - start));
      if (!item.empty()) out.push_back(item);
      start = i + 1;
    }
  }
  return out;
}

inline void flatten_json(const nlohmann::json& j, const std::string& prefix, Config& out) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    const auto& v = it.value();
    if (v.is_object()) {
      flatten_json(v, key, out);
    } else if (v.is_number()) {
      out.set(key, v.get<double>());
    } else if (v.is_boolean()) {
      out.set(key, v.get<bool>());
    } else if (v.is_string()) {
      out.set(key, v.get<std::string>());
    } else if (v.is_array()) {
      if (!v.empty() && v.front().is_string()) {
        out.set(key, v.get<std::vector<std::string>>());
      } else {
        for (const auto& e : v)
          if (!e.is_number()) throw ConfigError("config key '" + key + "': arrays must hold numbers or strings");
        out.set(key, v.get<std::vector<double>>());
      }
    } else {
      throw ConfigError("config key '" + key + "' has an unsupported value");
    }
  }
}

}  // namespace detail

inline Config Config::parse_toml(std::string_view text) {
  Config cfg;
  std::string section;
  std::size_t line_no = 0, start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i != text.size() && text[i] != '\n') continue;
    ++line_no;
    std::string_view line = detail::cfg_trim(detail::strip_comment(text.substr(start, i - start)));
    start = i + 1;
    if (line.empty()) continue;
    auto fail = [&](const std::string& msg) { throw ConfigError("config line " + std::to_string(line_no) + ": " + msg); };
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      section = std::string(detail::cfg_trim(line.substr(1, line.size() - 2)));
      if (section.empty()) fail("empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail("expected 'key = value'");
    const std::string key(detail::cfg_trim(line.substr(0, eq)));
    if (key.empty()) fail("empty key");
    const std::string full = section.empty() ? key : section + "." + key;
    std::string_view raw = detail::cfg_trim(line.substr(eq + 1));
    if (!raw.empty() && raw.front() == '[') {
      if (raw.back() != ']') fail("arrays must close on the same line");
      const auto items = detail::split_array(raw.substr(1, raw.size() - 2));
      std::vector<double> nums;
      std::vector<std::string> strs;
      for (auto item : items) {
        auto p = detail::parse_scalar(item);
        if (!p.ok) fail("bad array element '" + std::string(item) + "'");
        if (auto* d = std::get_if<double>(&p.value)) nums.push_back(*d);
        else if (auto* s = std::get_if<std::string>(&p.value)) strs.push_back(*s);
        else fail("arrays must hold numbers or strings");
      }
      if (!nums.empty() && !strs.empty()) fail("mixed array");
      if (!strs.empty()) cfg.set(full, strs);
      else cfg.set(full, nums);
      continue;
    }
    auto p = detail::parse_scalar(raw);
    if (!p.ok) fail("cannot parse value '" + std::string(raw) + "'");
    cfg.set(full, p.value);
  }
  return cfg;
}

inline Config Config::parse_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("JSON config must be an object");
  Config cfg;
  detail::flatten_json(j, "", cfg);
  return cfg;
}

}  // namespace langevin

#endif  // LANGEVIN_CONFIG_HPP_
