#pragma once

// Minimal TOML subset reader/writer for the project's flat config files
// (recipes, thermo overrides).  Supported: comments, [dotted.section]
// headers with bare or basic-quoted parts, and `key = value` pairs whose
// values are basic strings, integers, floats, or booleans.  Arrays, inline
// tables, dates, and multiline strings are out of scope; files here never
// need them.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace chemauto {

struct TomlValue {
  std::variant<std::string, double, bool> value;

  bool is_string() const { return std::holds_alternative<std::string>(value); }
  bool is_number() const { return std::holds_alternative<double>(value); }
  bool is_bool() const { return std::holds_alternative<bool>(value); }
};

// Flat document: keys are full dotted paths; quoted parts are stored
// unescaped, e.g. `[aliquot."("]` + `volume_L = 1` yields "aliquot.(.volume_L"
// (dots inside quoted parts are preserved literally and re-quoted when
// written back).
class TomlDocument {
 public:
  static TomlDocument parse(std::string_view text);  // throws ConfigError

  bool has(const std::string& path) const;
  // Typed getters throw ConfigError when the key is missing or mistyped.
  std::string get_string(const std::string& path) const;
  double get_number(const std::string& path) const;
  bool get_bool(const std::string& path) const;
  std::optional<double> find_number(const std::string& path) const;
  std::optional<std::string> find_string(const std::string& path) const;

  // All entries whose path starts with `prefix.`; returned keys have the
  // prefix stripped.
  std::map<std::string, TomlValue> section(const std::string& prefix) const;

  const std::map<std::string, TomlValue>& entries() const { return entries_; }
  void set(const std::string& path, TomlValue v) { entries_[path] = std::move(v); }

 private:
  std::map<std::string, TomlValue> entries_;
};

// Serialization helper used by the writers: quotes a key part when it is not
// a bare TOML key.
std::string toml_quote_key(std::string_view part);
std::string toml_quote_string(std::string_view text);

}  // namespace chemauto
