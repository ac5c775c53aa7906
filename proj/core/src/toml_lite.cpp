#include "chemauto/toml_lite.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <vector>

#include "chemauto/errors.hpp"

namespace chemauto {

namespace {

bool is_bare_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

// Removes a trailing comment that is not inside a basic string.
std::string_view strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (c == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
    if (c == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;
  int line_no = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("toml line " + std::to_string(line_no) + ": " + msg);
  }
};

std::string parse_basic_string(Cursor& cur) {
  // cur.pos is at the opening quote
  std::string out;
  ++cur.pos;
  while (cur.pos < cur.text.size()) {
    char c = cur.text[cur.pos++];
    if (c == '"') return out;
    if (c == '\\') {
      if (cur.pos >= cur.text.size()) cur.fail("dangling escape");
      char esc = cur.text[cur.pos++];
      switch (esc) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        default: cur.fail(std::string("unsupported escape \\") + esc);
      }
    } else {
      out += c;
    }
  }
  cur.fail("unterminated string");
}

// One dotted key: bare or quoted parts joined by '.'.
std::vector<std::string> parse_key_path(Cursor& cur) {
  std::vector<std::string> parts;
  while (true) {
    while (cur.pos < cur.text.size() && cur.text[cur.pos] == ' ') ++cur.pos;
    if (cur.pos >= cur.text.size()) cur.fail("expected key");
    if (cur.text[cur.pos] == '"') {
      std::string part = parse_basic_string(cur);
      if (part.find('.') != std::string::npos) {
        cur.fail("dots inside quoted keys are not supported");
      }
      parts.push_back(std::move(part));
    } else {
      std::size_t start = cur.pos;
      while (cur.pos < cur.text.size() && is_bare_key_char(cur.text[cur.pos])) {
        ++cur.pos;
      }
      if (cur.pos == start) cur.fail("expected key");
      parts.emplace_back(cur.text.substr(start, cur.pos - start));
    }
    while (cur.pos < cur.text.size() && cur.text[cur.pos] == ' ') ++cur.pos;
    if (cur.pos < cur.text.size() && cur.text[cur.pos] == '.') {
      ++cur.pos;
      continue;
    }
    return parts;
  }
}

TomlValue parse_value(Cursor& cur) {
  while (cur.pos < cur.text.size() && cur.text[cur.pos] == ' ') ++cur.pos;
  if (cur.pos >= cur.text.size()) cur.fail("expected value");
  const char c = cur.text[cur.pos];
  if (c == '"') return TomlValue{parse_basic_string(cur)};
  std::string_view rest = trim(cur.text.substr(cur.pos));
  cur.pos = cur.text.size();
  if (rest == "true") return TomlValue{true};
  if (rest == "false") return TomlValue{false};
  std::string token(rest);
  char* end = nullptr;
  const double num = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0') {
    cur.fail("unparsable value '" + token + "'");
  }
  return TomlValue{num};
}

std::string join_path(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += '.';
    out += p;
  }
  return out;
}

}  // namespace

TomlDocument TomlDocument::parse(std::string_view text) {
  TomlDocument doc;
  std::string prefix;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view raw = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    ++line_no;

    std::string_view line = trim(strip_comment(raw));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("toml line " + std::to_string(line_no) +
                          ": unterminated section header");
      }
      Cursor cur{line.substr(1, line.size() - 2), 0, line_no};
      prefix = join_path(parse_key_path(cur));
      if (cur.pos != cur.text.size()) cur.fail("trailing text in header");
      continue;
    }

    Cursor cur{line, 0, line_no};
    std::vector<std::string> key_parts = parse_key_path(cur);
    while (cur.pos < cur.text.size() && cur.text[cur.pos] == ' ') ++cur.pos;
    if (cur.pos >= cur.text.size() || cur.text[cur.pos] != '=') {
      cur.fail("expected '=' after key");
    }
    ++cur.pos;
    TomlValue value = parse_value(cur);
    std::string full =
        prefix.empty() ? join_path(key_parts)
                       : prefix + "." + join_path(key_parts);
    if (doc.entries_.count(full)) {
      throw ConfigError("toml line " + std::to_string(line_no) +
                        ": duplicate key '" + full + "'");
    }
    doc.entries_.emplace(std::move(full), std::move(value));
  }
  return doc;
}

bool TomlDocument::has(const std::string& path) const {
  return entries_.count(path) != 0;
}

std::string TomlDocument::get_string(const std::string& path) const {
  auto it = entries_.find(path);
  if (it == entries_.end()) throw ConfigError("missing toml key '" + path + "'");
  if (!it->second.is_string()) {
    throw ConfigError("toml key '" + path + "' is not a string");
  }
  return std::get<std::string>(it->second.value);
}

double TomlDocument::get_number(const std::string& path) const {
  auto it = entries_.find(path);
  if (it == entries_.end()) throw ConfigError("missing toml key '" + path + "'");
  if (!it->second.is_number()) {
    throw ConfigError("toml key '" + path + "' is not a number");
  }
  return std::get<double>(it->second.value);
}

bool TomlDocument::get_bool(const std::string& path) const {
  auto it = entries_.find(path);
  if (it == entries_.end()) throw ConfigError("missing toml key '" + path + "'");
  if (!it->second.is_bool()) {
    throw ConfigError("toml key '" + path + "' is not a boolean");
  }
  return std::get<bool>(it->second.value);
}

std::optional<double> TomlDocument::find_number(const std::string& path) const {
  auto it = entries_.find(path);
  if (it == entries_.end()) return std::nullopt;
  if (!it->second.is_number()) {
    throw ConfigError("toml key '" + path + "' is not a number");
  }
  return std::get<double>(it->second.value);
}

std::optional<std::string> TomlDocument::find_string(
    const std::string& path) const {
  auto it = entries_.find(path);
  if (it == entries_.end()) return std::nullopt;
  if (!it->second.is_string()) {
    throw ConfigError("toml key '" + path + "' is not a string");
  }
  return std::get<std::string>(it->second.value);
}

std::map<std::string, TomlValue> TomlDocument::section(
    const std::string& prefix) const {
  std::map<std::string, TomlValue> out;
  const std::string want = prefix + ".";
  for (const auto& [key, value] : entries_) {
    if (key.size() > want.size() && key.compare(0, want.size(), want) == 0) {
      out.emplace(key.substr(want.size()), value);
    }
  }
  return out;
}

std::string toml_quote_key(std::string_view part) {
  bool bare = !part.empty();
  for (char c : part) bare = bare && is_bare_key_char(c);
  if (bare) return std::string(part);
  return toml_quote_string(part);
}

std::string toml_quote_string(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

}  // namespace chemauto
