#include "rankdiff/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace rankdiff {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    const std::size_t comma = value.find(',', start);
    const std::string piece =
        trim(comma == std::string::npos ? value.substr(start)
                                        : value.substr(start, comma - start));
    out.push_back(piece);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_double(const std::string& text, const std::string& where, int line) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw ConfigError(where + ": cannot parse '" + text + "' as a number", line);
  }
  return v;
}

long long parse_int(const std::string& text, const std::string& where, int line) {
  long long v = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw ConfigError(where + ": cannot parse '" + text + "' as an integer", line);
  }
  return v;
}

std::uint64_t parse_uint64(const std::string& text, const std::string& where, int line) {
  std::uint64_t v = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw ConfigError(where + ": cannot parse '" + text + "' as an unsigned integer", line);
  }
  return v;
}

}  // namespace

ConfigError::ConfigError(const std::string& what, int line_no)
    : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + what : what),
      line(line_no) {}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

Config Config::parse_string(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("unterminated section header", line_no);
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError("empty section name", line_no);
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected 'key = value' or a [section] header", line_no);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", line_no);
    if (value.empty()) throw ConfigError("empty value for key '" + key + "'", line_no);
    if (section.empty()) {
      throw ConfigError("key '" + key + "' appears before any [section] header", line_no);
    }
    const std::string id = section + "." + key;
    const auto existing = cfg.entries_.find(id);
    if (existing != cfg.entries_.end()) {
      throw ConfigError("duplicate key '" + id + "' (first set on line " +
                            std::to_string(existing->second.line) + ")",
                        line_no);
    }
    cfg.entries_[id] = Entry{value, line_no, false};
  }
  return cfg;
}

const Config::Entry* Config::find(const std::string& section, const std::string& key) const {
  const auto it = entries_.find(section + "." + key);
  if (it == entries_.end()) return nullptr;
  it->second.consumed = true;
  return &it->second;
}

const Config::Entry& Config::require(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  if (e == nullptr) {
    throw ConfigError("missing key '" + key + "' in section [" + section + "] of " + origin_);
  }
  return *e;
}

bool Config::has(const std::string& section, const std::string& key) const {
  return entries_.count(section + "." + key) != 0;
}

std::string Config::get_string(const std::string& section, const std::string& key) const {
  return require(section, key).value;
}

std::string Config::get_string_or(const std::string& section, const std::string& key,
                                  const std::string& fallback) const {
  const Entry* e = find(section, key);
  return e != nullptr ? e->value : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const {
  const Entry& e = require(section, key);
  return parse_double(e.value, section + "." + key, e.line);
}

double Config::get_double_or(const std::string& section, const std::string& key,
                             double fallback) const {
  const Entry* e = find(section, key);
  return e != nullptr ? parse_double(e->value, section + "." + key, e->line) : fallback;
}

long long Config::get_int(const std::string& section, const std::string& key) const {
  const Entry& e = require(section, key);
  return parse_int(e.value, section + "." + key, e.line);
}

long long Config::get_int_or(const std::string& section, const std::string& key,
                             long long fallback) const {
  const Entry* e = find(section, key);
  return e != nullptr ? parse_int(e->value, section + "." + key, e->line) : fallback;
}

std::uint64_t Config::get_uint64(const std::string& section, const std::string& key) const {
  const Entry& e = require(section, key);
  return parse_uint64(e.value, section + "." + key, e.line);
}

std::uint64_t Config::get_uint64_or(const std::string& section, const std::string& key,
                                    std::uint64_t fallback) const {
  const Entry* e = find(section, key);
  return e != nullptr ? parse_uint64(e->value, section + "." + key, e->line) : fallback;
}

std::size_t Config::get_size(const std::string& section, const std::string& key) const {
  const Entry& e = require(section, key);
  const long long v = parse_int(e.value, section + "." + key, e.line);
  if (v < 0) {
    throw ConfigError(section + "." + key + ": expected a nonnegative integer", e.line);
  }
  return static_cast<std::size_t>(v);
}

std::size_t Config::get_size_or(const std::string& section, const std::string& key,
                                std::size_t fallback) const {
  return has(section, key) ? get_size(section, key) : fallback;
}

std::vector<double> Config::get_double_list(const std::string& section,
                                            const std::string& key) const {
  const Entry& e = require(section, key);
  std::vector<double> out;
  for (const std::string& piece : split_list(e.value)) {
    if (piece.empty()) {
      throw ConfigError(section + "." + key + ": empty list element", e.line);
    }
    out.push_back(parse_double(piece, section + "." + key, e.line));
  }
  return out;
}

std::vector<std::size_t> Config::get_size_list(const std::string& section,
                                               const std::string& key) const {
  const Entry& e = require(section, key);
  std::vector<std::size_t> out;
  for (const std::string& piece : split_list(e.value)) {
    if (piece.empty()) {
      throw ConfigError(section + "." + key + ": empty list element", e.line);
    }
    const long long v = parse_int(piece, section + "." + key, e.line);
    if (v < 0) {
      throw ConfigError(section + "." + key + ": expected nonnegative integers", e.line);
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::vector<std::string> Config::get_string_list(const std::string& section,
                                                 const std::string& key) const {
  const Entry& e = require(section, key);
  std::vector<std::string> out;
  for (const std::string& piece : split_list(e.value)) {
    if (piece.empty()) {
      throw ConfigError(section + "." + key + ": empty list element", e.line);
    }
    out.push_back(piece);
  }
  return out;
}

std::vector<std::string> Config::unconsumed() const {
  std::vector<std::string> out;
  for (const auto& [id, entry] : entries_) {
    if (!entry.consumed) out.push_back(id);
  }
  return out;
}

}  // namespace rankdiff
