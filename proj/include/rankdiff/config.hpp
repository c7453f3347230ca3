#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace rankdiff {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what, int line = 0);
  int line;  // 1-based source line; 0 when not tied to one
};

// INI-style run configuration: [section] headers, key = value pairs, full-line
// comments starting with '#' or ';'.  List values are comma separated.  Every
// key must be consumed by the command that loads the file; leftovers are
// reported so typos never pass silently.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text, const std::string& origin = "<inline>");

  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string_or(const std::string& section, const std::string& key,
                            const std::string& fallback) const;

  double get_double(const std::string& section, const std::string& key) const;
  double get_double_or(const std::string& section, const std::string& key, double fallback) const;

  long long get_int(const std::string& section, const std::string& key) const;
  long long get_int_or(const std::string& section, const std::string& key,
                       long long fallback) const;

  std::uint64_t get_uint64(const std::string& section, const std::string& key) const;
  std::uint64_t get_uint64_or(const std::string& section, const std::string& key,
                              std::uint64_t fallback) const;

  std::size_t get_size(const std::string& section, const std::string& key) const;
  std::size_t get_size_or(const std::string& section, const std::string& key,
                          std::size_t fallback) const;

  std::vector<double> get_double_list(const std::string& section, const std::string& key) const;
  std::vector<std::size_t> get_size_list(const std::string& section,
                                         const std::string& key) const;
  std::vector<std::string> get_string_list(const std::string& section,
                                           const std::string& key) const;

  // "section.key" entries that no getter ever touched
  std::vector<std::string> unconsumed() const;
  const std::string& origin() const { return origin_; }

 private:
  struct Entry {
    std::string value;
    int line = 0;
    mutable bool consumed = false;
  };

  const Entry* find(const std::string& section, const std::string& key) const;
  const Entry& require(const std::string& section, const std::string& key) const;

  std::map<std::string, Entry> entries_;  // keyed by "section.key"
  std::string origin_;
};

}  // namespace rankdiff
