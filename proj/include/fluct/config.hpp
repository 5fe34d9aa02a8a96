#pragma once

#include <map>
#include <string>
#include <vector>

namespace fluct {

// Minimal INI reader: [section] headers, key = value lines, '#' or ';'
// comments (full-line or trailing), surrounding whitespace trimmed. Keys
// before the first section header live in the unnamed section "".
class IniFile {
 public:
  static IniFile parse_file(const std::string& path);
  static IniFile parse(const std::vector<std::string>& lines, const std::string& origin);

  bool has(const std::string& section, const std::string& key) const;

  // Typed getters fall back to the default when the key is absent and throw
  // std::runtime_error (with section.key context) on malformed values.
  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback = "") const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  long long get_int(const std::string& section, const std::string& key, long long fallback) const;

  // Comma-separated list, items trimmed, empty items dropped.
  std::vector<std::string> get_list(const std::string& section, const std::string& key) const;
  std::vector<double> get_double_list(const std::string& section, const std::string& key) const;

  const std::map<std::string, std::map<std::string, std::string>>& sections() const {
    return sections_;
  }

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

std::string trim(const std::string& s);

}  // namespace fluct
