#include "fluct/config.hpp"

#include <cctype>
#include <stdexcept>

#include "fluct/csv.hpp"

namespace fluct {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

IniFile IniFile::parse_file(const std::string& path) { return parse(read_lines(path), path); }

IniFile IniFile::parse(const std::vector<std::string>& lines, const std::string& origin) {
  IniFile ini;
  std::string section;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string line = lines[i];
    const std::size_t comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(i + 1);
    if (line.front() == '[') {
      if (line.back() != ']') throw std::invalid_argument(where + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw std::invalid_argument(where + ": empty section name");
      ini.sections_[section];
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument(where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw std::invalid_argument(where + ": empty key");
    ini.sections_[section][key] = trim(line.substr(eq + 1));
  }
  return ini;
}

bool IniFile::has(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) > 0;
}

std::string IniFile::get(const std::string& section, const std::string& key,
                         const std::string& fallback) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return fallback;
  const auto k = s->second.find(key);
  return k == s->second.end() ? fallback : k->second;
}

double IniFile::get_double(const std::string& section, const std::string& key,
                           double fallback) const {
  if (!has(section, key)) return fallback;
  return parse_double(get(section, key), section + "." + key);
}

long long IniFile::get_int(const std::string& section, const std::string& key,
                           long long fallback) const {
  if (!has(section, key)) return fallback;
  return parse_int(get(section, key), section + "." + key);
}

std::vector<std::string> IniFile::get_list(const std::string& section,
                                           const std::string& key) const {
  std::vector<std::string> items;
  for (const std::string& raw : csv_split(get(section, key))) {
    const std::string item = trim(raw);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

std::vector<double> IniFile::get_double_list(const std::string& section,
                                             const std::string& key) const {
  std::vector<double> items;
  for (const std::string& item : get_list(section, key))
    items.push_back(parse_double(item, section + "." + key));
  return items;
}

}  // namespace fluct
