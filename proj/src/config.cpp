#include "frontlab/config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "frontlab/error.hpp"

namespace frontlab {

std::string trim(std::string_view text) {
  std::size_t b = 0;
  std::size_t e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  return std::string(text.substr(b, e - b));
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == sep) {
      out.push_back(trim(text.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

double parse_double(std::string_view text, std::string_view what) {
  const std::string s = trim(text);
  if (s.empty()) fail(ErrorKind::InvalidConfig, std::string(what) + ": empty number");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (errno != 0 || end != s.c_str() + s.size()) {
    fail(ErrorKind::InvalidConfig, std::string(what) + ": not a number '" + s + "'");
  }
  return v;
}

long parse_long(std::string_view text, std::string_view what) {
  const std::string s = trim(text);
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || errno != 0 || end != s.c_str() + s.size()) {
    fail(ErrorKind::InvalidConfig, std::string(what) + ": not an integer '" + s + "'");
  }
  return v;
}

std::uint64_t parse_u64(std::string_view text, std::string_view what) {
  const std::string s = trim(text);
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || s[0] == '-' || errno != 0 || end != s.c_str() + s.size()) {
    fail(ErrorKind::InvalidConfig, std::string(what) + ": not an unsigned integer '" + s + "'");
  }
  return static_cast<std::uint64_t>(v);
}

std::vector<double> parse_doubles(std::string_view text, std::string_view what) {
  std::vector<double> out;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) out.push_back(parse_double(tok, what));
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ConfigFile ConfigFile::parse(std::string_view text) {
  ConfigFile cfg;
  std::string section;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) {
      if (nl == text.size()) break;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') {
        fail(ErrorKind::InvalidConfig, "line " + std::to_string(lineno) + ": malformed section header");
      }
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(ErrorKind::InvalidConfig, "line " + std::to_string(lineno) + ": expected key = value");
    }
    if (section.empty()) {
      fail(ErrorKind::InvalidConfig, "line " + std::to_string(lineno) + ": key outside of a section");
    }
    Entry e{section, trim(std::string_view(line).substr(0, eq)), trim(std::string_view(line).substr(eq + 1)),
            lineno};
    if (e.key.empty()) fail(ErrorKind::InvalidConfig, "line " + std::to_string(lineno) + ": empty key");
    cfg.entries_.push_back(std::move(e));
    if (nl == text.size()) break;
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidConfig, "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void ConfigFile::add(std::string section, std::string key, std::string value) {
  entries_.push_back(Entry{std::move(section), std::move(key), std::move(value), 0});
}

bool ConfigFile::has_section(std::string_view section) const {
  for (const auto& e : entries_) {
    if (e.section == section) return true;
  }
  return false;
}

std::optional<std::string> ConfigFile::get(std::string_view section, std::string_view key) const {
  std::optional<std::string> found;
  for (const auto& e : entries_) {
    if (e.section == section && e.key == key) found = e.value;
  }
  return found;
}

std::vector<std::string> ConfigFile::get_all(std::string_view section, std::string_view key) const {
  std::vector<std::string> out;
  for (const auto& e : entries_) {
    if (e.section == section && e.key == key) out.push_back(e.value);
  }
  return out;
}

std::string ConfigFile::require(std::string_view section, std::string_view key) const {
  auto v = get(section, key);
  if (!v) fail(ErrorKind::InvalidConfig, "missing [" + std::string(section) + "] " + std::string(key));
  return *v;
}

double ConfigFile::get_double(std::string_view section, std::string_view key, double fallback) const {
  auto v = get(section, key);
  return v ? parse_double(*v, std::string(section) + "." + std::string(key)) : fallback;
}

long ConfigFile::get_long(std::string_view section, std::string_view key, long fallback) const {
  auto v = get(section, key);
  return v ? parse_long(*v, std::string(section) + "." + std::string(key)) : fallback;
}

std::vector<double> ConfigFile::get_doubles(std::string_view section, std::string_view key) const {
  auto v = get(section, key);
  if (!v) return {};
  return parse_doubles(*v, std::string(section) + "." + std::string(key));
}

void ConfigFile::check_keys(std::string_view section, const std::vector<std::string_view>& allowed) const {
  for (const auto& e : entries_) {
    if (e.section != section) continue;
    bool ok = false;
    for (auto a : allowed) ok = ok || e.key == a;
    if (!ok) {
      fail(ErrorKind::InvalidConfig, "unknown key '" + e.key + "' in [" + e.section + "]");
    }
  }
}

std::string ConfigFile::to_string() const {
  std::string out;
  std::string section;
  for (const auto& e : entries_) {
    if (e.section != section) {
      if (!out.empty()) out += '\n';
      out += "[" + e.section + "]\n";
      section = e.section;
    }
    out += e.key + " = " + e.value + "\n";
  }
  return out;
}

}  // namespace frontlab
