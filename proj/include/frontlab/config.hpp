#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace frontlab {

/// Flat sectioned key=value text: `[section]` headers, `key = value` lines,
/// `#` comments. Keys may repeat within a section (used for mode lists).
/// Entry order is preserved.
class ConfigFile {
 public:
  struct Entry {
    std::string section;
    std::string key;
    std::string value;
    int line = 0;
  };

  static ConfigFile parse(std::string_view text);
  static ConfigFile load(const std::string& path);

  void add(std::string section, std::string key, std::string value);

  [[nodiscard]] bool has_section(std::string_view section) const;
  [[nodiscard]] std::optional<std::string> get(std::string_view section, std::string_view key) const;
  [[nodiscard]] std::vector<std::string> get_all(std::string_view section, std::string_view key) const;
  [[nodiscard]] const std::vector<Entry>& entries() const { return entries_; }

  [[nodiscard]] std::string require(std::string_view section, std::string_view key) const;
  [[nodiscard]] double get_double(std::string_view section, std::string_view key, double fallback) const;
  [[nodiscard]] long get_long(std::string_view section, std::string_view key, long fallback) const;
  [[nodiscard]] std::vector<double> get_doubles(std::string_view section, std::string_view key) const;

  /// Rejects keys outside `allowed` for the given section (typo guard).
  void check_keys(std::string_view section, const std::vector<std::string_view>& allowed) const;

  [[nodiscard]] std::string to_string() const;

 private:
  std::vector<Entry> entries_;
};

// Strict scalar parsing helpers; throw InvalidConfig with context on failure.
double parse_double(std::string_view text, std::string_view what);
long parse_long(std::string_view text, std::string_view what);
std::uint64_t parse_u64(std::string_view text, std::string_view what);
std::vector<double> parse_doubles(std::string_view text, std::string_view what);
std::vector<std::string> split(std::string_view text, char sep);
std::string trim(std::string_view text);

/// "%.17g" formatting used for every serialized float.
std::string format_double(double v);

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace frontlab
