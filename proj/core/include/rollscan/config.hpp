#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rollscan/time_utils.hpp"

namespace rollscan {

// Flat sectioned key=value text config. '#' and ';' start comments, blank lines
// are ignored, values keep interior whitespace. Strict by design: duplicate keys
// and - once require_consumed() runs - unrecognised keys are errors naming the
// offending line, so a typo cannot silently fall back to a default.
class ConfigFile {
 public:
  ConfigFile() = default;
  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_string(std::string_view text, std::string origin = "<config>");

  // "section.key=value" overrides (CLI --set); creates or replaces the entry.
  void set(std::string_view dotted_key, std::string_view value);

  bool has(std::string_view section, std::string_view key) const;
  std::string get_string(std::string_view section, std::string_view key) const;
  std::string get_string_or(std::string_view section, std::string_view key,
                            std::string_view fallback) const;
  double get_double(std::string_view section, std::string_view key) const;
  double get_double_or(std::string_view section, std::string_view key, double fallback) const;
  std::int64_t get_int(std::string_view section, std::string_view key) const;
  std::int64_t get_int_or(std::string_view section, std::string_view key,
                          std::int64_t fallback) const;
  bool get_bool_or(std::string_view section, std::string_view key, bool fallback) const;
  // Durations are written in milliseconds ("0.2", "13.888889") and parsed exactly.
  TimeNs get_duration_ms(std::string_view section, std::string_view key) const;
  TimeNs get_duration_ms_or(std::string_view section, std::string_view key,
                            TimeNs fallback) const;

  // Throws config_error on the first entry never touched by a getter.
  void require_consumed() const;

 private:
  struct Entry {
    std::string section, key, value;
    int line = 0;
    mutable bool used = false;
  };
  const Entry* find(std::string_view section, std::string_view key) const;
  std::vector<Entry> entries_;
  std::string origin_;
};

}  // namespace rollscan
