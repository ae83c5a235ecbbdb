#include "rollscan/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace rollscan {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

ConfigFile ConfigFile::parse_string(std::string_view text, std::string origin) {
  ConfigFile cfg;
  cfg.origin_ = std::move(origin);
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = trim(text.substr(pos, eol - pos));
    ++line_no;
    pos = eol + 1;
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw config_error(cfg.origin_ + ":" + std::to_string(line_no) +
                           ": unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section.empty())
        throw config_error(cfg.origin_ + ":" + std::to_string(line_no) + ": empty section name");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw config_error(cfg.origin_ + ":" + std::to_string(line_no) +
                         ": expected key=value, got '" + std::string(line) + "'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty())
      throw config_error(cfg.origin_ + ":" + std::to_string(line_no) + ": empty key");
    if (cfg.find(section, key))
      throw config_error(cfg.origin_ + ":" + std::to_string(line_no) + ": duplicate key '" +
                         section + "." + key + "'");
    cfg.entries_.push_back({section, key, value, line_no, false});
  }
  return cfg;
}

void ConfigFile::set(std::string_view dotted_key, std::string_view value) {
  const std::size_t dot = dotted_key.find('.');
  if (dot == std::string_view::npos || dot == 0 || dot + 1 == dotted_key.size())
    throw config_error("override must look like section.key (got '" +
                       std::string(dotted_key) + "')");
  const std::string section(trim(dotted_key.substr(0, dot)));
  const std::string key(trim(dotted_key.substr(dot + 1)));
  for (Entry& e : entries_) {
    if (e.section == section && e.key == key) {
      e.value = std::string(trim(value));
      return;
    }
  }
  entries_.push_back({section, key, std::string(trim(value)), 0, false});
}

const ConfigFile::Entry* ConfigFile::find(std::string_view section, std::string_view key) const {
  for (const Entry& e : entries_)
    if (e.section == section && e.key == key) return &e;
  return nullptr;
}

bool ConfigFile::has(std::string_view section, std::string_view key) const {
  return find(section, key) != nullptr;
}

std::string ConfigFile::get_string(std::string_view section, std::string_view key) const {
  const Entry* e = find(section, key);
  if (!e)
    throw config_error(origin_ + ": missing required key '" + std::string(section) + "." +
                       std::string(key) + "'");
  e->used = true;
  return e->value;
}

std::string ConfigFile::get_string_or(std::string_view section, std::string_view key,
                                      std::string_view fallback) const {
  const Entry* e = find(section, key);
  if (!e) return std::string(fallback);
  e->used = true;
  return e->value;
}

namespace {

double parse_double(const std::string& value, const std::string& what) {
  double out = 0.0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc{} || ptr != end)
    throw config_error(what + ": not a number: '" + value + "'");
  return out;
}

std::int64_t parse_int(const std::string& value, const std::string& what) {
  std::int64_t out = 0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc{} || ptr != end)
    throw config_error(what + ": not an integer: '" + value + "'");
  return out;
}

}  // namespace

double ConfigFile::get_double(std::string_view section, std::string_view key) const {
  return parse_double(get_string(section, key),
                      std::string(section) + "." + std::string(key));
}

double ConfigFile::get_double_or(std::string_view section, std::string_view key,
                                 double fallback) const {
  if (!has(section, key)) return fallback;
  return get_double(section, key);
}

std::int64_t ConfigFile::get_int(std::string_view section, std::string_view key) const {
  return parse_int(get_string(section, key), std::string(section) + "." + std::string(key));
}

std::int64_t ConfigFile::get_int_or(std::string_view section, std::string_view key,
                                    std::int64_t fallback) const {
  if (!has(section, key)) return fallback;
  return get_int(section, key);
}

bool ConfigFile::get_bool_or(std::string_view section, std::string_view key,
                             bool fallback) const {
  if (!has(section, key)) return fallback;
  const std::string v = get_string(section, key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw config_error(std::string(section) + "." + std::string(key) + ": not a boolean: '" +
                     v + "'");
}

TimeNs ConfigFile::get_duration_ms(std::string_view section, std::string_view key) const {
  const std::string v = get_string(section, key);
  try {
    return ms_to_ns(v);
  } catch (const config_error& e) {
    throw config_error(std::string(section) + "." + std::string(key) + ": " + e.what());
  }
}

TimeNs ConfigFile::get_duration_ms_or(std::string_view section, std::string_view key,
                                      TimeNs fallback) const {
  if (!has(section, key)) return fallback;
  return get_duration_ms(section, key);
}

void ConfigFile::require_consumed() const {
  for (const Entry& e : entries_) {
    if (!e.used)
      throw config_error(origin_ + (e.line ? ":" + std::to_string(e.line) : "") +
                         ": unknown key '" + e.section + "." + e.key + "'");
  }
}

}  // namespace rollscan
