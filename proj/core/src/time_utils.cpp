#include "rollscan/time_utils.hpp"

#include <cctype>
#include <cstdlib>

namespace rollscan {

TimeNs ms_to_ns(std::string_view s) {
  const std::string text(s);
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  std::int64_t whole = 0;
  std::size_t digits = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    whole = whole * 10 + (text[i] - '0');
    ++digits;
    ++i;
  }
  std::int64_t frac = 0;
  std::size_t frac_digits = 0;
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      if (frac_digits == 6)
        throw config_error("duration '" + text + "' has sub-nanosecond precision");
      frac = frac * 10 + (text[i] - '0');
      ++frac_digits;
      ++i;
    }
  }
  if (i != text.size() || (digits == 0 && frac_digits == 0))
    throw config_error("bad duration literal '" + text + "' (decimal milliseconds)");
  for (std::size_t k = frac_digits; k < 6; ++k) frac *= 10;
  const std::int64_t ns = whole * kNsPerMs + frac;
  return negative ? -ns : ns;
}

std::string ns_to_ms_string(TimeNs t) {
  const bool negative = t < 0;
  std::uint64_t v = negative ? -static_cast<std::uint64_t>(t) : static_cast<std::uint64_t>(t);
  std::string out = negative ? "-" : "";
  out += std::to_string(v / kNsPerMs);
  std::uint64_t frac = v % kNsPerMs;
  if (frac != 0) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%06llu", static_cast<unsigned long long>(frac));
    std::string digits(buf);
    while (!digits.empty() && digits.back() == '0') digits.pop_back();
    out += '.';
    out += digits;
  }
  return out;
}

TimeNs round_div(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw validation_error("round_div: denominator must be positive");
  if (num >= 0) return (num + den / 2) / den;
  return -((-num + den / 2) / den);
}

}  // namespace rollscan
