#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rollscan {

// All pipeline timing is carried as signed integer nanoseconds. The budgets in play
// are 0.1 ms and up, jitter is microsecond scale, so 1 ns quantisation is far below
// anything observable while keeping comparisons and file output exactly reproducible.
using TimeNs = std::int64_t;

inline constexpr TimeNs kNsPerUs = 1'000;
inline constexpr TimeNs kNsPerMs = 1'000'000;
inline constexpr TimeNs kNsPerSec = 1'000'000'000;

// Errors carry a category so the CLI can map them onto distinct exit codes.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parses a decimal millisecond literal ("13.8889", "-0.4") into exact nanoseconds.
// Configuration files carry durations as decimal milliseconds; parsing digit-wise
// instead of via double keeps e.g. 13.8889 ms == 13888900 ns exactly. Rejects more
// than six fractional digits (sub-nanosecond precision would silently truncate).
TimeNs ms_to_ns(std::string_view decimal_ms);

// Nanoseconds to milliseconds for reporting. Display only; never round-tripped.
inline double ns_to_ms(TimeNs t) { return static_cast<double>(t) / 1e6; }

// Formats nanoseconds as a decimal millisecond string with no trailing zeros
// ("1.6", "0.1", "13.8889"). Exact inverse of ms_to_ns.
std::string ns_to_ms_string(TimeNs t);

// round(num/den) to nearest, ties away from zero. den > 0.
TimeNs round_div(std::int64_t num, std::int64_t den);

}  // namespace rollscan
