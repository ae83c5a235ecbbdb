#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "rollscan/scanout.hpp"

using namespace rollscan;

namespace {

// Reference row offset: round-half-away(row * frame_period / rows) for a full
// scan. 80-bit long double holds these products exactly (< 2^63), so llroundl is
// an independent exact oracle for the library's 128-bit rational rounding.
TimeNs oracle_offset(std::int64_t row, TimeNs frame_period, std::int64_t rows) {
  return static_cast<TimeNs>(
      llroundl(static_cast<long double>(row) * frame_period / rows));
}

const ScanSpec kDisplay = ScanSpec::display(3000, 13'888'889, 1'000'000);
const ScanSpec kCamera = ScanSpec::camera(3160, 13'888'889, 1'000'000);

}  // namespace

TEST_CASE("display emission times: first row, mid row, next frame") {
  CHECK(display_emit_mid(kDisplay, 0, 0) == 500'000);  // half the 1 ms persistence
  const TimeNs mid_row = display_emit_mid(kDisplay, 1500, 0);
  CHECK(mid_row == oracle_offset(1500, 13'888'889, 3000) + 500'000);
  CHECK(std::abs(ns_to_ms(mid_row) - 7.4444) < 5e-4);
  CHECK(display_emit_mid(kDisplay, 0, 1) == 13'888'889 + 500'000);  // 14.3889 ms
}

TEST_CASE("display emission is strictly increasing in row and frame") {
  TimeNs prev = display_emit_mid(kDisplay, 0, 0) - 1;
  for (std::int64_t row = 0; row < 3000; row += 17) {
    const TimeNs t = display_emit_mid(kDisplay, row, 0);
    CHECK(t > prev);
    prev = t;
  }
  CHECK(display_emit_mid(kDisplay, 2999, 0) < display_emit_mid(kDisplay, 0, 1));
}

TEST_CASE("camera row times: first and last row of the 72 Hz crop") {
  const RowTimes first = camera_row_times(kCamera, 0, 0);
  CHECK(first.integration_start == 0);
  CHECK(first.integration_mid == 500'000);
  CHECK(first.ready == 1'000'000);

  const RowTimes last = camera_row_times(kCamera, 3159, 0);
  const TimeNs start = oracle_offset(3159, 13'888'889, 3160);
  CHECK(last.integration_start == start);
  CHECK(last.integration_mid == start + 500'000);
  CHECK(last.ready == start + 1'000'000);
  CHECK(std::abs(ns_to_ms(last.integration_mid) - 14.3845) < 5e-4);
  CHECK(std::abs(ns_to_ms(last.ready) - 14.8845) < 5e-4);
}

TEST_CASE("integration midpoint halves odd integrations with round-half-away") {
  const ScanSpec odd = ScanSpec::camera(10, 1'000'000, 5);
  const RowTimes t = camera_row_times(odd, 0, 0);
  CHECK(t.integration_mid - t.integration_start == 3);  // round(2.5) away from zero
  CHECK(t.ready - t.integration_start == 5);
}

TEST_CASE("shifting phase shifts every time by exactly the same delta") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::int64_t> row_dist(0, 3159);
  std::uniform_int_distribution<std::int64_t> frame_dist(0, 50);
  std::uniform_int_distribution<TimeNs> delta_dist(-2'000'000, 2'000'000);
  for (int i = 0; i < 200; ++i) {
    const std::int64_t row = row_dist(rng);
    const std::int64_t frame = frame_dist(rng);
    const TimeNs delta = delta_dist(rng);
    ScanSpec shifted = kCamera;
    shifted.phase += delta;
    const RowTimes base = camera_row_times(kCamera, row, frame);
    const RowTimes moved = camera_row_times(shifted, row, frame);
    CHECK(moved.integration_start == base.integration_start + delta);
    CHECK(moved.integration_mid == base.integration_mid + delta);
    CHECK(moved.ready == base.ready + delta);
  }
  ScanSpec display_shifted = kDisplay;
  display_shifted.phase -= 400'000;
  CHECK(display_emit_mid(display_shifted, 1234, 3) ==
        display_emit_mid(kDisplay, 1234, 3) - 400'000);
}

TEST_CASE("row offsets track the exact rational row period") {
  // The real row period is frame_period / rows (not a whole nanosecond); offsets
  // must be the once-rounded exact value, so the accumulated drift never exceeds
  // half a nanosecond: |offset(r) * rows - r * frame_period| <= rows / 2.
  for (std::int64_t row = 0; row <= 3000; row += 7) {
    const auto lhs = static_cast<__int128>(kDisplay.row_offset(row)) * 3000;
    const auto rhs = static_cast<__int128>(row) * 13'888'889;
    const auto diff = lhs > rhs ? lhs - rhs : rhs - lhs;
    CHECK(static_cast<long long>(diff) * 2 <= 3000);
  }
  // Consecutive-row differences stay within one nanosecond of the exact period.
  const TimeNs floor_period = 13'888'889 / 3000;  // 4629
  for (std::int64_t row = 1; row < 3000; row += 13) {
    const TimeNs diff = kDisplay.row_offset(row) - kDisplay.row_offset(row - 1);
    CHECK(diff >= floor_period);
    CHECK(diff <= floor_period + 1);
  }
}

TEST_CASE("row offsets are exact when the row period is a whole nanosecond") {
  const ScanSpec even = ScanSpec::display(100, 1'000'000, 0);
  for (std::int64_t row = 1; row < 100; ++row)
    CHECK(even.row_offset(row) - even.row_offset(row - 1) == 10'000);
}

TEST_CASE("rows_in_budget worked examples") {
  CHECK(rows_in_budget(kDisplay, 100'000) == 21);  // 0.1 ms slice throttle
  CHECK(rows_in_budget(kDisplay, 0) == 0);
  CHECK(rows_in_budget(kDisplay, 13'888'889) == 3000);  // a whole frame
}

TEST_CASE("rows_in_budget is floor(budget / row_period) and monotone") {
  const ScanSpec even = ScanSpec::display(100, 1'000'000, 0);  // 10 us per row
  for (std::int64_t n = 0; n <= 100; n += 9) {
    CHECK(rows_in_budget(even, n * 10'000) == n);
    if (n > 0) CHECK(rows_in_budget(even, n * 10'000 - 1) == n - 1);
    CHECK(rows_in_budget(even, n * 10'000 + 9'999) == n);
  }
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<TimeNs> budget(0, 20'000'000);
  for (int i = 0; i < 200; ++i) {
    TimeNs a = budget(rng), b = budget(rng);
    if (a > b) std::swap(a, b);
    CHECK(rows_in_budget(kDisplay, a) <= rows_in_budget(kDisplay, b));
  }
}

TEST_CASE("partial-scan fraction shortens the active scan window") {
  const ScanSpec partial = ScanSpec::display(100, 1'000'000, 0, 0, 0.5);
  CHECK(partial.row_offset(100) == 500'000);  // scanning spans half the frame
  CHECK(rows_in_budget(partial, 10'000) == 2);  // rows are twice as fast
}

TEST_CASE("scan spec validation rejects out-of-range fields") {
  CHECK_THROWS_AS(ScanSpec::display(0, 13'888'889, 0), validation_error);
  CHECK_THROWS_AS(ScanSpec::display(3000, 0, 0), validation_error);
  CHECK_THROWS_AS(ScanSpec::display(3000, 13'888'889, -1), validation_error);
  CHECK_THROWS_AS(ScanSpec::display(3000, 13'888'889, 13'888'889), validation_error);
  CHECK_THROWS_AS(ScanSpec::display(3000, 13'888'889, 0, 0, 0.0), validation_error);
  CHECK_THROWS_AS(ScanSpec::display(3000, 13'888'889, 0, 0, 1.5), validation_error);
  CHECK_THROWS_AS(ScanSpec::camera(3160, 13'888'889, 1'000'000, 0, -5), validation_error);
}

TEST_CASE("row range and role mismatches are rejected") {
  CHECK_THROWS_AS(display_emit_mid(kDisplay, -1, 0), std::out_of_range);
  CHECK_THROWS_AS(display_emit_mid(kDisplay, 3000, 0), std::out_of_range);
  CHECK_THROWS_AS(camera_row_times(kCamera, 3160, 0), std::out_of_range);
  CHECK_THROWS_AS(camera_row_times(kDisplay, 0, 0), validation_error);
  CHECK_THROWS_AS(display_emit_mid(kCamera, 0, 0), validation_error);
  CHECK_THROWS_AS(rows_in_budget(kDisplay, -1), validation_error);
}
