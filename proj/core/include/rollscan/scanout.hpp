#pragma once

#include <cstdint>

#include "rollscan/time_utils.hpp"

namespace rollscan {

enum class ScanRole { camera, display };

// Timing model of one rolling scan: a camera sensor reading out top-to-bottom, or a
// display emitting top-to-bottom. Row r of frame f starts its integration (camera)
// or emission (display) at
//
//     frame * frame_period + phase + row_offset(row)
//
// where row_offset is row * row_period and row_period = frame_period *
// active_scan_fraction / rows. Row periods are rarely whole nanoseconds, so offsets
// are evaluated as exact 128-bit rationals and rounded once to the nearest
// nanosecond; everything downstream is plain integer arithmetic.
struct ScanSpec {
  ScanRole role = ScanRole::camera;
  std::int32_t rows = 0;
  TimeNs frame_period = 0;
  // Integration window per row: exposure for a camera, persistence for a display.
  TimeNs integration = 0;
  TimeNs phase = 0;
  // Camera only: delay between end of exposure and the row being readable.
  TimeNs readout_delay = 0;
  // Fraction of the frame period spent actively scanning rows, held in
  // parts-per-billion so row offsets stay exact (1.0 -> 1'000'000'000).
  std::int64_t scan_fraction_ppb = 1'000'000'000;

  static ScanSpec camera(std::int32_t rows, TimeNs frame_period, TimeNs exposure,
                         TimeNs phase = 0, TimeNs readout_delay = 0,
                         double active_scan_fraction = 1.0);
  static ScanSpec display(std::int32_t rows, TimeNs frame_period, TimeNs persistence,
                          TimeNs phase = 0, double active_scan_fraction = 1.0);

  // Nearest-nanosecond offset of `row` from the frame's scan start. Accepts any
  // non-negative row index (timing is affine past the last physical row, which the
  // buffer maths relies on when a mapped source row rounds up to rows).
  TimeNs row_offset(std::int64_t row) const;
  // Start of row `row` in frame `frame` (integration start / emission start).
  TimeNs scan_start(std::int64_t row, std::int64_t frame) const;

  double row_period_ns() const;
  double active_scan_fraction() const {
    return static_cast<double>(scan_fraction_ppb) / 1e9;
  }

  void validate() const;
};

// Per-row camera times. `ready` is when the row's pixels can be consumed
// downstream; for a display spec, ready coincides with emission start.
struct RowTimes {
  std::int64_t row = 0;
  TimeNs integration_start = 0;
  TimeNs integration_mid = 0;
  TimeNs ready = 0;
};

RowTimes camera_row_times(const ScanSpec& spec, std::int64_t row, std::int64_t frame);

// Start / midpoint of a display row's persistence window.
TimeNs display_emit_start(const ScanSpec& spec, std::int64_t row, std::int64_t frame);
TimeNs display_emit_mid(const ScanSpec& spec, std::int64_t row, std::int64_t frame);

// How many whole rows scan out within `budget`: floor(budget / row_period).
// This is what turns a compositor time budget into a slice height.
std::int64_t rows_in_budget(const ScanSpec& spec, TimeNs budget);

}  // namespace rollscan
