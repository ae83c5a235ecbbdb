#pragma once

#include <cstdint>
#include <vector>

#include "rollscan/distortion.hpp"
#include "rollscan/scanout.hpp"

namespace rollscan {

struct Dims {
  std::int32_t cols = 0;
  std::int32_t rows = 0;
};

struct Center {
  double col = 0.0;
  double row = 0.0;
};

// Display pixel -> continuous camera source coordinate, resolved through the two
// radial profiles: display radius -> field angle (display inverse) -> camera radius
// (camera forward), azimuth preserved. Pixels falling outside either valid field or
// off the sensor carry valid == 0.
struct PixelMapping {
  Dims display;
  Dims camera;
  Center display_center;
  Center camera_center;
  std::vector<float> source_col;  // display.cols * display.rows, row-major
  std::vector<float> source_row;
  std::vector<std::uint8_t> valid;

  std::size_t index(std::int32_t col, std::int32_t row) const {
    return static_cast<std::size_t>(row) * display.cols + col;
  }
  bool is_valid(std::int32_t col, std::int32_t row) const {
    return valid[index(col, row)] != 0;
  }
};

PixelMapping build_mapping(const DistortionProfile& camera_profile,
                           const DistortionProfile& display_profile, Dims display,
                           Dims camera, Center display_center, Center camera_center);

// Per display pixel: how long its source camera row sits ready before the display
// row has to be composited (render lead handled by the pipeline, not here):
//
//   value(p) = display_emit_start(row(p)) - camera_ready(ceil(source_row(p)))
//
// Negative values mean the camera row lands too late for a zero-lead compositor.
// Statistics are over valid pixels only.
struct LatencyField {
  std::int32_t cols = 0;
  std::int32_t rows = 0;
  std::vector<TimeNs> values;
  std::vector<std::uint8_t> valid;
  TimeNs stat_min = 0;
  TimeNs stat_max = 0;
  double stat_mean_ns = 0.0;

  static LatencyField create(std::int32_t cols, std::int32_t rows,
                             std::vector<TimeNs> values, std::vector<std::uint8_t> valid);
  // Same field with every valid value shifted by delta (stats recomputed).
  LatencyField shifted(TimeNs delta) const;

  std::size_t index(std::int32_t col, std::int32_t row) const {
    return static_cast<std::size_t>(row) * cols + col;
  }
};

LatencyField buffer_latency_field(const PixelMapping& mapping, const ScanSpec& camera,
                                  const ScanSpec& display);

// The smallest camera trigger advance that makes min(field + offset) == 0, i.e.
// -stat_min. Applying it as extra camera phase lead removes all negative slack.
TimeNs select_phase_offset(const LatencyField& field);

// Camera rows that must stay buffered ahead of compositing:
// ceil(stat_max / camera_row_period). Requires a phase-corrected field (min >= 0).
std::int64_t required_buffer(const LatencyField& field, const ScanSpec& camera);

}  // namespace rollscan
