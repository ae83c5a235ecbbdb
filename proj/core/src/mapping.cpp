#include "rollscan/mapping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rollscan {

namespace {

using int128 = __int128;

// Radial composition display_radius -> camera_radius, densely tabulated once so the
// per-pixel loop is a lookup instead of a bisection. Step of an eighth of a pixel
// keeps linear-interpolation error orders of magnitude under the 0.01 px round-trip
// budget (the composed curve's curvature is gentle for physical lens pairs).
class RadialComposer {
 public:
  RadialComposer(const DistortionProfile& camera, const DistortionProfile& display,
                 double max_display_radius) {
    max_in_ = std::min(max_display_radius, display.max_radius());
    const double step = 0.125;
    const std::size_t n = static_cast<std::size_t>(max_in_ / step) + 2;
    table_.resize(n);
    step_ = max_in_ / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      const double r_d = step_ * static_cast<double>(i);
      const double theta = display.angle_at(std::min(r_d, max_in_));
      table_[i] = theta <= camera.max_angle ? camera.radius_at(theta)
                                            : std::numeric_limits<double>::quiet_NaN();
    }
  }

  // Returns NaN when the radius leaves either profile's valid field.
  double camera_radius(double display_radius) const {
    if (display_radius > max_in_) return std::numeric_limits<double>::quiet_NaN();
    const double pos = display_radius / step_;
    const std::size_t i = std::min(static_cast<std::size_t>(pos), table_.size() - 2);
    const double t = pos - static_cast<double>(i);
    return table_[i] + t * (table_[i + 1] - table_[i]);
  }

 private:
  double max_in_ = 0.0;
  double step_ = 0.0;
  std::vector<double> table_;
};

}  // namespace

PixelMapping build_mapping(const DistortionProfile& camera_profile,
                           const DistortionProfile& display_profile, Dims display,
                           Dims camera, Center display_center, Center camera_center) {
  if (display.cols <= 0 || display.rows <= 0 || camera.cols <= 0 || camera.rows <= 0)
    throw validation_error("build_mapping: dimensions must be positive");
  camera_profile.validate();
  display_profile.validate();

  PixelMapping m;
  m.display = display;
  m.camera = camera;
  m.display_center = display_center;
  m.camera_center = camera_center;
  const std::size_t n = static_cast<std::size_t>(display.cols) * display.rows;
  m.source_col.resize(n);
  m.source_row.resize(n);
  m.valid.resize(n);

  const double corner_dx = std::max(display_center.col, display.cols - 1 - display_center.col);
  const double corner_dy = std::max(display_center.row, display.rows - 1 - display_center.row);
  const double max_radius = std::hypot(corner_dx, corner_dy);
  const RadialComposer composer(camera_profile, display_profile, max_radius);

  for (std::int32_t row = 0; row < display.rows; ++row) {
    for (std::int32_t col = 0; col < display.cols; ++col) {
      const std::size_t i = m.index(col, row);
      const double dx = col - display_center.col;
      const double dy = row - display_center.row;
      const double r_d = std::hypot(dx, dy);
      double sx, sy;
      if (r_d == 0.0) {
        sx = camera_center.col;
        sy = camera_center.row;
      } else {
        const double r_c = composer.camera_radius(r_d);
        if (!std::isfinite(r_c)) {
          m.valid[i] = 0;
          m.source_col[i] = -1.0f;
          m.source_row[i] = -1.0f;
          continue;
        }
        const double scale = r_c / r_d;
        sx = camera_center.col + dx * scale;
        sy = camera_center.row + dy * scale;
      }
      // Rounding in the radial table can push a source that lies exactly on the
      // sensor edge a few ulp past it; anything within a millionth of a pixel of
      // the edge counts as on it, so edge validity is not rounding-dependent.
      constexpr double kEdgeTol = 1e-6;
      const double max_x = camera.cols - 1.0;
      const double max_y = camera.rows - 1.0;
      const bool inside = sx >= -kEdgeTol && sx <= max_x + kEdgeTol &&
                          sy >= -kEdgeTol && sy <= max_y + kEdgeTol;
      m.valid[i] = inside ? 1 : 0;
      m.source_col[i] = static_cast<float>(inside ? std::clamp(sx, 0.0, max_x) : sx);
      m.source_row[i] = static_cast<float>(inside ? std::clamp(sy, 0.0, max_y) : sy);
    }
  }
  return m;
}

LatencyField LatencyField::create(std::int32_t cols, std::int32_t rows,
                                  std::vector<TimeNs> values,
                                  std::vector<std::uint8_t> valid) {
  if (values.size() != static_cast<std::size_t>(cols) * rows ||
      valid.size() != values.size())
    throw validation_error("LatencyField: size mismatch");
  LatencyField f;
  f.cols = cols;
  f.rows = rows;
  f.values = std::move(values);
  f.valid = std::move(valid);
  TimeNs lo = std::numeric_limits<TimeNs>::max();
  TimeNs hi = std::numeric_limits<TimeNs>::min();
  long double sum = 0.0L;
  std::size_t count = 0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (!f.valid[i]) continue;
    lo = std::min(lo, f.values[i]);
    hi = std::max(hi, f.values[i]);
    sum += static_cast<long double>(f.values[i]);
    ++count;
  }
  if (count == 0) throw validation_error("LatencyField: no valid pixels");
  f.stat_min = lo;
  f.stat_max = hi;
  f.stat_mean_ns = static_cast<double>(sum / static_cast<long double>(count));
  return f;
}

LatencyField LatencyField::shifted(TimeNs delta) const {
  std::vector<TimeNs> v = values;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (valid[i]) v[i] += delta;
  return create(cols, rows, std::move(v), valid);
}

LatencyField buffer_latency_field(const PixelMapping& mapping, const ScanSpec& camera,
                                  const ScanSpec& display) {
  if (camera.role != ScanRole::camera || display.role != ScanRole::display)
    throw validation_error("buffer_latency_field: need a camera and a display spec");
  if (mapping.display.rows != display.rows)
    throw validation_error("buffer_latency_field: mapping rows (" +
                           std::to_string(mapping.display.rows) +
                           ") do not match display spec rows (" +
                           std::to_string(display.rows) + ")");
  if (mapping.camera.rows != camera.rows)
    throw validation_error("buffer_latency_field: mapping camera rows do not match spec");

  // Camera ready times for every possible source row, frame 0. ceil(source_row) can
  // legitimately reach `rows` for sub-pixel coordinates just past the last row
  // center; timing is affine so evaluating one row past the end is well defined.
  std::vector<TimeNs> ready(static_cast<std::size_t>(camera.rows) + 1);
  for (std::int64_t r = 0; r <= camera.rows; ++r)
    ready[static_cast<std::size_t>(r)] =
        camera.scan_start(r, 0) + camera.integration + camera.readout_delay;

  std::vector<TimeNs> values(mapping.valid.size(), 0);
  for (std::int32_t row = 0; row < mapping.display.rows; ++row) {
    const TimeNs emit_start = display.scan_start(row, 0);
    for (std::int32_t col = 0; col < mapping.display.cols; ++col) {
      const std::size_t i = mapping.index(col, row);
      if (!mapping.valid[i]) continue;
      const auto src_row =
          static_cast<std::int64_t>(std::ceil(static_cast<double>(mapping.source_row[i])));
      values[i] = emit_start - ready[static_cast<std::size_t>(src_row)];
    }
  }
  return LatencyField::create(mapping.display.cols, mapping.display.rows,
                              std::move(values), mapping.valid);
}

TimeNs select_phase_offset(const LatencyField& field) { return -field.stat_min; }

std::int64_t required_buffer(const LatencyField& field, const ScanSpec& camera) {
  if (field.stat_min < 0)
    throw validation_error("required_buffer: field has negative slack; apply the phase offset first");
  // ceil(stat_max / row_period) in exact integer arithmetic.
  const int128 num = int128(field.stat_max) * int128(camera.rows) * int128(1'000'000'000);
  const int128 den = int128(camera.frame_period) * int128(camera.scan_fraction_ppb);
  return static_cast<std::int64_t>((num + den - 1) / den);
}

}  // namespace rollscan
