#include "rollscan/scanout.hpp"

#include <string>

namespace rollscan {

namespace {

using int128 = __int128;

constexpr std::int64_t kPpb = 1'000'000'000;

std::int64_t to_ppb(double fraction) {
  // Fractions come from config text with at most 9 decimals; nearest ppb is exact.
  return static_cast<std::int64_t>(fraction * 1e9 + (fraction >= 0 ? 0.5 : -0.5));
}

}  // namespace

ScanSpec ScanSpec::camera(std::int32_t rows, TimeNs frame_period, TimeNs exposure,
                          TimeNs phase, TimeNs readout_delay,
                          double active_scan_fraction) {
  ScanSpec s;
  s.role = ScanRole::camera;
  s.rows = rows;
  s.frame_period = frame_period;
  s.integration = exposure;
  s.phase = phase;
  s.readout_delay = readout_delay;
  s.scan_fraction_ppb = to_ppb(active_scan_fraction);
  s.validate();
  return s;
}

ScanSpec ScanSpec::display(std::int32_t rows, TimeNs frame_period, TimeNs persistence,
                           TimeNs phase, double active_scan_fraction) {
  ScanSpec s;
  s.role = ScanRole::display;
  s.rows = rows;
  s.frame_period = frame_period;
  s.integration = persistence;
  s.phase = phase;
  s.scan_fraction_ppb = to_ppb(active_scan_fraction);
  s.validate();
  return s;
}

void ScanSpec::validate() const {
  if (rows <= 0) throw validation_error("scan spec: rows must be positive");
  if (frame_period <= 0) throw validation_error("scan spec: frame_period must be positive");
  if (integration < 0) throw validation_error("scan spec: integration must be >= 0");
  if (readout_delay < 0) throw validation_error("scan spec: readout_delay must be >= 0");
  if (scan_fraction_ppb <= 0 || scan_fraction_ppb > kPpb)
    throw validation_error("scan spec: active_scan_fraction must be in (0, 1]");
  if (integration >= frame_period)
    throw validation_error("scan spec: integration must be shorter than the frame period");
}

TimeNs ScanSpec::row_offset(std::int64_t row) const {
  if (row < 0) throw std::out_of_range("row_offset: negative row " + std::to_string(row));
  // offset = row * frame_period * fraction / rows, rounded to nearest nanosecond.
  const int128 num = int128(row) * int128(frame_period) * int128(scan_fraction_ppb);
  const int128 den = int128(rows) * int128(kPpb);
  return static_cast<TimeNs>((num + den / 2) / den);
}

TimeNs ScanSpec::scan_start(std::int64_t row, std::int64_t frame) const {
  return frame * frame_period + phase + row_offset(row);
}

double ScanSpec::row_period_ns() const {
  return static_cast<double>(frame_period) * active_scan_fraction() /
         static_cast<double>(rows);
}

namespace {

void check_row(const ScanSpec& spec, std::int64_t row, const char* what) {
  if (row < 0 || row >= spec.rows)
    throw std::out_of_range(std::string(what) + ": row " + std::to_string(row) +
                            " outside [0, " + std::to_string(spec.rows) + ")");
}

}  // namespace

RowTimes camera_row_times(const ScanSpec& spec, std::int64_t row, std::int64_t frame) {
  if (spec.role != ScanRole::camera)
    throw validation_error("camera_row_times: spec is not a camera");
  check_row(spec, row, "camera_row_times");
  RowTimes t;
  t.row = row;
  t.integration_start = spec.scan_start(row, frame);
  t.integration_mid = t.integration_start + round_div(spec.integration, 2);
  t.ready = t.integration_start + spec.integration + spec.readout_delay;
  return t;
}

TimeNs display_emit_start(const ScanSpec& spec, std::int64_t row, std::int64_t frame) {
  if (spec.role != ScanRole::display)
    throw validation_error("display_emit_start: spec is not a display");
  check_row(spec, row, "display_emit_start");
  return spec.scan_start(row, frame);
}

TimeNs display_emit_mid(const ScanSpec& spec, std::int64_t row, std::int64_t frame) {
  return display_emit_start(spec, row, frame) + round_div(spec.integration, 2);
}

std::int64_t rows_in_budget(const ScanSpec& spec, TimeNs budget) {
  if (budget < 0) throw validation_error("rows_in_budget: negative budget");
  // floor(budget / row_period) = floor(budget * rows * ppb / (frame_period * fraction)).
  const int128 num = int128(budget) * int128(spec.rows) * int128(1'000'000'000);
  const int128 den = int128(spec.frame_period) * int128(spec.scan_fraction_ppb);
  return static_cast<std::int64_t>(num / den);
}

}  // namespace rollscan
