#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "rollscan/mapping.hpp"
#include "rollscan/scanout.hpp"

namespace rollscan {

// Dispatch-time jitter drawn per slice dispatch from the simulation's seeded
// mt19937_64. uniform draws from [base_dispatch, worst_case]; spike returns
// base_dispatch except with spike_probability, when it returns worst_case (a
// scheduler preemption).
struct JitterModel {
  enum class Kind { none, uniform, spike };
  Kind kind = Kind::none;
  TimeNs base_dispatch = 0;
  TimeNs worst_case = 0;
  double spike_probability = 0.0;

  void validate() const;
};

struct PipelineConfig {
  ScanSpec camera;
  ScanSpec display;
  std::shared_ptr<const PixelMapping> mapping;
  TimeNs render_lead = 0;
  TimeNs slice_budget = 0;  // sets slice height via rows_in_budget
  std::int64_t buffer_rows = 0;
  enum class Mode { sliced, full_frame } mode = Mode::sliced;
  JitterModel jitter;
  // When set, the simulator advances the camera trigger by
  // select_phase_offset(field) + render_lead + phase_margin so every slice's source
  // rows are ready at dispatch with a safety margin, mirroring how the phase knob is
  // tuned on hardware. When false the configured camera phase is used as-is.
  bool auto_phase = true;
  TimeNs phase_margin = 150 * kNsPerUs;

  void validate() const;
};

enum class EventKind : std::uint8_t {
  row_written,       // camera row became readable; [row_start, row_end) camera rows
  slice_dispatched,  // compositor started a slice; rows are display rows
  slice_completed,   // compositor finished writing the slice
  row_emitted,       // display row began emission
  tear,              // rows emitted before their slice completed (stale content)
};

const char* to_string(EventKind kind);

struct SimEvent {
  TimeNs time = 0;
  EventKind kind = EventKind::row_written;
  std::int32_t row_start = 0;  // inclusive
  std::int32_t row_end = 0;    // exclusive
  std::int64_t frame = 0;
};

struct SimTrace {
  std::vector<SimEvent> events;  // sorted by (time, kind, frame, row_start)
  // End-to-end display-emission-midpoint minus camera-integration-midpoint for the
  // content each display pixel actually shows in the final simulated frame.
  LatencyField per_pixel_latency;
  std::int64_t tear_count = 0;  // torn display-row instances across the whole run
  TimeNs camera_advance = 0;    // trigger advance applied (auto_phase or -phase)
  double mean_latency_ms() const { return per_pixel_latency.stat_mean_ns / 1e6; }
};

// Event-driven simulation of `frames` frames. Deterministic: the same config,
// frame count and seed produce an identical trace, byte for byte.
SimTrace simulate(const PipelineConfig& config, std::int64_t frames, std::uint64_t seed);

// Indices whose timestamp is lower than their predecessor's. Row timestamps out of
// a soundly synchronised scan buffer are non-decreasing, so any decrease marks a
// torn read (content from a previous frame beyond that point).
std::vector<std::size_t> detect_tearing(std::span<const TimeNs> row_timestamps);

// Emission midpoint at which a pulse injected at pulse_time becomes visible on the
// display-centre row. The row's content is locked render_lead before its emission
// starts; a pulse arriving at or before that deadline rides the current scan,
// anything later waits a full frame. Models the flashing-LED latency probe.
TimeNs led_pulse_probe(const PipelineConfig& config, TimeNs pulse_time);

}  // namespace rollscan
