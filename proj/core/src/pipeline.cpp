#include "rollscan/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace rollscan {

namespace {

using int128 = __int128;

// Uniform double in [0, 1) from the top 53 bits; uniform_real_distribution is
// implementation-defined, and traces must reproduce across standard libraries.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

TimeNs sample_dispatch(const JitterModel& jitter, std::mt19937_64& rng) {
  switch (jitter.kind) {
    case JitterModel::Kind::none:
      return jitter.base_dispatch;
    case JitterModel::Kind::uniform: {
      const double u = unit_uniform(rng);
      const auto span = static_cast<double>(jitter.worst_case - jitter.base_dispatch);
      return jitter.base_dispatch + static_cast<TimeNs>(std::llround(u * span));
    }
    case JitterModel::Kind::spike:
      return unit_uniform(rng) < jitter.spike_probability ? jitter.worst_case
                                                          : jitter.base_dispatch;
  }
  throw validation_error("jitter: bad kind");
}

// ceil(duration / camera row period) in exact integer arithmetic.
std::int64_t ceil_rows(TimeNs duration, const ScanSpec& camera) {
  if (duration <= 0) return 0;
  const int128 num = int128(duration) * int128(camera.rows) * int128(1'000'000'000);
  const int128 den = int128(camera.frame_period) * int128(camera.scan_fraction_ppb);
  return static_cast<std::int64_t>((num + den - 1) / den);
}

struct RowAggregates {
  // Highest source camera row any valid pixel of a display row needs (-1: none).
  std::vector<std::int64_t> max_source_row;
  std::vector<std::int64_t> ceil_source_row;  // per pixel
};

RowAggregates aggregate_rows(const PixelMapping& m) {
  RowAggregates agg;
  agg.max_source_row.assign(m.display.rows, -1);
  agg.ceil_source_row.assign(m.valid.size(), -1);
  for (std::int32_t row = 0; row < m.display.rows; ++row) {
    for (std::int32_t col = 0; col < m.display.cols; ++col) {
      const std::size_t i = m.index(col, row);
      if (!m.valid[i]) continue;
      const auto src = static_cast<std::int64_t>(
          std::ceil(static_cast<double>(m.source_row[i])));
      agg.ceil_source_row[i] = src;
      agg.max_source_row[row] = std::max(agg.max_source_row[row], src);
    }
  }
  return agg;
}

}  // namespace

void JitterModel::validate() const {
  if (base_dispatch < 0) throw validation_error("jitter: base_dispatch must be >= 0");
  if (kind != Kind::none && worst_case < base_dispatch)
    throw validation_error("jitter: worst_case must be >= base_dispatch");
  if (spike_probability < 0.0 || spike_probability > 1.0)
    throw validation_error("jitter: spike_probability must be in [0, 1]");
}

void PipelineConfig::validate() const {
  camera.validate();
  display.validate();
  jitter.validate();
  if (!mapping) throw validation_error("pipeline: no pixel mapping configured");
  if (mapping->display.rows != display.rows || mapping->camera.rows != camera.rows)
    throw validation_error("pipeline: mapping dimensions do not match scan specs");
  if (render_lead < 0) throw validation_error("pipeline: render_lead must be >= 0");
  if (phase_margin < 0) throw validation_error("pipeline: phase_margin must be >= 0");
  if (mode == Mode::sliced) {
    if (slice_budget <= 0) throw validation_error("pipeline: slice_budget must be positive");
    if (buffer_rows <= 0) throw validation_error("pipeline: buffer_rows must be positive");
  }
}

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::row_written: return "row_written";
    case EventKind::slice_dispatched: return "slice_dispatched";
    case EventKind::slice_completed: return "slice_completed";
    case EventKind::row_emitted: return "row_emitted";
    case EventKind::tear: return "tear";
  }
  return "unknown";
}

SimTrace simulate(const PipelineConfig& config, std::int64_t frames, std::uint64_t seed) {
  config.validate();
  if (frames <= 0) throw validation_error("simulate: frames must be positive");

  const PixelMapping& mapping = *config.mapping;
  const ScanSpec& display = config.display;

  // Resolve the camera trigger. auto_phase reproduces the tuning step done on
  // hardware: advance the trigger until the tightest pixel has render_lead plus a
  // safety margin of slack. The full-frame baseline models a pipeline without a
  // tuned trigger, so it always runs at the configured phase.
  ScanSpec camera = config.camera;
  TimeNs advance = -camera.phase;
  if (config.auto_phase && config.mode == PipelineConfig::Mode::sliced) {
    const LatencyField base = buffer_latency_field(mapping, config.camera, display);
    advance = select_phase_offset(base) + config.render_lead + config.phase_margin;
    camera.phase = config.camera.phase - advance;
  }

  const RowAggregates agg = aggregate_rows(mapping);
  std::mt19937_64 rng(seed);

  SimTrace trace;
  trace.camera_advance = advance;

  // Camera row readiness events (identical shape in both modes).
  for (std::int64_t f = 0; f < frames; ++f)
    for (std::int32_t r = 0; r < camera.rows; ++r)
      trace.events.push_back({camera_row_times(camera, r, f).ready,
                              EventKind::row_written, r, r + 1, f});

  // Which camera frame the front buffer holds for each display row, and which
  // frame each row's most recent emission actually showed; -1 stands for content
  // from before the run (one whole frame stale).
  std::vector<std::int64_t> buffer_frame(display.rows, -1);
  std::vector<std::int64_t> emitted_frame(display.rows, -1);
  std::int64_t final_display_frame = frames - 1;

  if (config.mode == PipelineConfig::Mode::sliced) {
    const std::int64_t slice_rows =
        std::max<std::int64_t>(1, rows_in_budget(display, config.slice_budget));
    const std::int64_t slices_per_frame = (display.rows + slice_rows - 1) / slice_rows;

    // Pre-run configuration checks, evaluated on frame 0 (timing is affine in the
    // frame index, so frame 0 bounds every frame).
    TimeNs max_retention = 0;
    for (std::int64_t s = 0; s < slices_per_frame; ++s) {
      const std::int32_t r0 = static_cast<std::int32_t>(s * slice_rows);
      const std::int32_t r1 =
          static_cast<std::int32_t>(std::min<std::int64_t>(r0 + slice_rows, display.rows));
      const TimeNs deadline = display.scan_start(r0, 0) - config.render_lead;
      for (std::int32_t r = r0; r < r1; ++r) {
        if (agg.max_source_row[r] < 0) continue;
        const TimeNs ready = camera.scan_start(agg.max_source_row[r], 0) +
                             camera.integration + camera.readout_delay;
        if (ready > deadline)
          throw validation_error(
              "pipeline: camera row " + std::to_string(agg.max_source_row[r]) +
              " not ready by the dispatch deadline of display row " + std::to_string(r) +
              "; increase the camera phase advance or reduce render_lead");
        // A row is read at its slice's dispatch; it has been sitting in the buffer
        // since it became ready.
        max_retention = std::max(max_retention, deadline - ready);
      }
    }
    const std::int64_t needed_rows = ceil_rows(max_retention, camera);
    if (needed_rows > config.buffer_rows)
      throw validation_error("pipeline: buffer_rows=" + std::to_string(config.buffer_rows) +
                             " cannot hold the " + std::to_string(needed_rows) +
                             " camera rows the mapping requires");

    TimeNs prev_completion = std::numeric_limits<TimeNs>::min();
    for (std::int64_t f = 0; f < frames; ++f) {
      for (std::int64_t s = 0; s < slices_per_frame; ++s) {
        const std::int32_t r0 = static_cast<std::int32_t>(s * slice_rows);
        const std::int32_t r1 = static_cast<std::int32_t>(
            std::min<std::int64_t>(r0 + slice_rows, display.rows));
        const TimeNs deadline = display.scan_start(r0, f) - config.render_lead;
        // Single compositor thread: a late slice delays the next dispatch.
        const TimeNs dispatch = std::max(deadline, prev_completion);
        const TimeNs completion = dispatch + sample_dispatch(config.jitter, rng);
        prev_completion = completion;
        trace.events.push_back({dispatch, EventKind::slice_dispatched, r0, r1, f});
        trace.events.push_back({completion, EventKind::slice_completed, r0, r1, f});

        // Rows whose emission starts before the slice landed keep showing the
        // previous frame's content; completion exactly at emission start makes the
        // scan. The slice still lands once complete, so the buffer holds frame f
        // afterwards either way.
        std::int32_t torn_end = r0;
        for (std::int32_t r = r0; r < r1; ++r) {
          const TimeNs emit_start = display.scan_start(r, f);
          trace.events.push_back({emit_start, EventKind::row_emitted, r, r + 1, f});
          if (completion > emit_start) {
            torn_end = r + 1;
            emitted_frame[r] = buffer_frame[r];
          } else {
            emitted_frame[r] = f;
          }
          buffer_frame[r] = f;
        }
        if (torn_end > r0) {
          trace.events.push_back(
              {display.scan_start(r0, f), EventKind::tear, r0, torn_end, f});
          trace.tear_count += torn_end - r0;
        }
      }
    }
  } else {
    // Naive full-frame baseline: wait for the whole camera frame, composite it,
    // and swap at the next display vsync after the composite lands. buffer_rows is
    // not consulted; the baseline is a classic whole-frame double buffer.
    TimeNs prev_completion = std::numeric_limits<TimeNs>::min();
    std::int64_t last_presented = -1;
    for (std::int64_t f = 0; f < frames; ++f) {
      const TimeNs frame_ready = camera.scan_start(camera.rows - 1, f) +
                                 camera.integration + camera.readout_delay;
      const TimeNs dispatch = std::max(frame_ready, prev_completion);
      const TimeNs completion = dispatch + sample_dispatch(config.jitter, rng);
      prev_completion = completion;
      trace.events.push_back({dispatch, EventKind::slice_dispatched, 0, display.rows, f});
      trace.events.push_back({completion, EventKind::slice_completed, 0, display.rows, f});
      // First display frame whose scan starts at or after the composite landed.
      const TimeNs rel = completion - display.phase;
      std::int64_t k = rel <= 0 ? 0
                                : (rel + display.frame_period - 1) / display.frame_period;
      k = std::max(k, last_presented + 1);
      last_presented = k;
      for (std::int32_t r = 0; r < display.rows; ++r)
        trace.events.push_back(
            {display.scan_start(r, k), EventKind::row_emitted, r, r + 1, f});
      if (f == frames - 1) {
        final_display_frame = k;
        std::fill(emitted_frame.begin(), emitted_frame.end(), f);
      }
    }
  }

  // Per-pixel end-to-end latency of the final simulated emission. A row torn in
  // the last frame showed the previous frame's content, which the arithmetic
  // reflects (scan_start is affine in the frame index, negative frames included).
  std::vector<TimeNs> latency(mapping.valid.size(), 0);
  for (std::int32_t row = 0; row < display.rows; ++row) {
    const TimeNs emit_mid = display_emit_mid(display, row, final_display_frame);
    const std::int64_t src_frame = emitted_frame[row];
    for (std::int32_t col = 0; col < mapping.display.cols; ++col) {
      const std::size_t i = mapping.index(col, row);
      if (!mapping.valid[i]) continue;
      const std::int64_t src_row = agg.ceil_source_row[i];
      const TimeNs integration_mid = camera.scan_start(src_row, src_frame) +
                                     round_div(camera.integration, 2);
      latency[i] = emit_mid - integration_mid;
    }
  }
  trace.per_pixel_latency = LatencyField::create(mapping.display.cols, display.rows,
                                                 std::move(latency), mapping.valid);

  std::stable_sort(trace.events.begin(), trace.events.end(),
                   [](const SimEvent& a, const SimEvent& b) {
                     if (a.time != b.time) return a.time < b.time;
                     if (a.kind != b.kind) return a.kind < b.kind;
                     if (a.frame != b.frame) return a.frame < b.frame;
                     return a.row_start < b.row_start;
                   });
  return trace;
}

std::vector<std::size_t> detect_tearing(std::span<const TimeNs> row_timestamps) {
  std::vector<std::size_t> torn;
  for (std::size_t i = 1; i < row_timestamps.size(); ++i)
    if (row_timestamps[i] < row_timestamps[i - 1]) torn.push_back(i);
  return torn;
}

TimeNs led_pulse_probe(const PipelineConfig& config, TimeNs pulse_time) {
  config.validate();
  const std::int32_t centre_row = config.display.rows / 2;
  // The centre row's content is locked at its dispatch deadline; treat the probed
  // row as opening a slice (slicing is computed on the fly around the beam).
  const TimeNs deadline0 = config.display.scan_start(centre_row, 0) - config.render_lead;
  std::int64_t frame = 0;
  if (pulse_time > deadline0) {
    const TimeNs fp = config.display.frame_period;
    frame = (pulse_time - deadline0 + fp - 1) / fp;
  }
  return display_emit_mid(config.display, centre_row, frame);
}

}  // namespace rollscan
