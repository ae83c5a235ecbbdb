#include <benchmark/benchmark.h>

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "rollscan/compositor.hpp"
#include "rollscan/mapping.hpp"
#include "rollscan/pipeline.hpp"
#include "rollscan/presets.hpp"
#include "rollscan/psychometrics.hpp"

using namespace rollscan;

namespace {

Mosaic random_mosaic(std::int32_t cols, std::int32_t rows, std::uint32_t seed) {
  Mosaic mosaic;
  mosaic.cols = cols;
  mosaic.rows = rows;
  mosaic.pattern = Mosaic::Pattern::rggb;
  mosaic.samples.resize(static_cast<std::size_t>(cols) * rows);
  std::mt19937 rng(seed);
  for (auto& s : mosaic.samples) s = static_cast<std::uint16_t>(rng() & 1023u);
  return mosaic;
}

std::vector<TrialRecord> session_trials() {
  std::vector<double> stimuli = sobol_sequence(30, 0.0, 25.0);
  const std::vector<double> focused = sobol_sequence(170, 6.0, 14.0);
  stimuli.insert(stimuli.end(), focused.begin(), focused.end());
  PsychometricFit truth;
  truth.alpha = 10.0;
  truth.beta = 0.5;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<TrialRecord> trials;
  trials.reserve(stimuli.size());
  for (double x : stimuli) trials.push_back({x, unit(rng) < psychometric_value(truth, x)});
  return trials;
}

}  // namespace

// Radial composition table plus the per-pixel source lookup for a whole raster.
static void BM_BuildMapping(benchmark::State& state) {
  const Camsicle72 preset = camsicle72(static_cast<std::int32_t>(state.range(0)));
  std::int64_t pixels = 0;
  for (auto _ : state) {
    const std::shared_ptr<const PixelMapping> m = preset.make_mapping();
    benchmark::DoNotOptimize(m->source_col.data());
    pixels = static_cast<std::int64_t>(m->display.cols) * m->display.rows;
  }
  state.SetItemsProcessed(state.iterations() * pixels);
}
BENCHMARK(BM_BuildMapping)->Arg(8)->Arg(4)->Arg(2)->Unit(benchmark::kMillisecond);

// Per-pixel slack evaluation across the display raster.
static void BM_BufferLatencyField(benchmark::State& state) {
  const Camsicle72 preset = camsicle72(static_cast<std::int32_t>(state.range(0)));
  const std::shared_ptr<const PixelMapping> mapping = preset.make_mapping();
  for (auto _ : state) {
    const LatencyField field = buffer_latency_field(*mapping, preset.camera, preset.display);
    benchmark::DoNotOptimize(field.stat_mean_ns);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(mapping->display.cols) *
                          mapping->display.rows);
}
BENCHMARK(BM_BufferLatencyField)->Arg(8)->Arg(4)->Arg(2)->Unit(benchmark::kMillisecond);

// Event-driven run in the shipped sliced configuration.
static void BM_SimulateSliced(benchmark::State& state) {
  const Camsicle72 preset = camsicle72(8);
  const PipelineConfig config = preset.make_pipeline();
  const std::int64_t frames = state.range(0);
  for (auto _ : state) {
    const SimTrace trace = simulate(config, frames, 1);
    benchmark::DoNotOptimize(trace.tear_count);
  }
  state.SetItemsProcessed(state.iterations() * frames);
}
BENCHMARK(BM_SimulateSliced)->Arg(3)->Arg(10)->Unit(benchmark::kMillisecond);

// Demosaic + warp + colour + gamma for one full display frame.
static void BM_CompositeFrame(benchmark::State& state) {
  const Camsicle72 preset = camsicle72(static_cast<std::int32_t>(state.range(0)));
  const std::shared_ptr<const PixelMapping> mapping = preset.make_mapping();
  const Mosaic mosaic = random_mosaic(mapping->camera.cols, mapping->camera.rows, 99);
  const ColorParams color;
  const RowWindow all{0, mosaic.rows - 1};
  for (auto _ : state) {
    const RgbImage out = composite_slice(*mapping, mosaic, color, 0, mapping->display.rows, all);
    benchmark::DoNotOptimize(out.rgb.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(mapping->display.cols) *
                          mapping->display.rows);
}
BENCHMARK(BM_CompositeFrame)->Arg(8)->Arg(4)->Unit(benchmark::kMillisecond);

// Grid seed plus two Nelder-Mead polishes over a 200-trial session.
static void BM_FitLogistic(benchmark::State& state) {
  const std::vector<TrialRecord> trials = session_trials();
  for (auto _ : state) {
    const PsychometricFit fit = fit_logistic(trials);
    benchmark::DoNotOptimize(fit.alpha);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(trials.size()));
}
BENCHMARK(BM_FitLogistic)->Unit(benchmark::kMillisecond);

// Monotonicity scan over a long timestamp stream with sparse tears.
static void BM_DetectTearing(benchmark::State& state) {
  std::vector<TimeNs> stamps(100'000);
  std::mt19937_64 rng(5);
  TimeNs t = 0;
  for (auto& s : stamps) {
    t += static_cast<TimeNs>(rng() % 1000);
    if ((rng() & 63u) == 0) t -= 400;  // occasional strict decrease
    s = t;
  }
  for (auto _ : state) {
    const std::vector<std::size_t> tears = detect_tearing(stamps);
    benchmark::DoNotOptimize(tears.size());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(stamps.size()));
}
BENCHMARK(BM_DetectTearing);

BENCHMARK_MAIN();
