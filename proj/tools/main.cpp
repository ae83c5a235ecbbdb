// rollscan: deterministic rolling-scan passthrough simulator and analysis tool.
#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "rollscan/config.hpp"
#include "rollscan/io.hpp"
#include "rollscan/presets.hpp"
#include "rollscan/psychometrics.hpp"
#include "rollscan/time_utils.hpp"

namespace fs = std::filesystem;
using namespace rollscan;

namespace {

constexpr double kDegPerRad = 180.0 / std::numbers::pi;

struct CommonOpts {
  std::string preset = "camsicle72";
  std::int32_t scale = 8;
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
};

ConfigFile load_config(const CommonOpts& opts) {
  ConfigFile cfg;
  if (!opts.config_path.empty()) cfg = ConfigFile::parse_file(opts.config_path);
  for (const std::string& kv : opts.overrides) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos)
      throw config_error("--set expects section.key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

DistortionProfile profile_from_config(const ConfigFile& cfg, const std::string& section,
                                      const DistortionProfile& fallback) {
  if (!cfg.has(section, "kind")) return fallback;
  const std::string kind = cfg.get_string(section, "kind");
  const double max_angle = cfg.get_double_or(section, "max_angle_rad", 1.5);
  if (kind == "identity") return DistortionProfile::identity(max_angle);
  const double focal = cfg.get_double(section, "focal_scale");
  if (kind == "equidistant_fisheye") return DistortionProfile::fisheye(focal, max_angle);
  if (kind == "radial_polynomial") {
    std::vector<double> coeffs;
    std::istringstream in(cfg.get_string(section, "coefficients"));
    double c;
    while (in >> c) coeffs.push_back(c);
    if (coeffs.empty()) throw config_error(section + ".coefficients: empty");
    return DistortionProfile::polynomial(focal, coeffs, max_angle);
  }
  throw config_error(section + ".kind: unknown profile '" + kind + "'");
}

// Preset plus config-file/--set overrides; the config schema mirrors the struct
// fields, durations in milliseconds.
PipelineConfig build_pipeline(const CommonOpts& opts, ConfigFile& cfg) {
  if (opts.preset != "camsicle72")
    throw config_error("unknown preset '" + opts.preset + "' (available: camsicle72)");
  Camsicle72 preset = camsicle72(opts.scale);

  ScanSpec& cam = preset.camera;
  cam.frame_period = cfg.get_duration_ms_or("camera", "frame_period_ms", cam.frame_period);
  cam.integration = cfg.get_duration_ms_or("camera", "exposure_ms", cam.integration);
  cam.phase = cfg.get_duration_ms_or("camera", "phase_ms", cam.phase);
  cam.readout_delay = cfg.get_duration_ms_or("camera", "readout_ms", cam.readout_delay);

  ScanSpec& disp = preset.display;
  disp.frame_period = cfg.get_duration_ms_or("display", "frame_period_ms", disp.frame_period);
  disp.integration = cfg.get_duration_ms_or("display", "persistence_ms", disp.integration);
  disp.phase = cfg.get_duration_ms_or("display", "phase_ms", disp.phase);

  preset.camera_profile = profile_from_config(cfg, "camera_lens", preset.camera_profile);
  preset.display_profile = profile_from_config(cfg, "display_lens", preset.display_profile);

  PipelineConfig config = preset.make_pipeline();
  config.render_lead = cfg.get_duration_ms_or("pipeline", "render_lead_ms", config.render_lead);
  config.slice_budget = cfg.get_duration_ms_or("pipeline", "slice_budget_ms", config.slice_budget);
  config.buffer_rows = cfg.get_int_or("pipeline", "buffer_rows", config.buffer_rows);
  config.auto_phase = cfg.get_bool_or("pipeline", "auto_phase", config.auto_phase);
  config.phase_margin = cfg.get_duration_ms_or("pipeline", "phase_margin_ms", config.phase_margin);
  const std::string mode = cfg.get_string_or("pipeline", "mode", "sliced");
  if (mode == "sliced") config.mode = PipelineConfig::Mode::sliced;
  else if (mode == "full_frame") config.mode = PipelineConfig::Mode::full_frame;
  else throw config_error("pipeline.mode: expected sliced or full_frame, got '" + mode + "'");

  const std::string jitter = cfg.get_string_or("jitter", "kind", "none");
  if (jitter == "none") config.jitter.kind = JitterModel::Kind::none;
  else if (jitter == "uniform") config.jitter.kind = JitterModel::Kind::uniform;
  else if (jitter == "spike") config.jitter.kind = JitterModel::Kind::spike;
  else throw config_error("jitter.kind: expected none, uniform or spike, got '" + jitter + "'");
  config.jitter.base_dispatch = cfg.get_duration_ms_or("jitter", "base_ms", 0);
  config.jitter.worst_case = cfg.get_duration_ms_or("jitter", "worst_ms", 0);
  config.jitter.spike_probability = cfg.get_double_or("jitter", "spike_probability", 0.0);
  return config;
}

RigGeometry build_rig(ConfigFile& cfg) {
  RigGeometry rig = testbed_rig();
  rig.ipd_cm = cfg.get_double_or("rig", "ipd_cm", rig.ipd_cm);
  rig.head_to_eye_front_cm = cfg.get_double_or("rig", "eye_front_cm", rig.head_to_eye_front_cm);
  rig.eye_radius_cm = cfg.get_double_or("rig", "eye_radius_cm", rig.eye_radius_cm);
  rig.pupil_offset_cm = cfg.get_double_or("rig", "pupil_offset_cm", rig.pupil_offset_cm);
  rig.eye_to_screen_cm = cfg.get_double_or("rig", "screen_cm", rig.eye_to_screen_cm);
  rig.eye_to_object_cm = cfg.get_double_or("rig", "object_cm", rig.eye_to_object_cm);
  rig.kappa_deg = cfg.get_double_or("rig", "kappa_deg", rig.kappa_deg);
  const std::string mode = cfg.get_string_or("rig", "mode", "eye_cor");
  if (mode == "eye_cor") rig.ray_mode = RigGeometry::RayMode::eye_center;
  else if (mode == "visual_axis") rig.ray_mode = RigGeometry::RayMode::visual_axis;
  else throw config_error("rig.mode: expected eye_cor or visual_axis, got '" + mode + "'");
  return rig;
}

HeadTrajectory build_trajectory(ConfigFile& cfg) {
  const std::string kind = cfg.get_string_or("trajectory", "kind", "sinusoid");
  if (kind == "sinusoid")
    return HeadTrajectory::sinusoid(
        cfg.get_double_or("trajectory", "amplitude_deg", 25.0) / kDegPerRad,
        cfg.get_double_or("trajectory", "frequency_hz", 0.5));
  if (kind == "sweep")
    return HeadTrajectory::sweep(
        cfg.get_double_or("trajectory", "yaw_min_deg", -25.0) / kDegPerRad,
        cfg.get_double_or("trajectory", "yaw_max_deg", 25.0) / kDegPerRad,
        cfg.get_double_or("trajectory", "speed_deg_s", 31.256) / kDegPerRad);
  if (kind == "static")
    return HeadTrajectory::static_pose(cfg.get_double_or("trajectory", "yaw_deg", 0.0) /
                                       kDegPerRad);
  throw config_error("trajectory.kind: expected sinusoid, sweep or static, got '" + kind + "'");
}

int cmd_latency_field(const CommonOpts& opts, bool write_csv) {
  ConfigFile cfg = load_config(opts);
  const PipelineConfig config = build_pipeline(opts, cfg);
  cfg.require_consumed();

  const LatencyField raw = buffer_latency_field(*config.mapping, config.camera, config.display);
  const TimeNs phase = select_phase_offset(raw);
  const LatencyField field = raw.shifted(phase);
  const std::int64_t rows = required_buffer(field, config.camera);

  atomic_write((fs::path(opts.out_dir) / "field.pgm").string(), render_pgm(field));
  atomic_write((fs::path(opts.out_dir) / "field.pgm.scale.txt").string(),
               render_pgm_sidecar(field));
  if (write_csv)
    atomic_write((fs::path(opts.out_dir) / "field.csv").string(), render_field_csv(field));

  fmt::print("field {}x{}  phase_offset_ms {}  stat_min_ms {}  stat_max_ms {}  mean_ms {:.6f}  "
             "required_buffer_rows {}\n",
             field.cols, field.rows, ns_to_ms_string(phase), ns_to_ms_string(field.stat_min),
             ns_to_ms_string(field.stat_max), field.stat_mean_ns / 1e6, rows);
  return 0;
}

int cmd_simulate(const CommonOpts& opts, std::int64_t frames, std::uint64_t seed) {
  ConfigFile cfg = load_config(opts);
  const PipelineConfig config = build_pipeline(opts, cfg);
  cfg.require_consumed();

  const SimTrace trace = simulate(config, frames, seed);
  atomic_write((fs::path(opts.out_dir) / "events.csv").string(), render_events_csv(trace));
  atomic_write((fs::path(opts.out_dir) / "latency.pgm").string(),
               render_pgm(trace.per_pixel_latency));
  atomic_write((fs::path(opts.out_dir) / "latency.pgm.scale.txt").string(),
               render_pgm_sidecar(trace.per_pixel_latency));

  fmt::print("frames {}  tears {}  mean_latency_ms {:.6f}  camera_advance_ms {}\n", frames,
             trace.tear_count, trace.mean_latency_ms(), ns_to_ms_string(trace.camera_advance));
  return 0;
}

int cmd_geometry(const CommonOpts& opts, double latency_ms) {
  ConfigFile cfg = load_config(opts);
  const RigGeometry rig = build_rig(cfg);
  const HeadTrajectory traj = build_trajectory(cfg);
  cfg.require_consumed();

  const DisparityErrorTrace trace = disparity_error_trace(rig, traj, latency_ms / 1e3);
  if (!opts.out_dir.empty()) {
    atomic_write((fs::path(opts.out_dir) / "projection.csv").string(),
                 render_projection_csv(rig, traj));
    atomic_write((fs::path(opts.out_dir) / "error_trace.csv").string(),
                 render_error_trace_csv(trace));
  }
  fmt::print("head_forward_cm {:.4f}  latency_ms {:.3f}  peak_error_arcsec {:.3f}\n",
             stereo_pair(rig, 0.0, 0.0).separation_cm(), latency_ms, trace.peak_arcsec);
  return 0;
}

int cmd_travel_table(const CommonOpts& opts, double latency_ms) {
  ConfigFile cfg = load_config(opts);
  RigGeometry rig = build_rig(cfg);
  const HeadTrajectory traj = build_trajectory(cfg);
  cfg.require_consumed();

  rig.ray_mode = RigGeometry::RayMode::eye_center;
  const StimulusTravelReport cor = stimulus_travel(rig, traj, latency_ms / 1e3);
  rig.ray_mode = RigGeometry::RayMode::visual_axis;
  const StimulusTravelReport va = stimulus_travel(rig, traj, latency_ms / 1e3);

  std::string table;
  table += fmt::format("{:<24}{:>10}{:>14}\n", "", "CoR", "Visual Axis");
  table += fmt::format("{:<24}{:>10.2f}{:>14.2f}\n", "Head forward (cm)", cor.head_forward_cm,
                       va.head_forward_cm);
  table += fmt::format("{:<24}{:>10.2f}{:>14.2f}\n", "0-ms latency (cm)", cor.travel_zero_lag_cm,
                       va.travel_zero_lag_cm);
  table += fmt::format("{:<24}{:>10.2f}{:>14.2f}\n",
                       fmt::format("{:.0f}-ms latency (cm)", latency_ms),
                       cor.travel_at_latency_cm, va.travel_at_latency_cm);
  fmt::print("{}", table);
  if (!opts.out_dir.empty())
    atomic_write((fs::path(opts.out_dir) / "table.txt").string(), table);
  return 0;
}

int cmd_psychofit(const std::string& trials_path, double criterion, double guess, double lapse,
                  const std::string& curve_path) {
  const std::vector<TrialRecord> trials = read_trials_csv(trials_path);
  FitOptions options;
  options.guess_rate = guess;
  options.lapse_rate = lapse;
  const PsychometricFit fit = fit_logistic(trials, options);

  fmt::print("trials {}  alpha_ms {:.4f}  beta_per_ms {:.4f}  converged {}  boundary {}\n",
             trials.size(), fit.alpha, fit.beta, fit.converged ? 1 : 0,
             fit.on_boundary ? 1 : 0);
  if (fit.converged)
    fmt::print("threshold_ms({:.4f}) {:.4f}\n", criterion, threshold_at(fit, criterion));
  else
    fmt::print("threshold_ms({:.4f}) unavailable: fit did not converge\n", criterion);

  if (!curve_path.empty()) {
    double lo = trials.front().stimulus, hi = lo;
    for (const TrialRecord& t : trials) {
      lo = std::min(lo, t.stimulus);
      hi = std::max(hi, t.stimulus);
    }
    atomic_write(curve_path, render_curve_csv(fit, lo, hi));
  }
  return 0;
}

int cmd_sobol(std::int64_t count, double lo, double hi, const std::string& out_path) {
  if (count < 0) throw validation_error("sobol: count must be >= 0");
  const std::vector<double> points = sobol_sequence(static_cast<std::size_t>(count), lo, hi);
  std::string text = "latency_ms\n";
  for (double p : points) text += fmt::format("{:.6f}\n", p);
  if (out_path.empty()) fmt::print("{}", text);
  else atomic_write(out_path, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rolling-scan passthrough latency simulator"};
  app.require_subcommand(1);

  CommonOpts opts;
  bool field_csv = false;
  std::int64_t frames = 10;
  std::uint64_t seed = 1;
  std::string sim_mode;
  double latency_ms = 200.0;
  double trace_latency_ms = 1.0;
  std::string trials_path, curve_path, sobol_out;
  double criterion = 0.75, guess = 0.5, lapse = 1e-4;
  std::int64_t sobol_count = 0;
  double sobol_lo = 0.0, sobol_hi = 25.0;

  const auto add_common = [&](CLI::App* cmd, bool needs_out) {
    cmd->add_option("--preset", opts.preset, "preset name (camsicle72)");
    cmd->add_option("--scale", opts.scale, "raster downscale: 1, 2, 4 or 8")
        ->default_val(8);
    cmd->add_option("--config", opts.config_path, "config file overriding the preset");
    cmd->add_option("--set", opts.overrides, "inline override, section.key=value");
    auto* out = cmd->add_option("--out", opts.out_dir, "output directory");
    if (needs_out) out->required();
  };

  auto* lf = app.add_subcommand("latency-field", "buffer latency field heatmap and stats");
  add_common(lf, true);
  lf->add_flag("--csv", field_csv, "also write the per-pixel CSV");

  auto* sim = app.add_subcommand("simulate", "event-driven pipeline simulation");
  add_common(sim, true);
  sim->add_option("--frames", frames, "camera frames to simulate")->default_val(10);
  sim->add_option("--seed", seed, "jitter RNG seed")->default_val(1);
  sim->add_option("--mode", sim_mode, "sliced or full_frame (overrides config)");

  auto* geo = app.add_subcommand("geometry", "disparity error trace for the testbed rig");
  geo->add_option("--config", opts.config_path, "rig/trajectory config file");
  geo->add_option("--set", opts.overrides, "inline override, section.key=value");
  geo->add_option("--latency-ms", trace_latency_ms, "rendering latency")->default_val(1.0);
  geo->add_option("--out", opts.out_dir, "output directory for CSVs");

  auto* travel = app.add_subcommand("travel-table", "stimulus travel table, both ray modes");
  travel->add_option("--config", opts.config_path, "rig/trajectory config file");
  travel->add_option("--set", opts.overrides, "inline override, section.key=value");
  travel->add_option("--latency-ms", latency_ms, "lagged-row latency")->default_val(200.0);
  travel->add_option("--out", opts.out_dir, "also write table.txt here");

  auto* fitc = app.add_subcommand("psychofit", "logistic threshold fit from a trials CSV");
  fitc->add_option("--trials", trials_path, "CSV with header latency_ms,correct")->required();
  fitc->add_option("--criterion", criterion, "threshold criterion")->default_val(0.75);
  fitc->add_option("--guess", guess, "guess rate")->default_val(0.5);
  fitc->add_option("--lapse", lapse, "lapse rate")->default_val(1e-4);
  fitc->add_option("--curve", curve_path, "write fitted curve CSV here");

  auto* sob = app.add_subcommand("sobol", "low-discrepancy stimulus schedule");
  sob->add_option("--count", sobol_count, "number of points")->required();
  sob->add_option("--lo", sobol_lo, "range low (ms)")->default_val(0.0);
  sob->add_option("--hi", sobol_hi, "range high (ms)")->default_val(25.0);
  sob->add_option("--out", sobol_out, "write here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    if (sim->parsed() && !sim_mode.empty()) opts.overrides.push_back("pipeline.mode=" + sim_mode);
    if (lf->parsed()) return cmd_latency_field(opts, field_csv);
    if (sim->parsed()) return cmd_simulate(opts, frames, seed);
    if (geo->parsed()) return cmd_geometry(opts, trace_latency_ms);
    if (travel->parsed()) return cmd_travel_table(opts, latency_ms);
    if (fitc->parsed()) return cmd_psychofit(trials_path, criterion, guess, lapse, curve_path);
    if (sob->parsed()) return cmd_sobol(sobol_count, sobol_lo, sobol_hi, sobol_out);
  } catch (const config_error& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return 2;
  } catch (const validation_error& e) {
    fmt::print(stderr, "validation error: {}\n", e.what());
    return 3;
  } catch (const io_error& e) {
    fmt::print(stderr, "io error: {}\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 3;
  }
  return 0;
}
