#include "rollscan/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <sstream>

#include "rollscan/time_utils.hpp"

namespace rollscan {

namespace fs = std::filesystem;

void atomic_write(const std::string& path, const std::string& contents) {
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
    if (ec) throw io_error("cannot create directory " + target.parent_path().string() +
                           ": " + ec.message());
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw io_error("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw io_error("cannot rename " + tmp.string() + " to " + path + ": " + ec.message());
}

std::string render_pgm(const LatencyField& field) {
  std::string out = fmt::format("P2\n{} {}\n255\n", field.cols, field.rows);
  const TimeNs max = field.stat_max;
  for (std::int32_t row = 0; row < field.rows; ++row) {
    for (std::int32_t col = 0; col < field.cols; ++col) {
      const std::size_t i = static_cast<std::size_t>(row) * field.cols + col;
      int v = 0;
      if (field.valid[i] && max > 0) {
        const TimeNs raw = field.values[i];
        v = raw <= 0 ? 0
                     : static_cast<int>((raw * 255 + max / 2) / max);
        if (v > 255) v = 255;
      }
      out += std::to_string(v);
      out += col + 1 == field.cols ? '\n' : ' ';
    }
  }
  return out;
}

std::string render_pgm_sidecar(const LatencyField& field) {
  return fmt::format(
      "black_level_ms 0\nwhite_level_ms {}\nstat_min_ms {}\nstat_max_ms {}\nmean_ms "
      "{:.6f}\ninvalid_value 0\n",
      ns_to_ms_string(field.stat_max), ns_to_ms_string(field.stat_min),
      ns_to_ms_string(field.stat_max), field.stat_mean_ns / 1e6);
}

std::string render_field_csv(const LatencyField& field) {
  std::string out = "col,row,valid,latency_ms\n";
  for (std::int32_t row = 0; row < field.rows; ++row)
    for (std::int32_t col = 0; col < field.cols; ++col) {
      const std::size_t i = static_cast<std::size_t>(row) * field.cols + col;
      out += fmt::format("{},{},{},{}\n", col, row, field.valid[i] ? 1 : 0,
                         field.valid[i] ? ns_to_ms_string(field.values[i]) : "");
    }
  return out;
}

std::string render_ppm(const RgbImage& image) {
  std::string out = fmt::format("P6\n{} {}\n255\n", image.cols, image.rows);
  out.append(reinterpret_cast<const char*>(image.rgb.data()), image.rgb.size());
  return out;
}

std::string render_events_csv(const SimTrace& trace) {
  std::string out = "time_ns,kind,row_start,row_end,frame\n";
  for (const SimEvent& e : trace.events)
    out += fmt::format("{},{},{},{},{}\n", e.time, to_string(e.kind), e.row_start,
                       e.row_end, e.frame);
  return out;
}

std::string render_projection_csv(const RigGeometry& rig, const HeadTrajectory& traj,
                                  int samples) {
  if (samples < 2) throw validation_error("projection csv: need at least 2 samples");
  std::string out = "yaw_deg,left_x_cm,right_x_cm,separation_cm\n";
  const double t0 = traj.sample_begin(), t1 = traj.sample_end();
  for (int i = 0; i < samples; ++i) {
    const double t = t0 + (t1 - t0) * i / (samples - 1);
    const double yaw = traj.yaw(t);
    const StereoProjection p = stereo_pair(rig, yaw, yaw);
    out += fmt::format("{:.4f},{:.6f},{:.6f},{:.6f}\n", yaw * 180.0 / 3.14159265358979323846,
                       p.left_image.x, p.right_image.x, p.separation_cm());
  }
  return out;
}

std::string render_error_trace_csv(const DisparityErrorTrace& trace) {
  std::string out = "t_s,error_arcsec\n";
  for (const DisparityErrorSample& s : trace.samples)
    out += fmt::format("{:.6f},{:.6f}\n", s.t, s.error_arcsec);
  return out;
}

std::vector<TrialRecord> read_trials_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open trials file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw config_error(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "latency_ms,correct")
    throw config_error(path + ":1: header must be 'latency_ms,correct', got '" + line + "'");
  std::vector<TrialRecord> trials;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos)
      throw config_error(path + ":" + std::to_string(line_no) + ": expected latency_ms,correct");
    TrialRecord t;
    try {
      std::size_t used = 0;
      t.stimulus = std::stod(line.substr(0, comma), &used);
      if (used != comma) throw std::invalid_argument("trailing junk");
    } catch (const std::exception&) {
      throw config_error(path + ":" + std::to_string(line_no) + ": bad latency value '" +
                         line.substr(0, comma) + "'");
    }
    const std::string flag = line.substr(comma + 1);
    if (flag == "1") t.correct = true;
    else if (flag == "0") t.correct = false;
    else
      throw config_error(path + ":" + std::to_string(line_no) + ": correct must be 0 or 1, got '" +
                         flag + "'");
    if (t.stimulus < 0)
      throw config_error(path + ":" + std::to_string(line_no) + ": negative latency");
    trials.push_back(t);
  }
  return trials;
}

std::string render_curve_csv(const PsychometricFit& fit, double lo, double hi, double step) {
  if (step <= 0 || hi < lo) throw validation_error("curve csv: bad range");
  std::string out = "latency_ms,p_correct\n";
  for (double x = lo; x <= hi + step / 2; x += step)
    out += fmt::format("{:.4f},{:.6f}\n", x, psychometric_value(fit, x));
  return out;
}

}  // namespace rollscan
