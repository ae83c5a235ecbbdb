#pragma once

#include <string>
#include <vector>

#include "rollscan/compositor.hpp"
#include "rollscan/geometry.hpp"
#include "rollscan/mapping.hpp"
#include "rollscan/pipeline.hpp"
#include "rollscan/psychometrics.hpp"

namespace rollscan {

// Write-to-temp-then-rename so readers never observe a half-written file and a
// rerun with identical content is byte-identical. Throws io_error.
void atomic_write(const std::string& path, const std::string& contents);

// P2 (ASCII) PGM of a latency field: values linearly scaled from [0, stat_max]
// onto [0, 255] (negatives clamp to 0), invalid pixels 0. The numeric scale goes
// into a sidecar next to the image (render_pgm_sidecar), since the image alone
// cannot say what white means.
std::string render_pgm(const LatencyField& field);
std::string render_pgm_sidecar(const LatencyField& field);

std::string render_field_csv(const LatencyField& field);

// P6 (binary) PPM.
std::string render_ppm(const RgbImage& image);

std::string render_events_csv(const SimTrace& trace);

// yaw_deg,left_x_cm,right_x_cm,separation_cm over a trajectory (zero latency).
std::string render_projection_csv(const RigGeometry& rig, const HeadTrajectory& traj,
                                  int samples = 101);

std::string render_error_trace_csv(const DisparityErrorTrace& trace);

// Header must be exactly "latency_ms,correct"; correct is 0 or 1. Throws
// config_error naming the offending line.
std::vector<TrialRecord> read_trials_csv(const std::string& path);

// latency_ms,p_correct at fixed steps across [lo, hi].
std::string render_curve_csv(const PsychometricFit& fit, double lo, double hi,
                             double step = 0.1);

}  // namespace rollscan
