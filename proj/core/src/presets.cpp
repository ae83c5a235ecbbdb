#include "rollscan/presets.hpp"

#include <numbers>
#include <string>

#include "rollscan/time_utils.hpp"

namespace rollscan {

namespace {

constexpr std::int32_t kDisplayCols = 2768;
constexpr std::int32_t kDisplayRows = 3000;
constexpr std::int32_t kCameraCols = 5120;
constexpr std::int32_t kCameraRows = 3160;
constexpr TimeNs kFramePeriod = 13'888'889;  // 72 Hz
constexpr double kDisplayCubic = 0.037;
// Fisheye focal over display focal; sized so the display's bottom edge maps a few
// rows inside the 3160-row crop at full resolution.
constexpr double kFocalRatio = 1.07904;

}  // namespace

Camsicle72 camsicle72(std::int32_t scale) {
  if (scale != 1 && scale != 2 && scale != 4 && scale != 8)
    throw config_error("camsicle72: scale must be 1, 2, 4 or 8 (got " +
                       std::to_string(scale) + ")");

  const double theta50 = 50.0 * std::numbers::pi / 180.0;
  const double display_focal =
      (kDisplayRows / 2.0) / (theta50 + kDisplayCubic * theta50 * theta50 * theta50);

  Camsicle72 p;
  p.camera = ScanSpec::camera(kCameraRows / scale, kFramePeriod, 1 * kNsPerMs);
  p.display = ScanSpec::display(kDisplayRows / scale, kFramePeriod, 1 * kNsPerMs);
  p.display_profile =
      DistortionProfile::polynomial(display_focal / scale, {1.0, kDisplayCubic});
  p.camera_profile = DistortionProfile::fisheye(kFocalRatio * display_focal / scale);
  return p;
}

std::shared_ptr<const PixelMapping> Camsicle72::make_mapping() const {
  const Dims display_dims{kDisplayCols * display.rows / kDisplayRows, display.rows};
  const Dims camera_dims{kCameraCols * camera.rows / kCameraRows, camera.rows};
  const Center display_center{(display_dims.cols - 1) / 2.0, (display_dims.rows - 1) / 2.0};
  const Center camera_center{(camera_dims.cols - 1) / 2.0, (camera_dims.rows - 1) / 2.0};
  return std::make_shared<PixelMapping>(build_mapping(camera_profile, display_profile,
                                                      display_dims, camera_dims,
                                                      display_center, camera_center));
}

PipelineConfig Camsicle72::make_pipeline() const {
  PipelineConfig config;
  config.camera = camera;
  config.display = display;
  config.mapping = make_mapping();
  config.render_lead = 200 * kNsPerUs;
  config.slice_budget = 100 * kNsPerUs;
  config.buffer_rows = 128;
  return config;
}

RigGeometry testbed_rig() { return RigGeometry{}; }

HeadTrajectory testbed_trajectory() {
  return HeadTrajectory::sinusoid(25.0 * std::numbers::pi / 180.0, 0.5);
}

}  // namespace rollscan
