#pragma once

#include <cstdint>
#include <memory>

#include "rollscan/distortion.hpp"
#include "rollscan/geometry.hpp"
#include "rollscan/mapping.hpp"
#include "rollscan/pipeline.hpp"
#include "rollscan/scanout.hpp"

namespace rollscan {

// "camsicle72": the shipped 72 Hz passthrough rig. Display 2768x3000 with a mild
// pincushion polynomial (r = f (theta + 0.037 theta^3), f anchored so the 50-degree
// half-field lands on the half-height); camera 5120x3160 equidistant fisheye, focal
// chosen so the warped display footprint just fits the cropped sensor. 1 ms
// exposure, 1 ms persistence, full-height scans. The profile pair is
// representative of the hardware class, not a measurement of one device.
//
// `scale` (1, 2, 4 or 8) divides both rasters for cheap runs; timing is untouched,
// so latency statistics agree across scales to within the coarser row rounding.
struct Camsicle72 {
  ScanSpec camera;
  ScanSpec display;
  DistortionProfile camera_profile;
  DistortionProfile display_profile;

  std::shared_ptr<const PixelMapping> make_mapping() const;
  // Sliced-mode config: render_lead 0.2 ms, slice budget 0.1 ms, 128 buffer rows,
  // no jitter, auto phase. The criteria-bearing defaults; callers override freely.
  PipelineConfig make_pipeline() const;
};

Camsicle72 camsicle72(std::int32_t scale = 1);

// The flat-TV stereo testbed: default rig (6 cm IPD, screen 57 cm and object 20 cm
// ahead of the corneal plane) plus its documented head motion, a +-25 degree
// sinusoid at 0.5 Hz.
RigGeometry testbed_rig();
HeadTrajectory testbed_trajectory();

}  // namespace rollscan
