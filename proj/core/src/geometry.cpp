#include "rollscan/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include "rollscan/time_utils.hpp"

namespace rollscan {

namespace {

constexpr double kArcsecPerRad = 180.0 * 3600.0 / std::numbers::pi;

// Yaw about +y: positive angle carries +z toward +x (the face turns right).
Vec3 yaw_rotate(const Vec3& v, double yaw_rad) {
  const double c = std::cos(yaw_rad), s = std::sin(yaw_rad);
  return {v.x * c + v.z * s, v.y, -v.x * s + v.z * c};
}

Vec3 sub(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Vec3 add(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Vec3 scale(const Vec3& a, double k) { return {a.x * k, a.y * k, a.z * k}; }

Vec3 normalize(const Vec3& v) {
  const double n = std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
  if (n == 0.0) throw validation_error("geometry: zero-length direction");
  return scale(v, 1.0 / n);
}

// Screen-plane bearing of `point` as seen from `origin`: angle from the +z axis in
// the x-z plane, positive toward +x.
double bearing(const Vec3& origin, const Vec3& point) {
  return std::atan2(point.x - origin.x, point.z - origin.z);
}

}  // namespace

void RigGeometry::validate() const {
  if (ipd_cm <= 0.0) throw validation_error("rig: ipd must be positive");
  if (head_to_eye_front_cm <= 0.0) throw validation_error("rig: eye front must be ahead of the head centre");
  if (eye_radius_cm <= 0.0 || eye_radius_cm >= head_to_eye_front_cm)
    throw validation_error("rig: eye radius out of range");
  if (pupil_offset_cm < 0.0) throw validation_error("rig: pupil offset must be >= 0");
  if (eye_to_screen_cm <= 0.0) throw validation_error("rig: screen must be in front of the eyes");
  if (eye_to_object_cm <= 0.0) throw validation_error("rig: object must be in front of the eyes");
  if (kappa_deg < 0.0 || kappa_deg > 15.0)
    throw validation_error("rig: kappa must be within [0, 15] degrees");
}

EyePair pose_eyes(const RigGeometry& rig, double yaw_rad, const Vec3& fixation) {
  rig.validate();
  const double kappa = rig.kappa_deg * std::numbers::pi / 180.0;
  const Vec3 forward = yaw_rotate({0.0, 0.0, 1.0}, yaw_rad);

  EyePair pair;
  for (int side = 0; side < 2; ++side) {
    const bool left = side == 0;
    const Vec3 rest = {left ? -rig.ipd_cm / 2.0 : rig.ipd_cm / 2.0, 0.0, rig.eye_center_z()};
    const Vec3 center = yaw_rotate(rest, yaw_rad);
    const Vec3 to_target = sub(fixation, center);
    if (to_target.x * forward.x + to_target.z * forward.z <= 0.0)
      throw validation_error("geometry: fixation point is not in front of the eye");
    const Vec3 visual = normalize(to_target);

    EyePose pose;
    pose.direction = visual;
    if (rig.ray_mode == RigGeometry::RayMode::eye_center) {
      pose.origin = center;
    } else {
      // The pupillary axis sits kappa nasal-to-temporal of the visual axis: rotating
      // the left eye's gaze by -kappa (toward -x) and the right's by +kappa puts the
      // entrance pupil on the temporal side, where it is anatomically.
      const Vec3 pupillary = yaw_rotate(visual, left ? -kappa : kappa);
      pose.origin = add(center, scale(pupillary, rig.pupil_offset_cm));
    }
    (left ? pair.left : pair.right) = pose;
  }
  return pair;
}

Vec3 project_point(const Vec3& origin, const Vec3& target, double screen_z) {
  const double dz = target.z - origin.z;
  if (dz == 0.0) throw validation_error("geometry: ray parallel to the screen plane");
  const double s = (screen_z - origin.z) / dz;
  if (s <= 0.0) throw validation_error("geometry: ray leaves the origin away from the screen");
  return {origin.x + (target.x - origin.x) * s, origin.y + (target.y - origin.y) * s,
          screen_z};
}

double StereoProjection::separation_cm() const {
  return std::abs(right_image.x - left_image.x);
}

StereoProjection stereo_pair(const RigGeometry& rig, double /*yaw_true*/, double yaw_rendered) {
  const Vec3 object = rig.object_point();
  const EyePair eyes = pose_eyes(rig, yaw_rendered, object);
  StereoProjection out;
  out.left_image = project_point(eyes.left.origin, object, rig.screen_z());
  out.right_image = project_point(eyes.right.origin, object, rig.screen_z());
  return out;
}

HeadTrajectory HeadTrajectory::static_pose(double yaw_rad) {
  HeadTrajectory t;
  t.kind = Kind::static_pose;
  t.static_yaw_rad = yaw_rad;
  return t;
}

HeadTrajectory HeadTrajectory::sweep(double yaw_min_rad, double yaw_max_rad, double speed_rad_s) {
  HeadTrajectory t;
  t.kind = Kind::sweep;
  t.yaw_min_rad = yaw_min_rad;
  t.yaw_max_rad = yaw_max_rad;
  t.speed_rad_s = speed_rad_s;
  return t;
}

HeadTrajectory HeadTrajectory::sinusoid(double amplitude_rad, double frequency_hz) {
  HeadTrajectory t;
  t.kind = Kind::sinusoid;
  t.amplitude_rad = amplitude_rad;
  t.frequency_hz = frequency_hz;
  return t;
}

void HeadTrajectory::validate() const {
  switch (kind) {
    case Kind::static_pose:
      return;
    case Kind::sweep:
      if (yaw_max_rad <= yaw_min_rad) throw validation_error("trajectory: empty sweep range");
      if (speed_rad_s <= 0.0) throw validation_error("trajectory: sweep speed must be positive");
      return;
    case Kind::sinusoid:
      if (amplitude_rad <= 0.0) throw validation_error("trajectory: amplitude must be positive");
      if (frequency_hz <= 0.0) throw validation_error("trajectory: frequency must be positive");
      return;
  }
  throw validation_error("trajectory: bad kind");
}

double HeadTrajectory::yaw(double t) const {
  switch (kind) {
    case Kind::static_pose:
      return static_yaw_rad;
    case Kind::sweep: {
      const double ramp = (yaw_max_rad - yaw_min_rad) / speed_rad_s;
      if (t <= 0.0) return yaw_min_rad;
      if (t >= ramp) return yaw_max_rad;
      return yaw_min_rad + speed_rad_s * t;
    }
    case Kind::sinusoid:
      return amplitude_rad * std::sin(2.0 * std::numbers::pi * frequency_hz * t);
  }
  return 0.0;
}

double HeadTrajectory::yaw_rate(double t) const {
  switch (kind) {
    case Kind::static_pose:
      return 0.0;
    case Kind::sweep: {
      const double ramp = (yaw_max_rad - yaw_min_rad) / speed_rad_s;
      return (t > 0.0 && t < ramp) ? speed_rad_s : 0.0;
    }
    case Kind::sinusoid: {
      const double w = 2.0 * std::numbers::pi * frequency_hz;
      return amplitude_rad * w * std::cos(w * t);
    }
  }
  return 0.0;
}

double HeadTrajectory::sample_begin() const {
  if (kind != Kind::sweep) return 0.0;
  return -0.05 * (yaw_max_rad - yaw_min_rad) / speed_rad_s;
}

double HeadTrajectory::sample_end() const {
  switch (kind) {
    case Kind::static_pose:
      return 1.0;
    case Kind::sweep:
      return 1.05 * (yaw_max_rad - yaw_min_rad) / speed_rad_s;
    case Kind::sinusoid:
      return 1.0 / frequency_hz;
  }
  return 1.0;
}

double rendered_yaw(const HeadTrajectory& traj, double t, double latency_s) {
  return traj.yaw(t) - latency_s * traj.yaw_rate(t);
}

StimulusTravelReport stimulus_travel(const RigGeometry& rig, const HeadTrajectory& traj,
                                     double latency_s, double sample_rate_hz) {
  rig.validate();
  traj.validate();
  if (sample_rate_hz <= 0.0) throw validation_error("geometry: sample rate must be positive");

  StimulusTravelReport report;
  report.head_forward_cm = stereo_pair(rig, 0.0, 0.0).separation_cm();

  const double t0 = traj.sample_begin();
  const double t1 = traj.sample_end();
  const auto steps = static_cast<std::int64_t>(std::ceil((t1 - t0) * sample_rate_hz));
  for (const bool lagged : {false, true}) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::int64_t i = 0; i <= steps; ++i) {
      const double t = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(steps);
      const double yaw = lagged ? rendered_yaw(traj, t, latency_s) : traj.yaw(t);
      const double x = stereo_pair(rig, traj.yaw(t), yaw).left_image.x;
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    (lagged ? report.travel_at_latency_cm : report.travel_zero_lag_cm) = hi - lo;
  }
  return report;
}

DisparityErrorTrace disparity_error_trace(const RigGeometry& rig, const HeadTrajectory& traj,
                                          double latency_s, double sample_rate_hz) {
  rig.validate();
  traj.validate();
  if (sample_rate_hz <= 0.0) throw validation_error("geometry: sample rate must be positive");

  const Vec3 object = rig.object_point();
  const double t0 = traj.sample_begin();
  const double t1 = traj.sample_end();
  const auto steps = static_cast<std::int64_t>(std::ceil((t1 - t0) * sample_rate_hz));

  DisparityErrorTrace trace;
  trace.samples.reserve(static_cast<std::size_t>(steps) + 1);
  for (std::int64_t i = 0; i <= steps; ++i) {
    const double t = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(steps);
    const double yaw_true = traj.yaw(t);
    const double yaw_drawn = rendered_yaw(traj, t, latency_s);

    const EyePair eyes_true = pose_eyes(rig, yaw_true, object);
    const StereoProjection drawn = stereo_pair(rig, yaw_true, yaw_drawn);
    const StereoProjection ideal = stereo_pair(rig, yaw_true, yaw_true);

    const double err_left = bearing(eyes_true.left.origin, drawn.left_image) -
                            bearing(eyes_true.left.origin, ideal.left_image);
    const double err_right = bearing(eyes_true.right.origin, drawn.right_image) -
                             bearing(eyes_true.right.origin, ideal.right_image);
    const double arcsec = 0.5 * (err_left + err_right) * kArcsecPerRad;
    trace.samples.push_back({t, arcsec});
    trace.peak_arcsec = std::max(trace.peak_arcsec, std::abs(arcsec));
  }
  return trace;
}

}  // namespace rollscan
