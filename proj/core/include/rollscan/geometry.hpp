#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace rollscan {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

// Seated-viewer rig, everything in centimetres in head coordinates: origin at the
// head's rotation centre, +z toward the screen, +x to the viewer's right, y up.
// All modelled points lie in the y=0 plane; yaw is rotation about the y axis.
struct RigGeometry {
  double ipd_cm = 6.0;
  double head_to_eye_front_cm = 9.12;  // rotation centre -> corneal front plane
  double eye_radius_cm = 1.2;          // eye rotation centre sits this far behind the front
  double pupil_offset_cm = 1.0;        // entrance pupil this far ahead of the eye centre
  double eye_to_screen_cm = 57.0;      // corneal front plane -> screen plane
  double eye_to_object_cm = 20.0;      // corneal front plane -> fixated object
  double kappa_deg = 5.0;              // visual axis sits temporal to the pupillary axis
  enum class RayMode { eye_center, visual_axis } ray_mode = RayMode::eye_center;

  double eye_front_z() const { return head_to_eye_front_cm; }
  double eye_center_z() const { return head_to_eye_front_cm - eye_radius_cm; }
  double screen_z() const { return head_to_eye_front_cm + eye_to_screen_cm; }
  double object_z() const { return head_to_eye_front_cm + eye_to_object_cm; }
  Vec3 object_point() const { return {0.0, 0.0, object_z()}; }

  void validate() const;
};

struct EyePose {
  Vec3 origin;     // ray origin: eye rotation centre, or entrance pupil
  Vec3 direction;  // unit gaze direction (the visual axis under visual_axis mode)
};

struct EyePair {
  EyePose left, right;
};

// Both eyes under a head yaw (radians, positive turns the face toward +x), gazes
// converged on `fixation` (vestibulo-ocular stabilisation: the eyes counter-rotate
// to hold the target). Under visual_axis mode the ray leaves the entrance pupil,
// which sits pupil_offset_cm along the pupillary axis - the visual axis rotated
// kappa_deg nasally, i.e. the pupil swings temporally. Throws when the fixation
// point is not in front of an eye.
EyePair pose_eyes(const RigGeometry& rig, double yaw_rad, const Vec3& fixation);

// Where the ray from `origin` through `target` pierces the z = screen_z plane.
// Similar triangles: x = ox + (tx - ox) * (screen_z - oz) / (tz - oz), same for y.
// Throws when the ray is parallel to the plane or leaves `origin` away from it.
Vec3 project_point(const Vec3& origin, const Vec3& target, double screen_z);

struct StereoProjection {
  Vec3 left_image, right_image;  // on-screen stimulus positions (z == screen_z)
  double separation_cm() const;
};

// On-screen stimulus placement for a renderer that believes the head is at
// yaw_rendered while it is truly at yaw_true. Placement depends on the rendered
// pose only; the true pose matters when judging the error (disparity_error_trace).
StereoProjection stereo_pair(const RigGeometry& rig, double yaw_true, double yaw_rendered);

// Yaw-over-time profiles used by the tables and traces. Angles in radians, time in
// seconds. sweep ramps yaw_min -> yaw_max at constant speed and rests outside the
// ramp; sinusoid is amplitude * sin(2 pi f t).
struct HeadTrajectory {
  enum class Kind { static_pose, sweep, sinusoid };
  Kind kind = Kind::static_pose;
  double static_yaw_rad = 0.0;
  double yaw_min_rad = 0.0;
  double yaw_max_rad = 0.0;
  double speed_rad_s = 0.0;  // sweep ramp speed, > 0
  double amplitude_rad = 0.0;
  double frequency_hz = 0.0;

  static HeadTrajectory static_pose(double yaw_rad);
  static HeadTrajectory sweep(double yaw_min_rad, double yaw_max_rad, double speed_rad_s);
  static HeadTrajectory sinusoid(double amplitude_rad, double frequency_hz);

  double yaw(double t) const;
  double yaw_rate(double t) const;
  // One full cycle for a sinusoid; ramp plus a rest margin at both ends for a
  // sweep, so samples include the settled extremes.
  double sample_begin() const;
  double sample_end() const;

  void validate() const;
};

// First-order model of a renderer running `latency_s` behind the tracker with
// velocity extrapolation: it draws the pose yaw(t) - latency_s * yaw_rate(t).
double rendered_yaw(const HeadTrajectory& traj, double t, double latency_s);

struct StimulusTravelReport {
  double head_forward_cm = 0.0;      // stimulus separation, head straight ahead
  double travel_zero_lag_cm = 0.0;   // left-eye stimulus travel across the motion
  double travel_at_latency_cm = 0.0; // same, rendered pose lagging by latency_s
};

// Horizontal on-screen travel of the left-eye stimulus over one motion cycle,
// sampled at sample_rate_hz, with and without rendering latency.
StimulusTravelReport stimulus_travel(const RigGeometry& rig, const HeadTrajectory& traj,
                                     double latency_s, double sample_rate_hz = 2000.0);

struct DisparityErrorSample {
  double t = 0.0;
  double error_arcsec = 0.0;  // binocular (two-eye mean) direction error, signed
};

struct DisparityErrorTrace {
  std::vector<DisparityErrorSample> samples;
  double peak_arcsec = 0.0;  // max |error| over the trace
};

// Angular error the rendering latency paints onto the retina: for each eye, the
// direction from the *true* eye position to the stimulus drawn for the rendered
// pose, minus the direction to the stimulus a zero-latency renderer would draw.
// Each sample reports the two eyes' mean - the error in the fused (cyclopean)
// visual direction, which is what a binocular observer perceives as displacement.
// It vanishes whenever the head's angular velocity does and is odd in the latency
// sign to first order.
DisparityErrorTrace disparity_error_trace(const RigGeometry& rig, const HeadTrajectory& traj,
                                          double latency_s, double sample_rate_hz = 2000.0);

}  // namespace rollscan
