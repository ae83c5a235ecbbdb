#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rollscan/geometry.hpp"
#include "rollscan/presets.hpp"
#include "rollscan/time_utils.hpp"

using namespace rollscan;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

}  // namespace

TEST_CASE("eye rotation centres sit at (+-3.0, 7.92) cm for the default rig") {
  const RigGeometry rig = testbed_rig();
  const EyePair eyes = pose_eyes(rig, 0.0, rig.object_point());
  CHECK(eyes.left.origin.x == doctest::Approx(-3.0).epsilon(1e-15));
  CHECK(eyes.left.origin.z == doctest::Approx(7.92).epsilon(1e-15));
  CHECK(eyes.right.origin.x == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(eyes.right.origin.z == doctest::Approx(7.92).epsilon(1e-15));
}

TEST_CASE("eye centres under yaw are the rest pose rigidly rotated") {
  const RigGeometry rig = testbed_rig();
  const double yaw = 25.0 * kDeg;
  // Fixation far ahead along the rotated forward axis keeps both eyes legal.
  const Vec3 fix{100.0 * std::sin(yaw), 0.0, 100.0 * std::cos(yaw)};
  const EyePair eyes = pose_eyes(rig, yaw, fix);
  const double c = std::cos(yaw), s = std::sin(yaw);
  // Rest pose (-3, 7.92) rotated about the head centre.
  CHECK(eyes.left.origin.x == doctest::Approx(-3.0 * c + 7.92 * s).epsilon(1e-12));
  CHECK(eyes.left.origin.z == doctest::Approx(3.0 * s + 7.92 * c).epsilon(1e-12));
  CHECK(eyes.right.origin.x == doctest::Approx(3.0 * c + 7.92 * s).epsilon(1e-12));
  CHECK(eyes.right.origin.z == doctest::Approx(-3.0 * s + 7.92 * c).epsilon(1e-12));
}

TEST_CASE("entrance pupil placement matches a scalar trigonometric oracle") {
  RigGeometry rig = testbed_rig();
  rig.ray_mode = RigGeometry::RayMode::visual_axis;
  const Vec3 fix = rig.object_point();  // midline object, 20 cm ahead of the cornea
  const EyePair eyes = pose_eyes(rig, 0.0, fix);

  // Left eye centre (-3, 7.92) fixating (0, 29.12): the visual axis bearing from
  // straight ahead is atan2(3, 21.2). The pupillary axis swings temporally (toward
  // -x for the left eye) by kappa; the pupil sits 1 cm along it.
  const double phi = std::atan2(3.0, 29.12 - 7.92);
  const double kappa = 5.0 * kDeg;
  const double left_bearing = phi - kappa;
  CHECK(eyes.left.origin.x ==
        doctest::Approx(-3.0 + 1.0 * std::sin(left_bearing)).epsilon(1e-12));
  CHECK(eyes.left.origin.z ==
        doctest::Approx(7.92 + 1.0 * std::cos(left_bearing)).epsilon(1e-12));
  // Mirror for the right eye: bearing -phi, temporal swing toward +x.
  CHECK(eyes.right.origin.x ==
        doctest::Approx(3.0 + 1.0 * std::sin(-phi + kappa)).epsilon(1e-12));
  CHECK(eyes.right.origin.z ==
        doctest::Approx(7.92 + 1.0 * std::cos(-phi + kappa)).epsilon(1e-12));
  // The gaze direction reported is the visual axis, aimed at the fixation point.
  CHECK(eyes.left.direction.x == doctest::Approx(std::sin(phi)).epsilon(1e-12));
  CHECK(eyes.left.direction.z == doctest::Approx(std::cos(phi)).epsilon(1e-12));
}

TEST_CASE("screen projection follows similar triangles") {
  CHECK(project_point({0, 0, 5}, {0, 0, 20}, 60).x == 0.0);
  // Worked case: left eye centre through the midline object onto the screen.
  const Vec3 img = project_point({-3.0, 0.0, 7.92}, {0.0, 0.0, 29.12}, 66.12);
  CHECK(img.x == doctest::Approx(-3.0 + 3.0 * (58.2 / 21.2)).epsilon(1e-12));
  CHECK(img.x == doctest::Approx(5.235849056603774).epsilon(1e-12));
  CHECK(img.z == 66.12);
  // Mirroring origin and target in x negates the screen x.
  const Vec3 mirrored = project_point({3.0, 0.0, 7.92}, {0.0, 0.0, 29.12}, 66.12);
  CHECK(mirrored.x == doctest::Approx(-img.x).epsilon(1e-12));

  CHECK_THROWS_AS(project_point({0, 0, 5}, {1, 0, 5}, 60), validation_error);
  CHECK_THROWS_AS(project_point({0, 0, 5}, {0, 0, 4}, 60), validation_error);
}

TEST_CASE("head-forward separation matches the closed-form similar triangles") {
  const RigGeometry rig = testbed_rig();
  const StereoProjection head_forward = stereo_pair(rig, 0.0, 0.0);
  // ipd * (screen_z - object_z) / (object_z - eye_center_z): each eye's image
  // lands ipd/2 * (s - 1) from the midline with s = (66.12-7.92)/(29.12-7.92).
  const double expected = 6.0 * (66.12 - 29.12) / (29.12 - 7.92);
  CHECK(head_forward.separation_cm() == doctest::Approx(expected).epsilon(1e-12));
  CHECK(head_forward.separation_cm() == doctest::Approx(10.4717).epsilon(1e-4));
  // Midline object at yaw 0 projects symmetrically.
  CHECK(head_forward.left_image.x ==
        doctest::Approx(-head_forward.right_image.x).epsilon(1e-12));
}

TEST_CASE("rendering at the true pose is the zero-latency identity") {
  const RigGeometry rig = testbed_rig();
  for (double yaw_deg = -25.0; yaw_deg <= 25.0; yaw_deg += 5.0) {
    const double yaw = yaw_deg * kDeg;
    const StereoProjection a = stereo_pair(rig, yaw, yaw);
    const StereoProjection b = stereo_pair(rig, 0.0, yaw);  // true pose is unused
    CHECK(a.left_image.x == b.left_image.x);
    CHECK(a.right_image.x == b.right_image.x);
  }
}

TEST_CASE("mirror symmetry: negating yaw swaps the eyes' screen positions") {
  const RigGeometry rig = testbed_rig();
  for (double yaw_deg = 1.0; yaw_deg <= 25.0; yaw_deg += 6.0) {
    const double yaw = yaw_deg * kDeg;
    const StereoProjection pos = stereo_pair(rig, yaw, yaw);
    const StereoProjection neg = stereo_pair(rig, -yaw, -yaw);
    CHECK(neg.left_image.x == doctest::Approx(-pos.right_image.x).epsilon(1e-12));
    CHECK(neg.right_image.x == doctest::Approx(-pos.left_image.x).epsilon(1e-12));
    CHECK(neg.separation_cm() == doctest::Approx(pos.separation_cm()).epsilon(1e-12));
  }
}

TEST_CASE("stimulus travel for the documented testbed motion, both ray modes") {
  RigGeometry rig = testbed_rig();
  const HeadTrajectory traj = testbed_trajectory();

  rig.ray_mode = RigGeometry::RayMode::eye_center;
  const StimulusTravelReport cor = stimulus_travel(rig, traj, 0.200);
  CHECK(cor.head_forward_cm == doctest::Approx(10.4717).epsilon(1e-4));
  CHECK(cor.travel_zero_lag_cm == doctest::Approx(10.7945).epsilon(1e-4));
  CHECK(cor.travel_at_latency_cm == doctest::Approx(12.4706).epsilon(1e-4));

  rig.ray_mode = RigGeometry::RayMode::visual_axis;
  const StimulusTravelReport va = stimulus_travel(rig, traj, 0.200);
  CHECK(va.head_forward_cm == doctest::Approx(10.7941).epsilon(1e-4));
  CHECK(va.travel_zero_lag_cm == doctest::Approx(10.7805).epsilon(1e-4));
  CHECK(va.travel_at_latency_cm == doctest::Approx(12.4543).epsilon(1e-4));

  // Zero latency: the lagged metric collapses onto the zero-lag metric.
  const StimulusTravelReport zero = stimulus_travel(rig, traj, 0.0);
  CHECK(zero.travel_at_latency_cm ==
        doctest::Approx(zero.travel_zero_lag_cm).epsilon(1e-12));
}

TEST_CASE("sweep trajectories ramp at constant speed and rest at the ends") {
  const HeadTrajectory sweep =
      HeadTrajectory::sweep(-25.0 * kDeg, 25.0 * kDeg, 31.256 * kDeg);
  CHECK(sweep.yaw(-1.0) == doctest::Approx(-25.0 * kDeg).epsilon(1e-12));
  CHECK(sweep.yaw_rate(-1.0) == 0.0);
  const double ramp = 50.0 / 31.256;
  CHECK(sweep.yaw(ramp / 2) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(sweep.yaw_rate(ramp / 2) == doctest::Approx(31.256 * kDeg).epsilon(1e-12));
  CHECK(sweep.yaw(ramp + 1.0) == doctest::Approx(25.0 * kDeg).epsilon(1e-12));
  CHECK(sweep.sample_begin() < 0.0);
  CHECK(sweep.sample_end() > ramp);
}

TEST_CASE("velocity-extrapolated rendering lags the true pose") {
  const HeadTrajectory traj = testbed_trajectory();
  CHECK(rendered_yaw(traj, 0.3, 0.0) == traj.yaw(0.3));
  CHECK(rendered_yaw(traj, 0.3, 0.2) ==
        doctest::Approx(traj.yaw(0.3) - 0.2 * traj.yaw_rate(0.3)).epsilon(1e-15));
}

TEST_CASE("disparity error: zero latency means zero error everywhere") {
  const RigGeometry rig = testbed_rig();
  const DisparityErrorTrace trace = disparity_error_trace(rig, testbed_trajectory(), 0.0);
  CHECK(trace.peak_arcsec == 0.0);
  for (const DisparityErrorSample& s : trace.samples) CHECK(s.error_arcsec == 0.0);
}

TEST_CASE("disparity error at desk scale: 1 ms lag peaks near 39 arcseconds") {
  RigGeometry rig = testbed_rig();
  rig.ipd_cm = 6.1397;
  const HeadTrajectory traj = HeadTrajectory::sinusoid(15.628 * kDeg, 0.5);

  const DisparityErrorTrace one_ms = disparity_error_trace(rig, traj, 1e-3);
  CHECK(std::abs(one_ms.peak_arcsec - 38.8083) < 0.02);

  const DisparityErrorTrace two_ms = disparity_error_trace(rig, traj, 2e-3);
  CHECK(two_ms.peak_arcsec / one_ms.peak_arcsec == doctest::Approx(2.0).epsilon(1e-3));

  // The error vanishes where the head's angular velocity does (sinusoid extremum
  // at a quarter period).
  const DisparityErrorSample* at_quarter = nullptr;
  for (const DisparityErrorSample& s : one_ms.samples)
    if (std::abs(s.t - 0.5) < 1e-9) at_quarter = &s;
  REQUIRE(at_quarter != nullptr);
  CHECK(std::abs(at_quarter->error_arcsec) < 1e-6);
}

TEST_CASE("rig and trajectory validation") {
  RigGeometry rig = testbed_rig();
  rig.kappa_deg = 20.0;
  CHECK_THROWS_AS(rig.validate(), validation_error);
  rig = testbed_rig();
  rig.ipd_cm = 0.0;
  CHECK_THROWS_AS(rig.validate(), validation_error);
  rig = testbed_rig();
  rig.eye_radius_cm = 10.0;  // would put the eye centre behind the head centre
  CHECK_THROWS_AS(rig.validate(), validation_error);

  // Fixation behind the eyes.
  CHECK_THROWS_AS(pose_eyes(testbed_rig(), 0.0, Vec3{0.0, 0.0, -5.0}), validation_error);

  CHECK_THROWS_AS(HeadTrajectory::sinusoid(0.0, 0.5).validate(), validation_error);
  CHECK_THROWS_AS(HeadTrajectory::sweep(0.3, 0.1, 1.0).validate(), validation_error);
  CHECK_THROWS_AS(HeadTrajectory::sweep(-0.3, 0.3, 0.0).validate(), validation_error);
  CHECK_THROWS_AS(disparity_error_trace(testbed_rig(), testbed_trajectory(), 1e-3, 0.0),
                  validation_error);
}
