#pragma once

#include <utility>
#include <vector>

#include "rollscan/time_utils.hpp"

namespace rollscan {

// Radial lens/display model: maps field angle theta (radians off the optical axis)
// to image radius in pixels. All supported kinds are rotationally symmetric and
// strictly monotone over [0, max_angle] with radius_at(0) == 0, so the inverse is
// well defined; polynomial and LUT kinds invert by bisection.
struct DistortionProfile {
  enum class Kind { identity, radial_polynomial, equidistant_fisheye, sampled_lut };

  Kind kind = Kind::identity;
  // Pixels per radian for the linear term (an f-theta lens has radius = focal_scale
  // * theta). The polynomial and LUT kinds are scaled by it too so the same
  // coefficients serve any raster resolution.
  double focal_scale = 1.0;
  // radial_polynomial: odd-power coefficients [c1, c3, c5, ...] giving
  // radius = focal_scale * (c1*theta + c3*theta^3 + c5*theta^5 + ...).
  std::vector<double> coefficients;
  // sampled_lut: monotone (theta, radius/focal_scale) samples, interpolated with a
  // monotone cubic so the inverse stays single valued between samples.
  std::vector<std::pair<double, double>> lut;
  // Fritsch-Carlson endpoint slopes for the LUT, filled by from_samples().
  std::vector<double> lut_slopes;
  // Valid half-field in radians; pixels mapping beyond it are masked invalid.
  double max_angle = 1.5;

  static DistortionProfile identity(double max_angle = 1.5);
  static DistortionProfile fisheye(double focal_scale, double max_angle = 1.5);
  static DistortionProfile polynomial(double focal_scale, std::vector<double> coeffs,
                                      double max_angle = 1.5);
  static DistortionProfile from_samples(double focal_scale,
                                        std::vector<std::pair<double, double>> samples);

  double radius_at(double theta) const;
  // Inverse of radius_at over [0, max_angle]; throws validation_error for radii
  // beyond the valid field.
  double angle_at(double radius) const;
  double max_radius() const { return radius_at(max_angle); }

  // Checks monotonicity/zero-intercept on a dense grid; throws validation_error.
  void validate() const;
};

}  // namespace rollscan
