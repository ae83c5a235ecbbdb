#include "rollscan/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rollscan {

namespace {

// Fritsch-Carlson slopes for a monotone cubic through monotone samples. Keeps the
// interpolant monotone so the numeric inverse cannot find two preimages.
std::vector<double> pchip_slopes(const std::vector<std::pair<double, double>>& pts) {
  const std::size_t n = pts.size();
  std::vector<double> h(n - 1), delta(n - 1), m(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = pts[i + 1].first - pts[i].first;
    delta[i] = (pts[i + 1].second - pts[i].second) / h[i];
  }
  m[0] = delta[0];
  m[n - 1] = delta[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      m[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      m[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  return m;
}

double pchip_eval(const std::vector<std::pair<double, double>>& pts,
                  const std::vector<double>& m, double x) {
  const std::size_t n = pts.size();
  if (x <= pts.front().first) return pts.front().second + m.front() * (x - pts.front().first);
  if (x >= pts.back().first) return pts.back().second + m.back() * (x - pts.back().first);
  std::size_t lo = 0, hi = n - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    (pts[mid].first <= x ? lo : hi) = mid;
  }
  const double h = pts[lo + 1].first - pts[lo].first;
  const double t = (x - pts[lo].first) / h;
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
  const double h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t);
  const double h11 = t * t * (t - 1);
  return h00 * pts[lo].second + h10 * h * m[lo] + h01 * pts[lo + 1].second +
         h11 * h * m[lo + 1];
}

}  // namespace

DistortionProfile DistortionProfile::identity(double max_angle) {
  DistortionProfile p;
  p.kind = Kind::identity;
  p.max_angle = max_angle;
  return p;
}

DistortionProfile DistortionProfile::fisheye(double focal_scale, double max_angle) {
  DistortionProfile p;
  p.kind = Kind::equidistant_fisheye;
  p.focal_scale = focal_scale;
  p.max_angle = max_angle;
  p.validate();
  return p;
}

DistortionProfile DistortionProfile::polynomial(double focal_scale,
                                                std::vector<double> coeffs,
                                                double max_angle) {
  DistortionProfile p;
  p.kind = Kind::radial_polynomial;
  p.focal_scale = focal_scale;
  p.coefficients = std::move(coeffs);
  p.max_angle = max_angle;
  p.validate();
  return p;
}

DistortionProfile DistortionProfile::from_samples(
    double focal_scale, std::vector<std::pair<double, double>> samples) {
  DistortionProfile p;
  p.kind = Kind::sampled_lut;
  p.focal_scale = focal_scale;
  p.lut = std::move(samples);
  if (p.lut.size() < 2) throw validation_error("sampled_lut: need at least 2 samples");
  p.max_angle = p.lut.back().first;
  p.lut_slopes = pchip_slopes(p.lut);
  p.validate();
  return p;
}

double DistortionProfile::radius_at(double theta) const {
  switch (kind) {
    case Kind::identity:
    case Kind::equidistant_fisheye:
      return focal_scale * theta;
    case Kind::radial_polynomial: {
      const double t2 = theta * theta;
      double acc = 0.0;
      for (std::size_t i = coefficients.size(); i-- > 0;) acc = acc * t2 + coefficients[i];
      return focal_scale * theta * acc;
    }
    case Kind::sampled_lut:
      if (lut_slopes.size() != lut.size())
        throw validation_error("sampled_lut: construct via from_samples()");
      return focal_scale * pchip_eval(lut, lut_slopes, theta);
  }
  throw validation_error("distortion profile: bad kind");
}

double DistortionProfile::angle_at(double radius) const {
  if (radius < 0.0) throw validation_error("angle_at: negative radius");
  switch (kind) {
    case Kind::identity:
    case Kind::equidistant_fisheye: {
      const double theta = radius / focal_scale;
      if (theta > max_angle * (1.0 + 1e-12))
        throw validation_error("angle_at: radius beyond valid field");
      return theta;
    }
    default:
      break;
  }
  if (radius > max_radius() * (1.0 + 1e-12))
    throw validation_error("angle_at: radius beyond valid field");
  // Monotone bisection; 64 halvings put the error far below a micro-pixel.
  double lo = 0.0, hi = max_angle;
  for (int i = 0; i < 64 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (radius_at(mid) < radius ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void DistortionProfile::validate() const {
  if (focal_scale <= 0.0) throw validation_error("distortion profile: focal_scale must be positive");
  if (max_angle <= 0.0) throw validation_error("distortion profile: max_angle must be positive");
  if (kind == Kind::radial_polynomial && coefficients.empty())
    throw validation_error("radial_polynomial: no coefficients");
  if (kind == Kind::sampled_lut) {
    for (std::size_t i = 0; i + 1 < lut.size(); ++i)
      if (!(lut[i].first < lut[i + 1].first && lut[i].second < lut[i + 1].second))
        throw validation_error("sampled_lut: samples must be strictly increasing");
    if (std::abs(lut.front().first) > 1e-12 || std::abs(lut.front().second) > 1e-12)
      throw validation_error("sampled_lut: first sample must be (0, 0)");
  }
  if (std::abs(radius_at(0.0)) > 1e-12)
    throw validation_error("distortion profile: radius_at(0) must be 0");
  const int kSteps = 512;
  double prev = 0.0;
  for (int i = 1; i <= kSteps; ++i) {
    const double theta = max_angle * i / kSteps;
    const double r = radius_at(theta);
    if (r <= prev)
      throw validation_error("distortion profile: radius not strictly increasing at theta=" +
                             std::to_string(theta));
    prev = r;
  }
}

}  // namespace rollscan
