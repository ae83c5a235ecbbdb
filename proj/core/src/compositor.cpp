#include "rollscan/compositor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rollscan/time_utils.hpp"

namespace rollscan {

namespace {

struct Rgb10 {
  std::int32_t r, g, b;
};

std::int32_t clampi(std::int32_t v, std::int32_t lo, std::int32_t hi) {
  return std::min(std::max(v, lo), hi);
}

std::int32_t at(const Mosaic& m, std::int32_t col, std::int32_t row) {
  // Demosaic neighbours clamp to the full sensor, not the resident window: edge
  // reconstruction must not depend on how the ring buffer happens to be sliced.
  col = clampi(col, 0, m.cols - 1);
  row = clampi(row, 0, m.rows - 1);
  return m.samples[m.index(col, row)];
}

// Bilinear demosaic at an integer photosite. RGGB tiling: even row (R G), odd row
// (G B). Averages round half up.
Rgb10 demosaic(const Mosaic& m, std::int32_t x, std::int32_t y) {
  if (m.pattern == Mosaic::Pattern::mono) {
    const std::int32_t v = at(m, x, y);
    return {v, v, v};
  }
  const std::int32_t v = at(m, x, y);
  const std::int32_t n = at(m, x, y - 1), s = at(m, x, y + 1);
  const std::int32_t w = at(m, x - 1, y), e = at(m, x + 1, y);
  const std::int32_t nw = at(m, x - 1, y - 1), ne = at(m, x + 1, y - 1);
  const std::int32_t sw = at(m, x - 1, y + 1), se = at(m, x + 1, y + 1);
  const std::int32_t cross = (n + s + w + e + 2) / 4;
  const std::int32_t diag = (nw + ne + sw + se + 2) / 4;
  const bool even_row = (y % 2) == 0;
  const bool even_col = (x % 2) == 0;
  if (even_row && even_col) return {v, cross, diag};          // R site
  if (!even_row && !even_col) return {diag, cross, v};        // B site
  if (even_row) return {(w + e + 1) / 2, v, (n + s + 1) / 2};  // G on an R row
  return {(n + s + 1) / 2, v, (w + e + 1) / 2};                // G on a B row
}

}  // namespace

void Mosaic::validate() const {
  if (cols < 2 || rows < 2) throw validation_error("mosaic: needs at least 2x2 sites");
  if (samples.size() != static_cast<std::size_t>(cols) * static_cast<std::size_t>(rows))
    throw validation_error("mosaic: sample count does not match dimensions");
  for (std::uint16_t s : samples)
    if (s > 1023) throw validation_error("mosaic: sample exceeds 10 bits");
}

RgbImage composite_slice(const PixelMapping& mapping, const Mosaic& mosaic,
                         const ColorParams& color, std::int32_t row_begin,
                         std::int32_t row_end, const RowWindow& available) {
  mosaic.validate();
  if (mosaic.cols != mapping.camera.cols || mosaic.rows != mapping.camera.rows)
    throw validation_error("composite: mosaic dimensions do not match the mapping");
  if (row_begin < 0 || row_end > mapping.display.rows || row_begin >= row_end)
    throw validation_error("composite: display row range out of bounds");
  if (color.gamma <= 0.0) throw validation_error("composite: gamma must be positive");

  std::array<std::int32_t, 9> mq;
  for (std::size_t i = 0; i < 9; ++i)
    mq[i] = static_cast<std::int32_t>(std::llround(color.matrix[i] * 1024.0));

  // 10-bit -> 8-bit transfer table. pow() feeds a table of 1024 rounded entries,
  // so float behaviour never reaches the per-pixel path.
  std::array<std::uint8_t, 1024> transfer{};
  for (std::int32_t i = 0; i < 1024; ++i) {
    const double linear = static_cast<double>(i) / 1023.0;
    const double encoded =
        color.gamma == 1.0 ? linear : std::pow(linear, 1.0 / color.gamma);
    transfer[i] =
        static_cast<std::uint8_t>(clampi(static_cast<std::int32_t>(std::llround(encoded * 255.0)), 0, 255));
  }

  RgbImage out;
  out.cols = mapping.display.cols;
  out.rows = row_end - row_begin;
  out.row_begin = row_begin;
  out.rgb.assign(static_cast<std::size_t>(out.cols) * out.rows * 3, 0);

  for (std::int32_t row = row_begin; row < row_end; ++row) {
    for (std::int32_t col = 0; col < out.cols; ++col) {
      const std::size_t mi = mapping.index(col, row);
      if (!mapping.valid[mi]) continue;

      // Quantise the source position once; everything after is exact.
      std::int64_t qx = std::llround(static_cast<double>(mapping.source_col[mi]) * 256.0);
      std::int64_t qy = std::llround(static_cast<double>(mapping.source_row[mi]) * 256.0);
      qx = std::clamp<std::int64_t>(qx, 0, static_cast<std::int64_t>(mosaic.cols - 1) * 256);
      qy = std::clamp<std::int64_t>(qy, 0, static_cast<std::int64_t>(mosaic.rows - 1) * 256);
      std::int32_t ix = static_cast<std::int32_t>(qx >> 8);
      std::int32_t iy = static_cast<std::int32_t>(qy >> 8);
      std::int32_t fx = static_cast<std::int32_t>(qx & 255);
      std::int32_t fy = static_cast<std::int32_t>(qy & 255);
      if (ix >= mosaic.cols - 1) { ix = mosaic.cols - 2; fx = 256; }
      if (iy >= mosaic.rows - 1) { iy = mosaic.rows - 2; fy = 256; }

      const std::int32_t lo_row = clampi(iy - 1, 0, mosaic.rows - 1);
      const std::int32_t hi_row = clampi(iy + 2, 0, mosaic.rows - 1);
      if (!available.contains(lo_row) || !available.contains(hi_row))
        throw validation_error("composite: camera rows " + std::to_string(lo_row) + ".." +
                               std::to_string(hi_row) + " not resident for display row " +
                               std::to_string(row));

      const Rgb10 c00 = demosaic(mosaic, ix, iy);
      const Rgb10 c10 = demosaic(mosaic, ix + 1, iy);
      const Rgb10 c01 = demosaic(mosaic, ix, iy + 1);
      const Rgb10 c11 = demosaic(mosaic, ix + 1, iy + 1);
      const std::int32_t w00 = (256 - fx) * (256 - fy);
      const std::int32_t w10 = fx * (256 - fy);
      const std::int32_t w01 = (256 - fx) * fy;
      const std::int32_t w11 = fx * fy;
      const std::int32_t r =
          (c00.r * w00 + c10.r * w10 + c01.r * w01 + c11.r * w11 + 32768) >> 16;
      const std::int32_t g =
          (c00.g * w00 + c10.g * w10 + c01.g * w01 + c11.g * w11 + 32768) >> 16;
      const std::int32_t b =
          (c00.b * w00 + c10.b * w10 + c01.b * w01 + c11.b * w11 + 32768) >> 16;

      const std::int32_t rm = clampi(static_cast<std::int32_t>(round_div(
                                         std::int64_t(mq[0]) * r + std::int64_t(mq[1]) * g +
                                             std::int64_t(mq[2]) * b,
                                         1024)),
                                     0, 1023);
      const std::int32_t gm = clampi(static_cast<std::int32_t>(round_div(
                                         std::int64_t(mq[3]) * r + std::int64_t(mq[4]) * g +
                                             std::int64_t(mq[5]) * b,
                                         1024)),
                                     0, 1023);
      const std::int32_t bm = clampi(static_cast<std::int32_t>(round_div(
                                         std::int64_t(mq[6]) * r + std::int64_t(mq[7]) * g +
                                             std::int64_t(mq[8]) * b,
                                         1024)),
                                     0, 1023);

      const std::size_t oi =
          (static_cast<std::size_t>(row - row_begin) * out.cols + col) * 3;
      out.rgb[oi + 0] = transfer[rm];
      out.rgb[oi + 1] = transfer[gm];
      out.rgb[oi + 2] = transfer[bm];
    }
  }
  return out;
}

}  // namespace rollscan
