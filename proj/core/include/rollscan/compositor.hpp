#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rollscan/mapping.hpp"

namespace rollscan {

// Raw sensor read-out: one 10-bit sample per photosite, row-major.
struct Mosaic {
  enum class Pattern { rggb, mono };
  std::int32_t cols = 0;
  std::int32_t rows = 0;
  Pattern pattern = Pattern::rggb;
  std::vector<std::uint16_t> samples;

  std::size_t index(std::int32_t col, std::int32_t row) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(cols) + col;
  }
  void validate() const;
};

struct ColorParams {
  // Row-major 3x3 applied to linear (r, g, b); quantised to 1/1024 steps so the
  // pipeline stays integer-only end to end.
  std::array<double, 9> matrix{1, 0, 0, 0, 1, 0, 0, 0, 1};
  double gamma = 2.2;  // encode exponent; 1.0 keeps the transfer linear
};

// Camera rows currently resident in the ring buffer, both ends inclusive.
struct RowWindow {
  std::int32_t first = 0;
  std::int32_t last = -1;
  bool contains(std::int32_t row) const { return row >= first && row <= last; }
};

struct RgbImage {
  std::int32_t cols = 0;
  std::int32_t rows = 0;           // display rows [row_begin, row_end) of the slice
  std::int32_t row_begin = 0;      // first display row this image covers
  std::vector<std::uint8_t> rgb;   // 3 bytes per pixel, row-major
};

// Renders display rows [row_begin, row_end) through the mapping: bilinear sample of
// the demosaiced mosaic at the source position (quantised once to 1/256 px), colour
// matrix, gamma encode to 8 bits. Integer arithmetic throughout, so one platform's
// output is every platform's output. Unmapped display pixels come out black.
// Throws validation_error when a needed camera row (including the one-row demosaic
// apron) is outside `available` — the buffer under-run the scheduler must prevent.
RgbImage composite_slice(const PixelMapping& mapping, const Mosaic& mosaic,
                         const ColorParams& color, std::int32_t row_begin,
                         std::int32_t row_end, const RowWindow& available);

}  // namespace rollscan
