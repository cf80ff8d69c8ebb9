#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "stcf/quadform.hpp"

namespace stcf {

class PgmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 8-bit binary (P5) graymap. `header` keeps the bytes before the raster so
/// an unmodified image is written back byte for byte.
struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  int maxval = 255;
  std::vector<std::uint8_t> pixels;  // row-major
  std::string header;

  /// Intensities scaled to [0, 1] by division by maxval.
  Vec to_unit() const;
  /// Canonical maxval-255 image from [0, 1] intensities, rounding half up
  /// and clamping.
  static GrayImage from_unit(const Vec& v, std::size_t width, std::size_t height);
};

GrayImage parse_pgm(const std::string& bytes);
std::string format_pgm(const GrayImage& img);
GrayImage read_pgm(const std::string& path);
/// Atomic: writes a sibling temporary file and renames it into place.
void write_pgm(const std::string& path, const GrayImage& img);

/// Writes `content` to `path` through a temporary file and rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace stcf
