#ifndef GPBM_IMAGE_HPP_
#define GPBM_IMAGE_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace gpbm {

// 8-bit grayscale raster, row-major.
struct RasterImage {
  int height = 0;
  int width = 0;
  std::vector<uint8_t> pixels;

  RasterImage() = default;
  RasterImage(int h, int w, uint8_t fill = 0)
      : height(h), width(w), pixels(static_cast<size_t>(h) * w, fill) {}

  uint8_t at(int y, int x) const {
    return pixels[static_cast<size_t>(y) * width + x];
  }
  uint8_t& at(int y, int x) {
    return pixels[static_cast<size_t>(y) * width + x];
  }

  bool operator==(const RasterImage&) const = default;
};

// Reads a PGM file (text "P2" or binary "P5", maxval must be 255).
RasterImage load_grayscale(const std::string& path);

// Writes binary P5, maxval 255.
void save_pgm(const RasterImage& img, const std::string& path);

}  // namespace gpbm

#endif  // GPBM_IMAGE_HPP_
