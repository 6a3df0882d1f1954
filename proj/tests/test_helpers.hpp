#ifndef GPBM_TESTS_TEST_HELPERS_HPP_
#define GPBM_TESTS_TEST_HELPERS_HPP_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "gpbm/image.hpp"
#include "gpbm/matcher.hpp"
#include "gpbm/phase.hpp"

namespace gpbm::test {

// Scratch directory under the working directory, removed on destruction.
struct TempDir {
  std::filesystem::path path;

  explicit TempDir(const std::string& tag) {
    path = std::filesystem::path("gpbm_test_tmp") /
           (tag + "_" + std::to_string(counter()++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }

 private:
  static int& counter() {
    static int n = 0;
    return n;
  }
};

// Deterministic band-limited texture; distinct seeds give distinct faces.
// Values stay within [16, 203] so gains up to 1.25 never clip.
inline RasterImage make_texture(uint32_t seed, int h = 150, int w = 136) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> freq(0.05, 0.45);
  std::uniform_real_distribution<double> phase(0.0, 6.28318);
  std::uniform_real_distribution<double> amp(0.3, 1.0);
  constexpr int kWaves = 10;
  double fy[kWaves], fx[kWaves], ph[kWaves], a[kWaves];
  double total = 0.0;
  for (int i = 0; i < kWaves; ++i) {
    fy[i] = freq(rng);
    fx[i] = freq(rng);
    ph[i] = phase(rng);
    a[i] = amp(rng);
    total += a[i];
  }
  RasterImage img(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int i = 0; i < kWaves; ++i)
        s += a[i] * std::sin(fy[i] * y + fx[i] * x + ph[i]);
      const double v = 109.5 + 93.0 * (s / total);
      img.at(y, x) = static_cast<uint8_t>(std::lround(v));
    }
  }
  return img;
}

// Shifts content by (dy, dx), replicating border pixels into the gap.
inline RasterImage translate_replicate(const RasterImage& img, int dy, int dx) {
  RasterImage out(img.height, img.width);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      int sy = y - dy;
      int sx = x - dx;
      if (sy < 0) sy = 0;
      if (sy >= img.height) sy = img.height - 1;
      if (sx < 0) sx = 0;
      if (sx >= img.width) sx = img.width - 1;
      out.at(y, x) = img.at(sy, sx);
    }
  }
  return out;
}

// Multiplies by gain and re-quantizes to 8 bit.
inline RasterImage apply_gain(const RasterImage& img, double gain) {
  RasterImage out(img.height, img.width);
  for (size_t i = 0; i < img.pixels.size(); ++i) {
    long v = std::lround(img.pixels[i] * gain);
    if (v < 0) v = 0;
    if (v > 255) v = 255;
    out.pixels[i] = static_cast<uint8_t>(v);
  }
  return out;
}

inline PhaseCodeImage random_code_image(std::mt19937& rng, int h, int w,
                                        int ch) {
  std::uniform_int_distribution<int> code(0, 15);
  PhaseCodeImage img(h, w, ch);
  for (uint8_t& c : img.codes) c = static_cast<uint8_t>(code(rng));
  return img;
}

// True when every block's clamped search window keeps at least 2
// candidates, so the slope fit is defined for all blocks.
inline bool matchable_geometry(int h, int w, const MatchParams& p) {
  const BlockGrid grid = segment_blocks(h, w, p);
  for (const Block& b : grid.blocks) {
    int ny = 0, nx = 0;
    for (int dy = -p.search_r; dy <= p.search_r; ++dy)
      if (b.y + dy >= 0 && b.y + dy + p.block_h <= h) ++ny;
    for (int dx = -p.search_c; dx <= p.search_c; ++dx)
      if (b.x + dx >= 0 && b.x + dx + p.block_w <= w) ++nx;
    if (ny * nx < 2) return false;
  }
  return true;
}

inline std::string read_file(const std::string& path) {
  std::string out;
  FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) return out;
  char buf[4096];
  size_t n;
  while ((n = std::fread(buf, 1, sizeof(buf), f)) > 0) out.append(buf, n);
  std::fclose(f);
  return out;
}

inline void write_file(const std::string& path, const std::string& content) {
  FILE* f = std::fopen(path.c_str(), "wb");
  std::fwrite(content.data(), 1, content.size(), f);
  std::fclose(f);
}

}  // namespace gpbm::test

#endif  // GPBM_TESTS_TEST_HELPERS_HPP_
