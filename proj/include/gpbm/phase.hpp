#ifndef GPBM_PHASE_HPP_
#define GPBM_PHASE_HPP_

#include <cstdint>
#include <vector>

#include "gpbm/gabor.hpp"
#include "gpbm/image.hpp"

namespace gpbm {

// Per-pixel, per-orientation 4-bit Gray codes; one byte per code,
// channel-planar: codes[(ch * height + y) * width + x].
struct PhaseCodeImage {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<uint8_t> codes;

  PhaseCodeImage() = default;
  PhaseCodeImage(int h, int w, int ch)
      : height(h),
        width(w),
        channels(ch),
        codes(static_cast<size_t>(ch) * h * w, 0) {}

  uint8_t at(int ch, int y, int x) const {
    return codes[(static_cast<size_t>(ch) * height + y) * width + x];
  }
  uint8_t& at(int ch, int y, int x) {
    return codes[(static_cast<size_t>(ch) * height + y) * width + x];
  }

  bool operator==(const PhaseCodeImage&) const = default;
};

// Reflected binary Gray code of a 16-PSK sector index.
uint8_t gray_code(int sector);

// popcount(a ^ b) for two 4-bit codes.
int code_distance(uint8_t a, uint8_t b);

// Quantizes each response to one of 16 phase sectors with centers at
// s * pi/8, then Gray-codes the sector. (re, im) = (0, 0) maps to sector 0.
PhaseCodeImage demodulate(const ComplexResponseMap& resp);

// Filter bank + demodulation; one channel per orientation.
PhaseCodeImage encode_face(const RasterImage& img, const GaborParams& params);

}  // namespace gpbm

#endif  // GPBM_PHASE_HPP_
