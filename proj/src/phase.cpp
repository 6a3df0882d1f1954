#include "gpbm/phase.hpp"

#include <bit>
#include <cmath>

#include "gpbm/error.hpp"

namespace gpbm {

uint8_t gray_code(int sector) {
  if (sector < 0 || sector > 15)
    throw Error(Errc::out_of_range, "sector index out of [0,15]");
  return static_cast<uint8_t>(sector ^ (sector >> 1));
}

int code_distance(uint8_t a, uint8_t b) {
  if (a > 15 || b > 15)
    throw Error(Errc::out_of_range, "code out of [0,15]");
  return std::popcount(static_cast<unsigned>(a ^ b));
}

namespace {

// Sector centers sit at s * pi/8; boundaries halfway between.
int phase_sector(double re, double im) {
  if (re == 0.0 && im == 0.0) return 0;
  const double theta = std::atan2(im, re);
  double shifted = std::fmod(theta + kPi / 16.0, 2.0 * kPi);
  if (shifted < 0.0) shifted += 2.0 * kPi;
  const int s = static_cast<int>(std::floor(shifted / (kPi / 8.0)));
  return s & 15;
}

}  // namespace

PhaseCodeImage demodulate(const ComplexResponseMap& resp) {
  PhaseCodeImage out(resp.height, resp.width, 1);
  const size_t n = static_cast<size_t>(resp.height) * resp.width;
  for (size_t i = 0; i < n; ++i)
    out.codes[i] = gray_code(phase_sector(resp.re[i], resp.im[i]));
  return out;
}

PhaseCodeImage encode_face(const RasterImage& img, const GaborParams& params) {
  const std::vector<ComplexResponseMap> maps = filter_bank(img, params);
  PhaseCodeImage out(img.height, img.width,
                     static_cast<int>(maps.size()));
  const size_t plane = static_cast<size_t>(img.height) * img.width;
  for (size_t ch = 0; ch < maps.size(); ++ch) {
    const PhaseCodeImage one = demodulate(maps[ch]);
    std::copy(one.codes.begin(), one.codes.end(),
              out.codes.begin() + static_cast<ptrdiff_t>(ch * plane));
  }
  return out;
}

}  // namespace gpbm
