#ifndef GPBM_GABOR_HPP_
#define GPBM_GABOR_HPP_

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "gpbm/image.hpp"

namespace gpbm {

inline constexpr double kPi = 3.14159265358979323846;

struct GaborParams {
  double k_max = kPi / 2.0;
  double f = 1.4142135623730951;  // sqrt(2)
  double sigma = 2.0 * kPi;
  int v = 0;
  std::vector<uint8_t> orientations{2, 6};
  int kernel_size = 6;

  void validate() const;  // throws Errc::invalid_config on bad fields
  bool operator==(const GaborParams&) const = default;
};

struct GaborKernel {
  int size = 0;
  int u = 0;
  int v = 0;
  std::vector<std::complex<double>> taps;  // row-major, size*size

  std::complex<double> at(int row, int col) const {
    return taps[static_cast<size_t>(row) * size + col];
  }
};

struct ComplexResponseMap {
  int height = 0;
  int width = 0;
  int u = 0;
  std::vector<double> re;
  std::vector<double> im;
};

// Samples the complex Gabor carrier-minus-DC kernel for orientation index u.
// Taps sit at offsets z = (col - c, row - c) with c = (size - 1) / 2, so an
// even size uses a half-pixel center.
GaborKernel make_kernel(const GaborParams& params, int u);

// Dense correlation (kernel slid without flip) with replicate padding;
// output has the input's dimensions.
ComplexResponseMap convolve(const RasterImage& img, const GaborKernel& kernel);

// One response map per entry of params.orientations, in listed order.
std::vector<ComplexResponseMap> filter_bank(const RasterImage& img,
                                            const GaborParams& params);

// CSV rows "row,col,re,im", one per tap.
std::string kernel_to_csv(const GaborKernel& kernel);

}  // namespace gpbm

#endif  // GPBM_GABOR_HPP_
