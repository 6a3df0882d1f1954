#include "gpbm/gabor.hpp"

#include <cmath>
#include <cstdio>

#include "gpbm/error.hpp"

namespace gpbm {

void GaborParams::validate() const {
  if (!(k_max > 0.0))
    throw Error(Errc::invalid_config, "k_max must be > 0");
  if (!(f > 1.0))
    throw Error(Errc::invalid_config, "f must be > 1");
  if (!(sigma > 0.0))
    throw Error(Errc::invalid_config, "sigma must be > 0");
  if (v < 0)
    throw Error(Errc::invalid_config, "v must be >= 0");
  if (kernel_size < 1)
    throw Error(Errc::invalid_config, "kernel_size must be >= 1");
  if (orientations.empty())
    throw Error(Errc::invalid_config, "orientations must be non-empty");
  bool seen[8] = {};
  for (uint8_t u : orientations) {
    if (u > 7)
      throw Error(Errc::invalid_config, "orientation index out of [0,7]");
    if (seen[u])
      throw Error(Errc::invalid_config, "duplicate orientation index");
    seen[u] = true;
  }
}

GaborKernel make_kernel(const GaborParams& params, int u) {
  params.validate();
  if (u < 0 || u > 7)
    throw Error(Errc::out_of_range, "orientation index out of [0,7]");

  const int n = params.kernel_size;
  const double kv = params.k_max / std::pow(params.f, params.v);
  const double phi = u * kPi / 8.0;
  const double kx = kv * std::cos(phi);
  const double ky = kv * std::sin(phi);
  const double k2 = kv * kv;
  const double sigma2 = params.sigma * params.sigma;
  const double gain = k2 / sigma2;
  const double dc = std::exp(-sigma2 / 2.0);
  const double center = (n - 1) / 2.0;

  GaborKernel kernel;
  kernel.size = n;
  kernel.u = u;
  kernel.v = params.v;
  kernel.taps.resize(static_cast<size_t>(n) * n);
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      const double zx = col - center;
      const double zy = row - center;
      const double envelope =
          gain * std::exp(-k2 * (zx * zx + zy * zy) / (2.0 * sigma2));
      const double arg = kx * zx + ky * zy;
      kernel.taps[static_cast<size_t>(row) * n + col] = {
          envelope * (std::cos(arg) - dc), envelope * std::sin(arg)};
    }
  }
  return kernel;
}

ComplexResponseMap convolve(const RasterImage& img, const GaborKernel& kernel) {
  const int h = img.height;
  const int w = img.width;
  const int n = kernel.size;
  const int anchor = (n - 1) / 2;

  ComplexResponseMap out;
  out.height = h;
  out.width = w;
  out.u = kernel.u;
  out.re.assign(static_cast<size_t>(h) * w, 0.0);
  out.im.assign(static_cast<size_t>(h) * w, 0.0);

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double sum_re = 0.0;
      double sum_im = 0.0;
      for (int r = 0; r < n; ++r) {
        int sy = y + r - anchor;
        if (sy < 0) sy = 0;
        if (sy >= h) sy = h - 1;
        for (int c = 0; c < n; ++c) {
          int sx = x + c - anchor;
          if (sx < 0) sx = 0;
          if (sx >= w) sx = w - 1;
          const std::complex<double> tap =
              kernel.taps[static_cast<size_t>(r) * n + c];
          const double v = img.at(sy, sx);
          sum_re += tap.real() * v;
          sum_im += tap.imag() * v;
        }
      }
      out.re[static_cast<size_t>(y) * w + x] = sum_re;
      out.im[static_cast<size_t>(y) * w + x] = sum_im;
    }
  }
  return out;
}

std::vector<ComplexResponseMap> filter_bank(const RasterImage& img,
                                            const GaborParams& params) {
  params.validate();
  std::vector<ComplexResponseMap> maps;
  maps.reserve(params.orientations.size());
  for (uint8_t u : params.orientations)
    maps.push_back(convolve(img, make_kernel(params, u)));
  return maps;
}

std::string kernel_to_csv(const GaborKernel& kernel) {
  std::string out;
  char buf[96];
  for (int row = 0; row < kernel.size; ++row) {
    for (int col = 0; col < kernel.size; ++col) {
      const std::complex<double> tap = kernel.at(row, col);
      std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g\n", row, col,
                    tap.real(), tap.imag());
      out += buf;
    }
  }
  return out;
}

}  // namespace gpbm
