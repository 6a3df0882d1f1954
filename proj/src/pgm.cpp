#include "gpbm/image.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>

#include "gpbm/error.hpp"

namespace gpbm {
namespace {

// Reads the next header token, skipping whitespace and '#' comments.
bool next_token(std::istream& in, std::string& tok) {
  tok.clear();
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) continue;
    break;
  }
  if (c == EOF) return false;
  do {
    tok.push_back(static_cast<char>(c));
    c = in.get();
  } while (c != EOF && !std::isspace(c) && c != '#');
  if (c == '#') in.unget();
  return true;
}

int parse_positive(const std::string& tok, const std::string& path,
                   const char* what) {
  size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(tok, &pos);
  } catch (const std::exception&) {
    throw Error(Errc::malformed_header,
                path + ": bad " + what + " '" + tok + "'");
  }
  if (pos != tok.size() || v <= 0)
    throw Error(Errc::malformed_header,
                path + ": bad " + what + " '" + tok + "'");
  return static_cast<int>(v);
}

}  // namespace

RasterImage load_grayscale(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(Errc::file_not_found, path + ": cannot open");

  std::string magic;
  if (!next_token(in, magic))
    throw Error(Errc::malformed_header, path + ": empty file");
  if (magic != "P2" && magic != "P5") {
    if (magic == "P1" || magic == "P3" || magic == "P4" || magic == "P6")
      throw Error(Errc::unsupported_depth,
                  path + ": unsupported netpbm variant " + magic);
    throw Error(Errc::malformed_header, path + ": bad magic '" + magic + "'");
  }

  std::string tok;
  if (!next_token(in, tok))
    throw Error(Errc::malformed_header, path + ": missing width");
  const int width = parse_positive(tok, path, "width");
  if (!next_token(in, tok))
    throw Error(Errc::malformed_header, path + ": missing height");
  const int height = parse_positive(tok, path, "height");
  if (!next_token(in, tok))
    throw Error(Errc::malformed_header, path + ": missing maxval");
  const int maxval = parse_positive(tok, path, "maxval");
  if (maxval != 255)
    throw Error(Errc::unsupported_depth,
                path + ": maxval " + std::to_string(maxval) + ", want 255");

  RasterImage img(height, width);
  const size_t n = img.pixels.size();

  if (magic == "P5") {
    // exactly one whitespace byte separates the header from the raster
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(n));
    if (static_cast<size_t>(in.gcount()) != n)
      throw Error(Errc::malformed_header, path + ": truncated raster");
  } else {
    for (size_t i = 0; i < n; ++i) {
      if (!next_token(in, tok))
        throw Error(Errc::malformed_header, path + ": truncated raster");
      size_t pos = 0;
      long v = -1;
      try {
        v = std::stol(tok, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != tok.size() || v < 0 || v > maxval)
        throw Error(Errc::malformed_header,
                    path + ": bad sample '" + tok + "'");
      img.pixels[i] = static_cast<uint8_t>(v);
    }
  }
  return img;
}

void save_pgm(const RasterImage& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(Errc::io_error, path + ": cannot open for writing");
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
  if (!out)
    throw Error(Errc::io_error, path + ": write failed");
}

}  // namespace gpbm
