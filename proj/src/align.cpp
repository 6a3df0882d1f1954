#include "gpbm/align.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "gpbm/error.hpp"

namespace gpbm {

Point SimilarityTransform::invert(Point q) const {
  const double det = a * a + b * b;
  const double dx = q.x - tx;
  const double dy = q.y - ty;
  return {(a * dx + b * dy) / det, (a * dy - b * dx) / det};
}

SimilarityTransform solve_similarity(const EyePair& from, const EyePair& to) {
  const double sx = from.right.x - from.left.x;
  const double sy = from.right.y - from.left.y;
  if (std::hypot(sx, sy) < 1.0)
    throw Error(Errc::degenerate_eyes, "inter-eye distance below 1 pixel");

  // alpha = (to.right - to.left) / (from.right - from.left) in C
  const double dx = to.right.x - to.left.x;
  const double dy = to.right.y - to.left.y;
  const double den = sx * sx + sy * sy;
  SimilarityTransform t;
  t.a = (dx * sx + dy * sy) / den;
  t.b = (dy * sx - dx * sy) / den;
  t.tx = to.left.x - (t.a * from.left.x - t.b * from.left.y);
  t.ty = to.left.y - (t.b * from.left.x + t.a * from.left.y);
  return t;
}

namespace {

double bilinear_replicate(const RasterImage& img, double x, double y) {
  if (x < 0.0) x = 0.0;
  if (y < 0.0) y = 0.0;
  if (x > img.width - 1) x = img.width - 1;
  if (y > img.height - 1) y = img.height - 1;
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, img.width - 1);
  const int y1 = std::min(y0 + 1, img.height - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  const double top = (1.0 - fx) * img.at(y0, x0) + fx * img.at(y0, x1);
  const double bot = (1.0 - fx) * img.at(y1, x0) + fx * img.at(y1, x1);
  return (1.0 - fy) * top + fy * bot;
}

}  // namespace

RasterImage align_face(const RasterImage& img, const EyePair& eyes,
                       const AlignmentSpec& spec) {
  if (!(eyes.left.x < eyes.right.x))
    throw Error(Errc::degenerate_eyes,
                "left eye must lie left of the right eye");
  const EyePair canonical{spec.canonical_left, spec.canonical_right};
  const SimilarityTransform t = solve_similarity(eyes, canonical);

  RasterImage out(spec.out_height, spec.out_width);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      const Point src = t.invert({static_cast<double>(x),
                                  static_cast<double>(y)});
      const double v = bilinear_replicate(img, src.x, src.y);
      long p = std::lround(v);
      if (p < 0) p = 0;
      if (p > 255) p = 255;
      out.at(y, x) = static_cast<uint8_t>(p);
    }
  }
  return out;
}

std::map<std::string, EyePair> parse_eye_list(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(Errc::file_not_found, path + ": cannot open");

  std::map<std::string, EyePair> eyes;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string id;
    if (!(ls >> id)) continue;  // blank line
    EyePair p;
    if (!(ls >> p.left.x >> p.left.y >> p.right.x >> p.right.y))
      throw Error(Errc::parse_error,
                  path + ":" + std::to_string(lineno) + ": expected "
                  "<image-id> <lx> <ly> <rx> <ry>");
    std::string extra;
    if (ls >> extra)
      throw Error(Errc::parse_error,
                  path + ":" + std::to_string(lineno) + ": trailing token '" +
                  extra + "'");
    if (!(p.left.x < p.right.x))
      throw Error(Errc::parse_error,
                  path + ":" + std::to_string(lineno) +
                  ": left eye x must be smaller than right eye x");
    if (!eyes.emplace(id, p).second)
      throw Error(Errc::duplicate_id,
                  path + ":" + std::to_string(lineno) + ": duplicate id '" +
                  id + "'");
  }
  return eyes;
}

}  // namespace gpbm
