#ifndef GPBM_ALIGN_HPP_
#define GPBM_ALIGN_HPP_

#include <map>
#include <string>

#include "gpbm/image.hpp"

namespace gpbm {

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

// Sub-pixel eye positions; "left" is the eye on the viewer's left,
// so left.x < right.x always holds.
struct EyePair {
  Point left;
  Point right;
  bool operator==(const EyePair&) const = default;
};

// Canonical output frame the faces are registered into.
struct AlignmentSpec {
  int out_height = 150;
  int out_width = 136;
  Point canonical_left{43.0, 52.0};
  Point canonical_right{93.0, 52.0};
  bool operator==(const AlignmentSpec&) const = default;
};

// Rotation + uniform scale + translation, stored as the complex pair
// q = alpha * p + beta with alpha = a + ib.
struct SimilarityTransform {
  double a = 1.0;
  double b = 0.0;
  double tx = 0.0;
  double ty = 0.0;

  Point apply(Point p) const {
    return {a * p.x - b * p.y + tx, b * p.x + a * p.y + ty};
  }
  Point invert(Point q) const;
};

// Solves the two-point similarity system mapping `from` onto `to`.
// Throws Errc::degenerate_eyes when the source eyes are closer than 1 px.
SimilarityTransform solve_similarity(const EyePair& from, const EyePair& to);

// Warps img into the canonical frame: the transform maps `eyes` onto the
// spec's canonical eye coordinates; bilinear resampling, border replicate.
RasterImage align_face(const RasterImage& img, const EyePair& eyes,
                       const AlignmentSpec& spec);

// Parses an eye list: one "<image-id> <lx> <ly> <rx> <ry>" per line,
// '#' starts a comment. Duplicate ids and lx >= rx are errors.
std::map<std::string, EyePair> parse_eye_list(const std::string& path);

}  // namespace gpbm

#endif  // GPBM_ALIGN_HPP_
