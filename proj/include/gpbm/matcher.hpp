#ifndef GPBM_MATCHER_HPP_
#define GPBM_MATCHER_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "gpbm/phase.hpp"

namespace gpbm {

struct MatchParams {
  int block_h = 29;       // H
  int block_w = 19;       // W
  int search_r = 7;       // vertical offset bound R
  int search_c = 6;       // horizontal offset bound C
  int fit_count = 5;      // points in the slope fit
  double epsilon = 1e-12; // guards k_n / d_n when d_n = 0

  void validate() const;
  bool operator==(const MatchParams&) const = default;
};

struct Block {
  int x = 0;  // top-left column
  int y = 0;  // top-left row
};

// Centered non-overlapping grid; residual margins split evenly with the
// extra pixel going to bottom/right. Blocks in row-major order.
struct BlockGrid {
  int rows = 0;
  int cols = 0;
  int block_h = 0;
  int block_w = 0;
  int top_margin = 0;
  int left_margin = 0;
  std::vector<Block> blocks;

  int count() const { return rows * cols; }
};

struct Candidate {
  double dist = 0.0;
  int dy = 0;
  int dx = 0;
};

// Per-candidate distances in row-major (dy, dx) enumeration order.
struct DistanceVector {
  std::vector<Candidate> candidates;
  int count() const { return static_cast<int>(candidates.size()); }
};

struct BlockMatch {
  int index = 0;
  double min_dist = 0.0;  // d_n
  int best_dy = 0;
  int best_dx = 0;
  double slope = 0.0;     // k_n
  double factor = 0.0;    // s_n
  double weight = 0.0;    // s_n after normalization
};

struct MatchReport {
  std::vector<BlockMatch> blocks;
  double dist = 0.0;
};

BlockGrid segment_blocks(int height, int width, const MatchParams& params);

// 2-norm over per-element Hamming distances of two H x W patches; every
// (pixel, channel) pair is one element.
double patch_distance(const PhaseCodeImage& probe, const PhaseCodeImage& gallery,
                      Block probe_tl, Block gallery_tl, const MatchParams& params);

// Full search over [-R, R] x [-C, C]; offsets whose gallery patch would
// leave the image are skipped.
DistanceVector search_block(const PhaseCodeImage& probe,
                            const PhaseCodeImage& gallery, Block block,
                            const MatchParams& params);

// OLS slope of an ascending head against indices 0..m-1.
double fit_slope(const std::vector<double>& sorted_head);

MatchReport pair_distance(const PhaseCodeImage& probe,
                          const PhaseCodeImage& gallery,
                          const MatchParams& params);

// R = round(max(H, W) / 4), C = max(1, round(R / 1.2)).
std::pair<int, int> suggest_search_offsets(int block_h, int block_w);

// Structured text: header, one "n,d,dy,dx,slope,weight" record per block,
// then a final "dist,<value>" line.
std::string report_to_text(const MatchReport& report);

}  // namespace gpbm

#endif  // GPBM_MATCHER_HPP_
