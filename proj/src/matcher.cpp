#include "gpbm/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "gpbm/error.hpp"

namespace gpbm {

void MatchParams::validate() const {
  if (block_h < 1 || block_w < 1)
    throw Error(Errc::invalid_config, "block dimensions must be >= 1");
  if (search_r < 0 || search_c < 0)
    throw Error(Errc::invalid_config, "search offsets must be >= 0");
  if (fit_count < 2)
    throw Error(Errc::invalid_config, "fit_count must be >= 2");
  if (!(epsilon > 0.0))
    throw Error(Errc::invalid_config, "epsilon must be > 0");
}

BlockGrid segment_blocks(int height, int width, const MatchParams& params) {
  params.validate();
  if (params.block_h > height || params.block_w > width)
    throw Error(Errc::block_larger_than_image,
                "block " + std::to_string(params.block_h) + "x" +
                std::to_string(params.block_w) + " exceeds image " +
                std::to_string(height) + "x" + std::to_string(width));

  BlockGrid grid;
  grid.block_h = params.block_h;
  grid.block_w = params.block_w;
  grid.rows = height / params.block_h;
  grid.cols = width / params.block_w;
  grid.top_margin = (height - grid.rows * params.block_h) / 2;
  grid.left_margin = (width - grid.cols * params.block_w) / 2;
  grid.blocks.reserve(static_cast<size_t>(grid.rows) * grid.cols);
  for (int r = 0; r < grid.rows; ++r)
    for (int c = 0; c < grid.cols; ++c)
      grid.blocks.push_back({grid.left_margin + c * params.block_w,
                             grid.top_margin + r * params.block_h});
  return grid;
}

namespace {

// squared popcount of the XOR of two 4-bit codes, indexed by the XOR word
constexpr int kSqDist[16] = {0, 1, 1, 4, 1, 4, 4, 9, 1, 4, 4, 9, 4, 9, 9, 16};

// Integer sum of squared element distances; bounds already checked.
long long patch_sq_sum(const PhaseCodeImage& probe,
                       const PhaseCodeImage& gallery, Block ptl, Block gtl,
                       int bh, int bw) {
  long long sum = 0;
  for (int ch = 0; ch < probe.channels; ++ch) {
    for (int row = 0; row < bh; ++row) {
      const uint8_t* pa =
          &probe.codes[(static_cast<size_t>(ch) * probe.height + ptl.y + row) *
                           probe.width +
                       ptl.x];
      const uint8_t* pb =
          &gallery
               .codes[(static_cast<size_t>(ch) * gallery.height + gtl.y + row) *
                          gallery.width +
                      gtl.x];
      for (int col = 0; col < bw; ++col)
        sum += kSqDist[(pa[col] ^ pb[col]) & 15];
    }
  }
  return sum;
}

void check_patch(const PhaseCodeImage& img, Block tl, int bh, int bw,
                 const char* side) {
  if (tl.x < 0 || tl.y < 0 || tl.x + bw > img.width || tl.y + bh > img.height)
    throw Error(Errc::patch_out_of_bounds,
                std::string(side) + " patch leaves the image");
}

}  // namespace

double patch_distance(const PhaseCodeImage& probe, const PhaseCodeImage& gallery,
                      Block probe_tl, Block gallery_tl,
                      const MatchParams& params) {
  if (probe.channels != gallery.channels)
    throw Error(Errc::channel_mismatch, "channel counts differ");
  check_patch(probe, probe_tl, params.block_h, params.block_w, "probe");
  check_patch(gallery, gallery_tl, params.block_h, params.block_w, "gallery");
  return std::sqrt(static_cast<double>(patch_sq_sum(
      probe, gallery, probe_tl, gallery_tl, params.block_h, params.block_w)));
}

DistanceVector search_block(const PhaseCodeImage& probe,
                            const PhaseCodeImage& gallery, Block block,
                            const MatchParams& params) {
  if (probe.channels != gallery.channels)
    throw Error(Errc::channel_mismatch, "channel counts differ");
  check_patch(probe, block, params.block_h, params.block_w, "probe");

  DistanceVector dv;
  dv.candidates.reserve(static_cast<size_t>(2 * params.search_r + 1) *
                        (2 * params.search_c + 1));
  for (int dy = -params.search_r; dy <= params.search_r; ++dy) {
    const int gy = block.y + dy;
    if (gy < 0 || gy + params.block_h > gallery.height) continue;
    for (int dx = -params.search_c; dx <= params.search_c; ++dx) {
      const int gx = block.x + dx;
      if (gx < 0 || gx + params.block_w > gallery.width) continue;
      const double d = std::sqrt(static_cast<double>(
          patch_sq_sum(probe, gallery, block, {gx, gy}, params.block_h,
                       params.block_w)));
      dv.candidates.push_back({d, dy, dx});
    }
  }
  return dv;
}

double fit_slope(const std::vector<double>& sorted_head) {
  const int m = static_cast<int>(sorted_head.size());
  if (m < 2)
    throw Error(Errc::too_few_candidates,
                "slope fit needs at least 2 points, got " +
                std::to_string(m));
  const double mean_j = (m - 1) / 2.0;
  double mean_v = 0.0;
  for (double v : sorted_head) mean_v += v;
  mean_v /= m;
  double num = 0.0;
  double den = 0.0;
  for (int j = 0; j < m; ++j) {
    num += (j - mean_j) * (sorted_head[j] - mean_v);
    den += (j - mean_j) * (j - mean_j);
  }
  return num / den;
}

MatchReport pair_distance(const PhaseCodeImage& probe,
                          const PhaseCodeImage& gallery,
                          const MatchParams& params) {
  if (probe.height != gallery.height || probe.width != gallery.width)
    throw Error(Errc::dimension_mismatch, "probe/gallery dimensions differ");
  if (probe.channels != gallery.channels)
    throw Error(Errc::channel_mismatch, "channel counts differ");

  const BlockGrid grid = segment_blocks(probe.height, probe.width, params);
  const int n_blocks = grid.count();

  MatchReport report;
  report.blocks.resize(n_blocks);
  double factor_sum = 0.0;
  for (int n = 0; n < n_blocks; ++n) {
    DistanceVector dv = search_block(probe, gallery, grid.blocks[n], params);
    // stable sort keeps the row-major (dy, dx) enumeration order for ties
    std::stable_sort(dv.candidates.begin(), dv.candidates.end(),
                     [](const Candidate& a, const Candidate& b) {
                       return a.dist < b.dist;
                     });
    const int m = std::min<int>(params.fit_count, dv.count());
    std::vector<double> head(m);
    for (int j = 0; j < m; ++j) head[j] = dv.candidates[j].dist;

    BlockMatch& bm = report.blocks[n];
    bm.index = n;
    bm.min_dist = dv.candidates.front().dist;
    bm.best_dy = dv.candidates.front().dy;
    bm.best_dx = dv.candidates.front().dx;
    bm.slope = fit_slope(head);
    bm.factor = bm.slope / std::max(bm.min_dist, params.epsilon);
    factor_sum += bm.factor;
  }

  double dist = 0.0;
  for (BlockMatch& bm : report.blocks) {
    bm.weight = factor_sum == 0.0 ? 1.0 / n_blocks : bm.factor / factor_sum;
    dist += bm.weight * bm.min_dist;
  }
  report.dist = dist;
  return report;
}

std::pair<int, int> suggest_search_offsets(int block_h, int block_w) {
  const int r = static_cast<int>(
      std::lround(std::max(block_h, block_w) / 4.0));
  const int c = std::max(1, static_cast<int>(std::lround(r / 1.2)));
  return {r, c};
}

std::string report_to_text(const MatchReport& report) {
  std::string out = "block,d,dy,dx,slope,weight\n";
  char buf[160];
  for (const BlockMatch& bm : report.blocks) {
    std::snprintf(buf, sizeof(buf), "%d,%.6f,%d,%d,%.6f,%.6f\n", bm.index,
                  bm.min_dist, bm.best_dy, bm.best_dx, bm.slope, bm.weight);
    out += buf;
  }
  std::snprintf(buf, sizeof(buf), "dist,%.6f\n", report.dist);
  out += buf;
  return out;
}

}  // namespace gpbm
