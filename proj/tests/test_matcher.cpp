#include "gpbm/matcher.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "gpbm/error.hpp"
#include "reference_matcher.hpp"
#include "test_helpers.hpp"

using namespace gpbm;
using namespace gpbm::test;

TEST_CASE("default grid on the canonical frame") {
  const BlockGrid grid = segment_blocks(150, 136, MatchParams{});
  CHECK(grid.rows == 5);
  CHECK(grid.cols == 7);
  CHECK(grid.count() == 35);
  CHECK(grid.top_margin == 2);
  CHECK(grid.left_margin == 1);
  REQUIRE(grid.blocks.size() == 35);
  // row-major order
  CHECK(grid.blocks[0].y == 2);
  CHECK(grid.blocks[0].x == 1);
  CHECK(grid.blocks[1].y == 2);
  CHECK(grid.blocks[1].x == 1 + 19);
  CHECK(grid.blocks[7].y == 2 + 29);
  CHECK(grid.blocks[7].x == 1);
  // bottom-right block stays inside
  CHECK(grid.blocks.back().y + 29 <= 150);
  CHECK(grid.blocks.back().x + 19 <= 136);
}

TEST_CASE("exact tiling has no margins") {
  const BlockGrid grid = segment_blocks(29, 19, MatchParams{});
  CHECK(grid.count() == 1);
  CHECK(grid.top_margin == 0);
  CHECK(grid.left_margin == 0);
}

TEST_CASE("block larger than image") {
  try {
    segment_blocks(10, 10, MatchParams{});
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::block_larger_than_image);
  }
}

TEST_CASE("patch distance examples") {
  MatchParams p;

  SUBCASE("identical patches") {
    std::mt19937 rng(3);
    const PhaseCodeImage img = random_code_image(rng, 40, 40, 2);
    p.block_h = 8;
    p.block_w = 8;
    CHECK(patch_distance(img, img, {4, 4}, {4, 4}, p) == 0.0);
  }

  SUBCASE("1x2 single channel") {
    PhaseCodeImage a(1, 2, 1), b(1, 2, 1);
    a.codes = {0b0000, 0b0001};
    b.codes = {0b0001, 0b0001};
    p.block_h = 1;
    p.block_w = 2;
    CHECK(patch_distance(a, b, {0, 0}, {0, 0}, p) == 1.0);
  }

  SUBCASE("1x1 two channels") {
    PhaseCodeImage a(1, 1, 2), b(1, 1, 2);
    a.codes = {0b0011, 0b0000};
    b.codes = {0b1100, 0b0001};
    p.block_h = 1;
    p.block_w = 1;
    CHECK(patch_distance(a, b, {0, 0}, {0, 0}, p) ==
          doctest::Approx(std::sqrt(17.0)).epsilon(1e-12));
  }

  SUBCASE("out of bounds") {
    PhaseCodeImage a(4, 4, 1), b(4, 4, 1);
    p.block_h = 3;
    p.block_w = 3;
    try {
      patch_distance(a, b, {0, 0}, {2, 2}, p);
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::patch_out_of_bounds);
    }
  }

  SUBCASE("channel mismatch") {
    PhaseCodeImage a(4, 4, 1), b(4, 4, 2);
    p.block_h = 2;
    p.block_w = 2;
    try {
      patch_distance(a, b, {0, 0}, {0, 0}, p);
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::channel_mismatch);
    }
  }
}

TEST_CASE("search block") {
  std::mt19937 rng(41);
  const PhaseCodeImage img = random_code_image(rng, 150, 136, 2);
  const MatchParams p;
  const BlockGrid grid = segment_blocks(150, 136, p);

  SUBCASE("self match attains zero at the origin") {
    for (int n : {0, 17, 34}) {
      const DistanceVector dv = search_block(img, img, grid.blocks[n], p);
      const Candidate* best = &dv.candidates[0];
      for (const Candidate& c : dv.candidates)
        if (c.dist < best->dist) best = &c;
      CHECK(best->dist == 0.0);
      CHECK(best->dy == 0);
      CHECK(best->dx == 0);
    }
  }

  SUBCASE("interior block enumerates the full window") {
    const DistanceVector dv = search_block(img, img, grid.blocks[17], p);
    CHECK(dv.count() == 15 * 13);  // (2R+1)(2C+1)
    // row-major enumeration
    CHECK(dv.candidates[0].dy == -7);
    CHECK(dv.candidates[0].dx == -6);
    CHECK(dv.candidates[1].dx == -5);
    CHECK(dv.candidates.back().dy == 7);
    CHECK(dv.candidates.back().dx == 6);
  }

  SUBCASE("corner blocks clamp the window") {
    // top-left block: y = 2, x = 1 -> dy in [-2, 7], dx in [-1, 6]
    const DistanceVector dv = search_block(img, img, grid.blocks[0], p);
    CHECK(dv.count() == 10 * 8);
    CHECK(dv.count() <= (2 * p.search_r + 1) * (2 * p.search_c + 1));
  }

  SUBCASE("cyclic shift is found at its offset") {
    // gallery = probe shifted right by 3
    PhaseCodeImage shifted(img.height, img.width, img.channels);
    for (int ch = 0; ch < img.channels; ++ch)
      for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
          shifted.at(ch, y, x) =
              img.at(ch, y, (x - 3 + img.width) % img.width);
    const DistanceVector dv =
        search_block(img, shifted, grid.blocks[17], p);
    double best = 1e18;
    int best_dx = 99;
    for (const Candidate& c : dv.candidates)
      if (c.dist < best) {
        best = c.dist;
        best_dx = c.dx;
      }
    CHECK(best == 0.0);
    CHECK(best_dx == 3);
  }
}

TEST_CASE("slope fit") {
  CHECK(fit_slope({2, 4, 6, 8, 10}) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit_slope({5, 5, 5, 5, 5}) == doctest::Approx(0.0));
  CHECK(fit_slope({0, 1, 1, 2, 6}) == doctest::Approx(1.3).epsilon(1e-12));
  CHECK(fit_slope({1, 4}) == doctest::Approx(3.0).epsilon(1e-12));
  try {
    fit_slope({1.0});
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::too_few_candidates);
  }
}

TEST_CASE("pair distance basics") {
  std::mt19937 rng(59);
  const PhaseCodeImage a = random_code_image(rng, 150, 136, 2);
  const PhaseCodeImage b = random_code_image(rng, 150, 136, 2);
  const MatchParams p;

  SUBCASE("self match is exactly zero with unit weight sum") {
    const MatchReport r = pair_distance(a, a, p);
    CHECK(r.dist == 0.0);
    double wsum = 0.0;
    for (const BlockMatch& bm : r.blocks) {
      CHECK(bm.min_dist == 0.0);
      wsum += bm.weight;
    }
    CHECK(std::abs(wsum - 1.0) < 1e-9);
  }

  SUBCASE("independent random pair is strictly positive") {
    const MatchReport r = pair_distance(a, b, p);
    CHECK(r.dist > 0.0);
    for (const BlockMatch& bm : r.blocks) CHECK(bm.min_dist > 0.0);
    // matches the naive oracle on the full-size default-parameter pair
    const RefReport want = ref_pair_distance(a, b, RefParams{});
    CHECK(std::abs(r.dist - want.dist) < 1e-9);
  }

  SUBCASE("dimension mismatch") {
    const PhaseCodeImage c = random_code_image(rng, 100, 136, 2);
    try {
      pair_distance(a, c, p);
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::dimension_mismatch);
    }
  }

  SUBCASE("deterministic across repeated runs") {
    const MatchReport r1 = pair_distance(a, b, p);
    const MatchReport r2 = pair_distance(a, b, p);
    CHECK(r1.dist == r2.dist);
    for (size_t i = 0; i < r1.blocks.size(); ++i) {
      CHECK(r1.blocks[i].min_dist == r2.blocks[i].min_dist);
      CHECK(r1.blocks[i].weight == r2.blocks[i].weight);
      CHECK(r1.blocks[i].best_dy == r2.blocks[i].best_dy);
      CHECK(r1.blocks[i].best_dx == r2.blocks[i].best_dx);
    }
  }
}

TEST_CASE("oracle equivalence on random small pairs") {
  std::mt19937 rng(101);
  std::uniform_int_distribution<int> dim(12, 64);
  std::uniform_int_distribution<int> bdim(1, 8);
  std::uniform_int_distribution<int> sdim(0, 3);
  std::uniform_int_distribution<int> chan(1, 2);
  for (int i = 0; i < 40; ++i) {
    const int h = dim(rng);
    const int w = dim(rng);
    const int ch = chan(rng);
    MatchParams p;
    p.block_h = std::min(bdim(rng), h);
    p.block_w = std::min(bdim(rng), w);
    p.search_r = sdim(rng);
    p.search_c = sdim(rng);
    RefParams rp;
    rp.H = p.block_h;
    rp.W = p.block_w;
    rp.R = p.search_r;
    rp.C = p.search_c;
    rp.fit = p.fit_count;
    rp.eps = p.epsilon;

    if (!matchable_geometry(h, w, p)) continue;
    const PhaseCodeImage a = random_code_image(rng, h, w, ch);
    const PhaseCodeImage b = random_code_image(rng, h, w, ch);

    const MatchReport got = pair_distance(a, b, p);
    const RefReport want = ref_pair_distance(a, b, rp);
    REQUIRE(got.blocks.size() == want.blocks.size());
    CHECK(std::abs(got.dist - want.dist) < 1e-9);
    double wsum = 0.0;
    for (size_t n = 0; n < got.blocks.size(); ++n) {
      CHECK(got.blocks[n].min_dist == want.blocks[n].d_min);
      CHECK(std::abs(got.blocks[n].slope - want.blocks[n].slope) < 1e-9);
      wsum += got.blocks[n].weight;
    }
    CHECK(std::abs(wsum - 1.0) < 1e-9);
  }
}

TEST_CASE("translations inside the window are absorbed") {
  std::mt19937 rng(67);
  const RasterImage base = make_texture(71, 90, 80);
  const PhaseCodeImage gallery = encode_face(base, GaborParams{});
  MatchParams p;
  p.block_h = 12;
  p.block_w = 10;
  p.search_r = 5;
  p.search_c = 4;

  for (auto [dy, dx] : {std::pair{3, 2}, {-5, 4}, {5, -4}, {0, 0}}) {
    // translate the code image itself: exact content shift
    PhaseCodeImage probe(gallery.height, gallery.width, gallery.channels);
    for (int ch = 0; ch < gallery.channels; ++ch)
      for (int y = 0; y < gallery.height; ++y)
        for (int x = 0; x < gallery.width; ++x) {
          const int sy = std::clamp(y - dy, 0, gallery.height - 1);
          const int sx = std::clamp(x - dx, 0, gallery.width - 1);
          probe.at(ch, y, x) = gallery.at(ch, sy, sx);
        }
    const BlockGrid grid = segment_blocks(probe.height, probe.width, p);
    const MatchReport r = pair_distance(probe, gallery, p);
    for (const BlockMatch& bm : r.blocks) {
      const Block blk = grid.blocks[bm.index];
      // blocks whose translated source patch stays inside the image
      const int sy = blk.y - dy;
      const int sx = blk.x - dx;
      if (sy < 0 || sx < 0 || sy + p.block_h > probe.height ||
          sx + p.block_w > probe.width)
        continue;
      CHECK(bm.min_dist == 0.0);
    }
  }
}

TEST_CASE("degenerate single-candidate window propagates the fit error") {
  std::mt19937 rng(83);
  const PhaseCodeImage a = random_code_image(rng, 30, 30, 1);
  MatchParams p;
  p.block_h = 10;
  p.block_w = 10;
  p.search_r = 0;
  p.search_c = 0;
  try {
    pair_distance(a, a, p);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::too_few_candidates);
  }
}

TEST_CASE("suggested search offsets") {
  CHECK(suggest_search_offsets(29, 19) == std::pair{7, 6});
  CHECK(suggest_search_offsets(4, 4) == std::pair{1, 1});
  CHECK(suggest_search_offsets(40, 27) == std::pair{10, 8});
}

TEST_CASE("report serialization") {
  std::mt19937 rng(91);
  const PhaseCodeImage a = random_code_image(rng, 150, 136, 2);
  const PhaseCodeImage b = random_code_image(rng, 150, 136, 2);
  const MatchReport r = pair_distance(a, b, MatchParams{});
  const std::string text = report_to_text(r);
  size_t lines = 0;
  for (char c : text)
    if (c == '\n') ++lines;
  CHECK(lines == 37);  // header + 35 block records + dist
  CHECK(text.rfind("dist,") != std::string::npos);
  CHECK(text.substr(0, text.find('\n')) == "block,d,dy,dx,slope,weight");
}
