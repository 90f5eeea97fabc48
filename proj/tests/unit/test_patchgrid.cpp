#include "doctest.h"

#include "pith/patchgrid.hpp"

using namespace pith;

TEST_CASE("candidate counts follow the stride arithmetic") {
  auto g0 = block_grid(1000, 1000, 0.0, 100, 100);
  CHECK(g0.stride_x == 100);
  CHECK(g0.candidates() == 100);
  auto g2 = block_grid(1000, 1000, 0.2, 100, 100);
  CHECK(g2.stride_x == 80);
  CHECK(g2.cols == 12);
  CHECK(g2.candidates() == 144);
  // 50 * 0.5 = 25; 20 * 0.6 = 12; 30 * 0.5 = 15 -> round half up everywhere.
  CHECK(block_grid(1000, 1000, 0.5, 50, 50).stride_x == 25);
  CHECK(block_grid(1000, 1000, 0.4, 20, 20).stride_x == 12);
  auto rect = block_grid(300, 200, 0.0, 50, 40);
  CHECK(rect.cols == 6);
  CHECK(rect.rows == 5);
}

TEST_CASE("block grid rejects invalid layouts") {
  CHECK_THROWS_AS(block_grid(100, 100, 1.0, 10, 10), PithError);
  CHECK_THROWS_AS(block_grid(100, 100, -0.1, 10, 10), PithError);
  CHECK_THROWS_AS(block_grid(100, 100, 0.0, 120, 10), PithError);
  CHECK_THROWS_AS(block_grid(100, 100, 0.99, 10, 10), PithError);  // stride rounds to 0
}

TEST_CASE("patches tile without gaps at zero overlap") {
  GrayImage img(105, 100);
  for (int y = 0; y < 100; ++y)
    for (int x = 0; x < 105; ++x) img.at(x, y) = static_cast<float>(x + 1000 * y);
  MaskImage mask(105, 100, 1);
  const auto patches = split_image_in_blocks(img, mask, 0.0, 20, 25);
  REQUIRE(patches.size() == 20u);
  std::vector<int> cover(105 * 100, 0);
  for (const auto& p : patches) {
    CHECK(p.pixels.width() == 20);
    CHECK(p.pixels.height() == 25);
    CHECK(p.center.x == doctest::Approx(p.origin_x + 9.5));
    CHECK(p.center.y == doctest::Approx(p.origin_y + 12.0));
    CHECK(p.pixels.at(3, 4) == img.at(p.origin_x + 3, p.origin_y + 4));
    for (int y = 0; y < 25; ++y)
      for (int x = 0; x < 20; ++x) ++cover[(p.origin_y + y) * 105 + p.origin_x + x];
  }
  for (int y = 0; y < 100; ++y)
    for (int x = 0; x < 105; ++x) CHECK(cover[y * 105 + x] == (x < 100 ? 1 : 0));
}

TEST_CASE("retention threshold drops mostly-background patches") {
  GrayImage img(40, 20, 0.5f);
  MaskImage mask(40, 20, 0);
  for (int y = 0; y < 20; ++y)
    for (int x = 0; x < 34; ++x) mask.at(x, y) = 1;
  // Second block covers x in [20, 40): 14 of 20 columns = 0.7 exactly.
  auto kept = split_image_in_blocks(img, mask, 0.0, 20, 20);
  REQUIRE(kept.size() == 2u);
  CHECK(kept[1].foreground_fraction == doctest::Approx(0.7));
  mask.at(33, 0) = 0;
  kept = split_image_in_blocks(img, mask, 0.0, 20, 20);
  CHECK(kept.size() == 1u);
  for (const auto& p : kept) CHECK(p.foreground_fraction >= kPatchRetention);

  MaskImage none(40, 20, 0);
  CHECK(split_image_in_blocks(img, none, 0.0, 20, 20).empty());
  CHECK_THROWS_AS(split_image_in_blocks(img, MaskImage(10, 10, 1), 0.0, 5, 5), PithError);
}
