#include "doctest.h"

#include "pith/parallel.hpp"
#include "pith/raster.hpp"
#include "pith/types.hpp"

using namespace pith;

TEST_CASE("round_half_up rounds ties toward +infinity") {
  CHECK(round_half_up(2.5) == 3);
  CHECK(round_half_up(-2.5) == -2);
  CHECK(round_half_up(49.8) == 50);
  CHECK(round_half_up(50.2) == 50);
}

TEST_CASE("angles normalize onto the half turn") {
  CHECK(normalize_half_turn(0.0) == doctest::Approx(0.0));
  CHECK(normalize_half_turn(kPi) == doctest::Approx(0.0));
  CHECK(normalize_half_turn(-kPi / 4) == doctest::Approx(3 * kPi / 4));
  CHECK(normalize_half_turn(5 * kPi / 2) == doctest::Approx(kPi / 2));
  CHECK(undirected_angle_diff(0.01, kPi - 0.01) == doctest::Approx(0.02));
  CHECK(undirected_angle_diff(kPi / 2, 0.0) == doctest::Approx(kPi / 2));
}

TEST_CASE("raster validates its shape") {
  CHECK_THROWS_AS(GrayImage(0, 4), PithError);
  CHECK_THROWS_AS(GrayImage(2, 2, std::vector<float>(3)), PithError);
  GrayImage g(3, 2, 0.25f);
  g.at(2, 1) = 1.0f;
  CHECK(g.row(1)[2] == 1.0f);
  CHECK(g.contains(2, 1));
  CHECK_FALSE(g.contains(3, 1));
  CHECK_FALSE(g.contains(-1, 0));
}

TEST_CASE("error codes have stable names") {
  CHECK(to_string(ErrorCode::EmptyLineSet) == "empty_line_set");
  CHECK(to_string(ErrorCode::UnreadableImage) == "unreadable_image");
  PithError e(ErrorCode::NoRecords, "x");
  CHECK(e.code() == ErrorCode::NoRecords);
}

TEST_CASE("parallel_for visits each index once and rethrows") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) {
                    if (i == 7) throw PithError(ErrorCode::InvalidArgument, "boom");
                  }),
                  PithError);
}
