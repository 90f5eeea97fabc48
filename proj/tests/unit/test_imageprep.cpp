#include "doctest.h"

#include <filesystem>
#include <opencv2/imgcodecs.hpp>

#include "oracles.hpp"
#include "pith/imageprep.hpp"
#include "temp_dir.hpp"

using namespace pith;

namespace {

cv::Mat disk_image(int w, int h, double cx, double cy, double r) {
  cv::Mat img(h, w, CV_8UC3, cv::Scalar(255, 255, 255));
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (std::hypot(x - cx, y - cy) <= r) img.at<cv::Vec3b>(y, x) = {40, 90, 140};
  return img;
}

}  // namespace

TEST_CASE("grayscale uses fixed luminance weights and is monotone") {
  CHECK(to_grayscale(1, 1, 1) == doctest::Approx(1.0));
  CHECK(to_grayscale(1, 0, 0) == doctest::Approx(0.299));
  CHECK(to_grayscale(0, 1, 0) == doctest::Approx(0.587));
  CHECK(to_grayscale(0, 0, 1) == doctest::Approx(0.114));
  CHECK(to_grayscale(0.5, 0.5, 0.6) > to_grayscale(0.5, 0.5, 0.5));
}

TEST_CASE("scale map round-trips within half a pixel") {
  ScaleMap s{2877, 2736, 1000, 1000};
  for (Point2d p : {Point2d{0, 0}, Point2d{1438.2, 1367.9}, Point2d{2876, 2735}}) {
    const Point2d q = s.to_original(s.to_resized(p));
    CHECK(std::fabs(q.x - p.x) < 0.5);
    CHECK(std::fabs(q.y - p.y) < 0.5);
  }
  ScaleMap id{1000, 1000, 1000, 1000};
  CHECK(id.to_original({12.0, 34.0}) == Point2d{12.0, 34.0});
}

TEST_CASE("large images are resized to the square working shape") {
  TempDir dir;
  cv::imwrite((dir.path / "big.png").string(), disk_image(2877, 2736, 1438, 1368, 1200));
  const auto img = load_and_prepare(dir.path / "big.png", std::nullopt, 1000);
  CHECK(img.gray.width() == 1000);
  CHECK(img.gray.height() == 1000);
  CHECK(img.mask.width() == 1000);
  CHECK(img.original_mask.width() == 2877);
  CHECK(img.original_mask.height() == 2736);
  CHECK(foreground_count(img.mask) > 0);
}

TEST_CASE("same-size input keeps the pixel grid") {
  TempDir dir;
  cv::Mat rgb = disk_image(200, 200, 100, 100, 80);
  rgb.at<cv::Vec3b>(100, 100) = {10, 20, 30};  // BGR
  cv::imwrite((dir.path / "a.png").string(), rgb);
  const auto img = load_and_prepare(dir.path / "a.png", std::nullopt, 200);
  CHECK(img.gray.at(100, 100) == doctest::Approx(to_grayscale(30 / 255.0, 20 / 255.0, 10 / 255.0)));
  CHECK(img.gray.at(90, 100) ==
        doctest::Approx(to_grayscale(140 / 255.0, 90 / 255.0, 40 / 255.0)));
}

TEST_CASE("derived mask matches the disk geometry within 2% area") {
  TempDir dir;
  const double cx = 150.3, cy = 140.7, r = 100.0;
  cv::imwrite((dir.path / "d.png").string(), disk_image(300, 280, cx, cy, r));
  const auto img = load_and_prepare(dir.path / "d.png", std::nullopt, 300);
  const auto truth = oracle::disk_mask(300, 280, cx, cy, r);
  std::size_t diff = 0;
  for (int y = 0; y < 280; ++y)
    for (int x = 0; x < 300; ++x) diff += (img.original_mask.at(x, y) != 0) != (truth.at(x, y) != 0);
  CHECK(static_cast<double>(diff) / foreground_count(truth) < 0.02);
}

TEST_CASE("mask cleaning keeps the largest component and fills its holes") {
  MaskImage raw(40, 40, 0);
  for (int y = 5; y < 35; ++y)
    for (int x = 5; x < 35; ++x) raw.at(x, y) = 1;
  for (int y = 15; y < 20; ++y)
    for (int x = 15; x < 20; ++x) raw.at(x, y) = 0;  // white speckle inside
  raw.at(38, 38) = 1;                                // stray blob
  const auto clean = clean_foreground(raw);
  CHECK(clean.at(17, 17) == 1);
  CHECK(clean.at(38, 38) == 0);
  CHECK(foreground_count(clean) == 30u * 30u);
}

TEST_CASE("background is filled with the mean foreground luminance") {
  GrayImage g(4, 1, std::vector<float>{0.2f, 0.4f, 0.9f, 1.0f});
  MaskImage m(4, 1, std::vector<std::uint8_t>{1, 1, 0, 0});
  const auto out = apply_mask(g, m);
  CHECK(out.at(2, 0) == doctest::Approx(0.3));
  CHECK(out.at(3, 0) == doctest::Approx(0.3));
  CHECK(out.at(0, 0) == doctest::Approx(0.2));
}

TEST_CASE("imageprep error paths") {
  TempDir dir;
  CHECK_THROWS_WITH_AS(load_and_prepare(dir.path / "missing.png", std::nullopt, 100),
                       doctest::Contains("cannot read image"), PithError);
  try {
    load_and_prepare(dir.path / "missing.png", std::nullopt, 100);
  } catch (const PithError& e) {
    CHECK(e.code() == ErrorCode::UnreadableImage);
  }

  cv::imwrite((dir.path / "img.png").string(), disk_image(100, 100, 50, 50, 30));
  cv::imwrite((dir.path / "mask.png").string(), cv::Mat(90, 100, CV_8U, cv::Scalar(255)));
  try {
    load_and_prepare(dir.path / "img.png", dir.path / "mask.png", 100);
    FAIL("expected mismatch");
  } catch (const PithError& e) {
    CHECK(e.code() == ErrorCode::MaskMismatch);
  }

  cv::imwrite((dir.path / "white.png").string(), cv::Mat(100, 100, CV_8UC3, cv::Scalar(255, 255, 255)));
  try {
    load_and_prepare(dir.path / "white.png", std::nullopt, 100);
    FAIL("expected empty foreground");
  } catch (const PithError& e) {
    CHECK(e.code() == ErrorCode::EmptyForeground);
  }
  CHECK_THROWS_AS(load_and_prepare(dir.path / "img.png", std::nullopt, 63), PithError);
}

TEST_CASE("supplied masks are used verbatim") {
  TempDir dir;
  cv::imwrite((dir.path / "img.png").string(), disk_image(100, 100, 50, 50, 30));
  cv::Mat mask(100, 100, CV_8U, cv::Scalar(0));
  mask(cv::Rect(10, 10, 20, 20)).setTo(255);
  cv::imwrite((dir.path / "mask.png").string(), mask);
  const auto img = load_and_prepare(dir.path / "img.png", dir.path / "mask.png", 100);
  CHECK(foreground_count(img.mask) == 400u);
  CHECK(img.mask.at(15, 15) == 1);
  CHECK(img.mask.at(50, 50) == 0);
}
