#include "doctest.h"

#include "pith/pipeline.hpp"
#include "pith/render.hpp"
#include "pith/synth.hpp"
#include "temp_dir.hpp"

using namespace pith;

TEST_CASE("default parameters") {
  PithParams p;
  CHECK(p.new_shape == 1000);
  CHECK(p.block_width_size == 100);
  CHECK(p.block_height_size == 100);
  CHECK(p.block_overlap == 0.2);
  CHECK(p.lo_method == LoMethod::Pca);
  CHECK(p.lo_certainty_th == 0.9);
  CHECK(p.fft_peak_th == 0.8);
  CHECK(p.peak_blur_sigma == 3.0);
  CHECK(p.acc_type == 0);
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("parameter validation") {
  auto bad = [](auto mutate) {
    PithParams p;
    mutate(p);
    CHECK_THROWS_AS(p.validate(), PithError);
  };
  bad([](PithParams& p) { p.new_shape = 32; });
  bad([](PithParams& p) { p.block_overlap = 1.0; });
  bad([](PithParams& p) { p.acc_type = 2; });
  bad([](PithParams& p) { p.fft_peak_th = 1.1; });
  bad([](PithParams& p) { p.peak_blur_sigma = -1; });
  bad([](PithParams& p) { p.block_width_size = 2000; });
}

TEST_CASE("default pipeline finds a centered spider-web") {
  synth::SpiderwebSpec s;
  s.ring_spacing = 12.0;
  s.noise_sigma = 0.05;
  const auto c = synth::make_spiderweb(s);
  const auto img = prepare(c.image, std::nullopt, 1000);
  const auto d = detect(img, PithParams{});
  CHECK(std::hypot(d.pith.x - 500, d.pith.y - 500) < 10.0);
  CHECK(d.accumulator.width() == 1000);
  CHECK_FALSE(d.estimates.empty());
}

TEST_CASE("intersection accumulation also localizes the center") {
  const auto spec = synth::random_spiderweb_spec(3);
  const auto c = synth::make_spiderweb(spec);
  PithParams p;
  p.acc_type = 1;
  const auto d = detect(prepare(c.image, c.mask, 1000), p);
  CHECK(std::hypot(d.pith.x - spec.center.x, d.pith.y - spec.center.y) < 10.0);
}

TEST_CASE("a 20 degree crack does not derail detection") {
  auto spec = synth::random_spiderweb_spec(9);
  spec.crack = synth::CrackWedge{0.8, 20.0 * kPi / 180.0, 0.1};
  const auto c = synth::make_spiderweb(spec);
  const auto d = detect(prepare(c.image, std::nullopt, 1000), PithParams{});
  CHECK(std::hypot(d.pith.x - spec.center.x, d.pith.y - spec.center.y) <= 15.0);
}

TEST_CASE("non-square inputs map back to original pixels") {
  TempDir dir;
  synth::SpiderwebSpec s;
  s.size = 900;
  s.center = {430.0, 470.0};
  s.disk_radius = 400;
  s.ring_spacing = 9;
  auto c = synth::make_spiderweb(s);
  // Crop to 900 x 860 so the resize is anisotropic.
  GrayImage cropped(900, 860);
  MaskImage cmask(900, 860);
  for (int y = 0; y < 860; ++y)
    for (int x = 0; x < 900; ++x) {
      cropped.at(x, y) = c.image.at(x, y + 20);
      cmask.at(x, y) = c.mask.at(x, y + 20);
    }
  const auto img = prepare(cropped, cmask, 1000);
  const auto d = detect(img, PithParams{});
  const Point2d orig = img.scale.to_original(d.pith);
  CHECK(std::hypot(orig.x - 430.0, orig.y - 450.0) < 10.0);
}

TEST_CASE("empty line set is reported") {
  GrayImage flat(200, 200, 0.4f);
  MaskImage all(200, 200, 1);
  try {
    detect(prepare(flat, all, 200), PithParams{.new_shape = 200});
    FAIL("expected EmptyLineSet");
  } catch (const PithError& e) {
    CHECK(e.code() == ErrorCode::EmptyLineSet);
  }
}

TEST_CASE("detection is deterministic across worker counts") {
  const auto spec = synth::random_spiderweb_spec(21);
  const auto img = prepare(synth::make_spiderweb(spec).image, std::nullopt, 1000);
  PithParams p;
  p.jobs = 1;
  const auto a = detect(img, p);
  p.jobs = 3;
  const auto b = detect(img, p);
  CHECK(a.pith == b.pith);
  CHECK(a.accumulator == b.accumulator);
}

TEST_CASE("debug images are written") {
  TempDir dir;
  const auto spec = synth::random_spiderweb_spec(2, 300);
  const auto e = synth::write_case(synth::make_spiderweb(spec), dir.path / "case");
  PithParams p;
  p.new_shape = 300;
  p.block_width_size = p.block_height_size = 40;
  const auto fd = detect_file(e.image_path, e.mask_path, p);
  render::write_debug_images(dir.path / "dbg", fd, p);
  for (const char* f : {"masked_input.png", "filtered_lines.png", "accumulator.png",
                        "peak_overlay.png", "spectra.png"})
    CHECK(std::filesystem::file_size(dir.path / "dbg" / f) > 0);
  const auto heat = render::accumulator_heatmap(fd.detection.accumulator, 3.0);
  CHECK(heat.cols == 300);
  CHECK(heat.channels() == 3);
}
