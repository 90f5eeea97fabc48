#include "pith/synth.hpp"

#include <cmath>
#include <fstream>
#include "json.hpp"
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <random>

namespace pith::synth {
namespace {

constexpr float kBackground = 1.0f;
constexpr float kCrackLevel = 0.05f;
constexpr double kRayHalfWidth = 0.75;
constexpr double kRayDepth = 0.25;

bool in_wedge(double angle, const CrackWedge& w) {
  double d = std::remainder(angle - w.direction, 2.0 * kPi);
  return std::fabs(d) <= 0.5 * w.width;
}

}  // namespace

SpiderwebSpec random_spiderweb_spec(std::uint64_t seed, int size) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> offset(-0.1 * size, 0.1 * size);
  std::uniform_real_distribution<double> spacing(8.0, 16.0);
  std::uniform_real_distribution<double> radius(0.35 * size, 0.45 * size);
  SpiderwebSpec s;
  s.size = size;
  s.center = {0.5 * size + offset(rng), 0.5 * size + offset(rng)};
  s.ring_spacing = spacing(rng);
  s.disk_radius = radius(rng);
  s.noise_sigma = 0.05;
  s.seed = rng();
  s.id = "spiderweb_" + std::to_string(seed);
  return s;
}

SyntheticCase make_spiderweb(const SpiderwebSpec& spec) {
  if (spec.size < 16) throw PithError(ErrorCode::InvalidArgument, "spiderweb size too small");
  if (!(spec.center.x >= 0 && spec.center.y >= 0 && spec.center.x <= spec.size - 1 &&
        spec.center.y <= spec.size - 1))
    throw PithError(ErrorCode::InvalidArgument, "spiderweb center must lie inside the image");
  if (!(spec.ring_spacing >= 3.0))
    throw PithError(ErrorCode::InvalidArgument, "ring_spacing must be at least 3 pixels");
  if (!(spec.disk_radius > spec.ring_spacing))
    throw PithError(ErrorCode::InvalidArgument, "disk radius must exceed the ring spacing");
  if (!(spec.contrast >= 0.0 && spec.contrast <= 1.0) || !(spec.noise_sigma >= 0.0))
    throw PithError(ErrorCode::InvalidArgument, "contrast must lie in [0, 1], noise >= 0");

  const int n = spec.size;
  SyntheticCase out{GrayImage(n, n, kBackground), MaskImage(n, n, 0), {}};
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, spec.noise_sigma);
  const double ray_step = spec.ray_count > 0 ? 2.0 * kPi / spec.ray_count : 0.0;

  for (int y = 0; y < n; ++y) {
    auto img = out.image.row(y);
    auto msk = out.mask.row(y);
    for (int x = 0; x < n; ++x) {
      const double dx = x - spec.center.x, dy = y - spec.center.y;
      const double r = std::hypot(dx, dy);
      double v = kBackground;
      if (r <= spec.disk_radius) {
        msk[static_cast<std::size_t>(x)] = 1;
        const double theta = std::atan2(dy, dx);
        v = 0.5 + 0.5 * spec.contrast * std::cos(2.0 * kPi * r / spec.ring_spacing);
        if (spec.ray_count > 0 && r > 0.0) {
          const double off = std::remainder(theta, ray_step);
          if (std::fabs(off) * r <= kRayHalfWidth) v -= kRayDepth * spec.contrast;
        }
        if (spec.crack && r >= spec.crack->inner_radius_fraction * spec.disk_radius &&
            in_wedge(theta, *spec.crack))
          v = kCrackLevel;
      }
      if (spec.noise_sigma > 0.0) v += noise(rng);
      img[static_cast<std::size_t>(x)] = static_cast<float>(std::clamp(v, 0.0, 1.0));
    }
  }

  DatasetEntry& e = out.entry;
  e.id = spec.id;
  e.gt_pith = spec.center;
  for (int k = 0;; ++k) {
    const double radius = (k + 0.5) * spec.ring_spacing;
    if (radius >= spec.disk_radius) break;
    Polygon ring;
    ring.vertices.reserve(static_cast<std::size_t>(spec.ring_vertices));
    for (int i = 0; i < spec.ring_vertices; ++i) {
      const double t = 2.0 * kPi * i / spec.ring_vertices;
      ring.vertices.push_back(
          {spec.center.x + radius * std::cos(t), spec.center.y + radius * std::sin(t)});
    }
    e.rings.push_back(std::move(ring));
  }
  return out;
}

SinusoidPatch make_sinusoid_patch(int size, double angle, double cycles, bool periodic) {
  if (size < 8) throw PithError(ErrorCode::InvalidArgument, "sinusoid patch must be at least 8x8");
  double kx = cycles * std::cos(angle);
  double ky = cycles * std::sin(angle);
  if (periodic) {
    kx = static_cast<double>(round_half_up(kx));
    ky = static_cast<double>(round_half_up(ky));
  }
  if (kx == 0.0 && ky == 0.0)
    throw PithError(ErrorCode::InvalidArgument, "sinusoid wave vector is zero");

  SinusoidPatch out;
  out.angle = normalize_half_turn(std::atan2(ky, kx));
  out.cycles = std::hypot(kx, ky);
  Patch& p = out.patch;
  p.pixels = GrayImage(size, size);
  for (int y = 0; y < size; ++y) {
    auto row = p.pixels.row(y);
    for (int x = 0; x < size; ++x)
      row[static_cast<std::size_t>(x)] = static_cast<float>(
          0.5 + 0.4 * std::cos(2.0 * kPi * (kx * x + ky * y) / size));
  }
  p.center = {(size - 1) / 2.0, (size - 1) / 2.0};
  p.foreground_fraction = 1.0;
  return out;
}

DatasetEntry write_case(const SyntheticCase& c, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const int w = c.image.width(), h = c.image.height();
  cv::Mat rgb(h, w, CV_8UC3), mask(h, w, CV_8U);
  for (int y = 0; y < h; ++y) {
    auto g = c.image.row(y);
    auto m = c.mask.row(y);
    auto* px = rgb.ptr<cv::Vec3b>(y);
    auto* mp = mask.ptr<std::uint8_t>(y);
    for (int x = 0; x < w; ++x) {
      const auto v = static_cast<std::uint8_t>(std::lround(std::clamp(g[x], 0.0f, 1.0f) * 255.0f));
      px[x] = {v, v, v};
      mp[x] = m[x] ? 255 : 0;
    }
  }

  DatasetEntry e = c.entry;
  e.image_path = dir / "image.png";
  e.mask_path = dir / "mask.png";
  e.annotation_path = dir / "rings.json";
  if (!cv::imwrite(e.image_path.string(), rgb) || !cv::imwrite(e.mask_path->string(), mask))
    throw PithError(ErrorCode::InvalidArgument, "cannot write synthetic case to " + dir.string());

  nlohmann::json rings = nlohmann::json::array();
  for (std::size_t i = 0; i < e.rings.size(); ++i) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& v : e.rings[i].vertices) pts.push_back({v.x, v.y});
    rings.push_back({{"name", "ring_" + std::to_string(i)}, {"points", pts}});
  }
  std::ofstream(*e.annotation_path) << nlohmann::json{{"rings", rings}}.dump(1) << '\n';
  return e;
}

}  // namespace pith::synth
