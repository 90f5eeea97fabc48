#include "pith/peak.hpp"

#include <cmath>

namespace pith {
namespace {

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double w = std::exp(-0.5 * (i * i) / (sigma * sigma));
    k[static_cast<std::size_t>(i + radius)] = w;
    sum += w;
  }
  for (double& w : k) w /= sum;
  return k;
}

}  // namespace

Raster<double> gaussian_blur(const AccumulatorSpace& acc, double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw PithError(ErrorCode::InvalidArgument, "peak_blur_sigma must be a finite value >= 0");

  const int w = acc.width(), h = acc.height();
  Raster<double> src(w, h);
  {
    auto s = acc.pixels();
    auto d = src.pixels();
    for (std::size_t i = 0; i < s.size(); ++i) d[i] = static_cast<double>(s[i]);
  }
  if (sigma == 0.0) return src;

  const std::vector<double> k = gaussian_kernel(sigma);
  const int radius = static_cast<int>(k.size() / 2);

  Raster<double> tmp(w, h, 0.0);
  for (int y = 0; y < h; ++y) {
    auto in = src.row(y);
    auto out = tmp.row(y);
    for (int x = 0; x < w; ++x) {
      const int lo = std::max(-radius, -x);
      const int hi = std::min(radius, w - 1 - x);
      double s = 0.0;
      for (int i = lo; i <= hi; ++i) s += k[static_cast<std::size_t>(i + radius)] * in[static_cast<std::size_t>(x + i)];
      out[static_cast<std::size_t>(x)] = s;
    }
  }

  Raster<double> dst(w, h, 0.0);
  for (int y = 0; y < h; ++y) {
    const int lo = std::max(-radius, -y);
    const int hi = std::min(radius, h - 1 - y);
    auto out = dst.row(y);
    for (int i = lo; i <= hi; ++i) {
      const double wk = k[static_cast<std::size_t>(i + radius)];
      auto in = tmp.row(y + i);
      for (int x = 0; x < w; ++x) out[static_cast<std::size_t>(x)] += wk * in[static_cast<std::size_t>(x)];
    }
  }
  return dst;
}

PeakResult find_peak(const AccumulatorSpace& acc, double peak_blur_sigma) {
  bool any = false;
  for (auto v : acc.pixels())
    if (v > 0) {
      any = true;
      break;
    }
  if (!any) throw PithError(ErrorCode::NoEvidence, "accumulator space holds no votes");

  const Raster<double> smooth = gaussian_blur(acc, peak_blur_sigma);
  PeakResult result;
  result.value = -1.0;
  for (int y = 0; y < smooth.height(); ++y) {
    auto row = smooth.row(y);
    for (int x = 0; x < smooth.width(); ++x) {
      const double v = row[static_cast<std::size_t>(x)];
      if (v > result.value) {
        result.value = v;
        result.maxima.clear();
      }
      if (v == result.value) result.maxima.push_back({static_cast<double>(x), static_cast<double>(y)});
    }
  }

  double sx = 0.0, sy = 0.0;
  for (const auto& p : result.maxima) {
    sx += p.x;
    sy += p.y;
  }
  const auto n = static_cast<double>(result.maxima.size());
  result.location = {sx / n, sy / n};
  return result;
}

}  // namespace pith
