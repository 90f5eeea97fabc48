#pragma once

// Independent reference implementations used only by the tests. They favour
// directness over speed and share no code with the library.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include "pith/dataset.hpp"
#include "pith/raster.hpp"

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

/// O(N^4) DFT magnitude of the (optionally Hann-windowed) patch with its
/// window-weighted mean removed. Indexed [v + H/2][u + W/2].
inline std::vector<std::vector<double>> dft_magnitude(const pith::GrayImage& patch, bool hann) {
  const int w = patch.width(), h = patch.height();
  auto win = [&](int n, int len) { return hann ? 0.5 - 0.5 * std::cos(2 * kPi * n / len) : 1.0; };
  double num = 0.0, den = 0.0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      num += win(x, w) * win(y, h) * patch.at(x, y);
      den += win(x, w) * win(y, h);
    }
  const double mean = num / den;
  std::vector<std::vector<double>> out(h, std::vector<double>(w, 0.0));
  for (int v = -(h / 2); v < h - h / 2; ++v)
    for (int u = -(w / 2); u < w - w / 2; ++u) {
      std::complex<double> acc = 0.0;
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
          const double phase = -2 * kPi * (static_cast<double>(u) * x / w + static_cast<double>(v) * y / h);
          acc += (patch.at(x, y) - mean) * win(x, w) * win(y, h) * std::polar(1.0, phase);
        }
      out[v + h / 2][u + w / 2] = std::abs(acc);
    }
  return out;
}

/// Solves each pair with explicit substitution rather than Cramer's rule.
struct LineCoef {
  double a, b, c;
};

inline pith::Raster<std::int32_t> brute_intersections(const std::vector<LineCoef>& lines, int w, int h) {
  pith::Raster<std::int32_t> acc(w, h, 0);
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const auto& p = lines[i];
      const auto& q = lines[j];
      const double det = p.a * q.b - q.a * p.b;
      if (std::fabs(det) < 1e-12) continue;
      const double x = (p.b * q.c - q.b * p.c) / det;
      const double y = (q.a * p.c - p.a * q.c) / det;
      const long px = static_cast<long>(std::floor(x + 0.5));
      const long py = static_cast<long>(std::floor(y + 0.5));
      if (px >= 0 && py >= 0 && px < w && py < h) ++acc.at(static_cast<int>(px), static_cast<int>(py));
    }
  return acc;
}

/// Marks every pixel whose center lies within `tol` of the line.
inline pith::Raster<std::int32_t> distance_marking(const std::vector<LineCoef>& lines, int w, int h,
                                                   double tol = 0.5) {
  pith::Raster<std::int32_t> acc(w, h, 0);
  for (const auto& l : lines) {
    const double n = std::hypot(l.a, l.b);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        if (std::fabs(l.a * x + l.b * y + l.c) / n <= tol) ++acc.at(x, y);
  }
  return acc;
}

inline bool mask_at(const pith::MaskImage& m, double x, double y) {
  const long px = static_cast<long>(std::floor(x + 0.5)), py = static_cast<long>(std::floor(y + 0.5));
  return m.contains(px, py) && m.at(static_cast<int>(px), static_cast<int>(py)) != 0;
}

/// Longest chord through `p` over `rays` directions, marched at `step` px.
inline double dense_diameter(const pith::MaskImage& m, pith::Point2d p, int rays = 3600,
                             double step = 0.1) {
  double best = 0.0;
  for (int k = 0; k < rays; ++k) {
    const double t = kPi * k / rays, dx = std::cos(t), dy = std::sin(t);
    double len = 0.0;
    for (int sgn : {1, -1}) {
      double s = 0.0;
      while (mask_at(m, p.x + sgn * (s + step) * dx, p.y + sgn * (s + step) * dy)) s += step;
      len += s;
    }
    best = std::max(best, len);
  }
  return best;
}

/// Nonzero winding number test.
inline bool inside_winding(pith::Point2d p, const pith::Polygon& poly) {
  int wn = 0;
  const auto& v = poly.vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % v.size()];
    const double cross = (b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y);
    if (a.y <= p.y) {
      if (b.y > p.y && cross > 0) ++wn;
    } else if (b.y <= p.y && cross < 0) {
      --wn;
    }
  }
  return wn != 0;
}

inline pith::MaskImage disk_mask(int w, int h, double cx, double cy, double r) {
  pith::MaskImage m(w, h, 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (std::hypot(x - cx, y - cy) <= r) m.at(x, y) = 1;
  return m;
}

}  // namespace oracle
