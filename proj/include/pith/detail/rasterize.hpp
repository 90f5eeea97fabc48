#pragma once

#include <cmath>

namespace pith {

template <typename Visit>
void rasterize_line(const Line& line, int width, int height, Visit&& visit) {
  if (std::fabs(line.a) <= std::fabs(line.b)) {
    // Mostly horizontal: one pixel per column.
    for (int x = 0; x < width; ++x) {
      const long y = round_half_up(-(line.a * x + line.c) / line.b);
      if (y >= 0 && y < height) visit(x, static_cast<int>(y));
    }
  } else {
    for (int y = 0; y < height; ++y) {
      const long x = round_half_up(-(line.b * y + line.c) / line.a);
      if (x >= 0 && x < width) visit(static_cast<int>(x), y);
    }
  }
}

}  // namespace pith
