#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pith/orientation.hpp"
#include "pith/raster.hpp"

namespace pith {

/// a*x + b*y + c = 0 with a^2 + b^2 = 1, in image pixel coordinates.
struct Line {
  double a = 0.0;
  double b = 1.0;
  double c = 0.0;

  /// Signed distance of (x, y) from the line.
  double distance(double x, double y) const { return a * x + b * y + c; }
};

/// Normalizes arbitrary coefficients; throws when (a, b) = (0, 0).
Line make_line(double a, double b, double c);

/// Line through the estimate's center along its angle.
Line to_line(const OrientationEstimate& est);

std::vector<Line> to_lines(std::span<const OrientationEstimate> estimates);

/// Integer vote matrix with the dimensions of the resized image.
using AccumulatorSpace = Raster<std::int32_t>;

enum class AccumulationType : int {
  PassThrough = 0,   ///< every pixel a line crosses gets one vote
  Intersection = 1,  ///< every pixel where two lines meet gets one vote
};

/// Two lines closer to parallel than this (|det| of the 2x2 system) do not
/// intersect.
inline constexpr double kParallelEpsilon = 1e-12;

/// One vote per unordered pair of non-parallel lines, at the pixel their
/// intersection rounds to, when that pixel is in bounds.
AccumulatorSpace lines_intersection_accumulation(std::span<const Line> lines, int width,
                                                 int height, unsigned jobs = 1);

/// Rasterizes each line across the image with an 8-connected rule: along the
/// major axis every integer step gets the pixel nearest the exact line.
AccumulatorSpace lines_pass_through_accumulation(std::span<const Line> lines, int width,
                                                 int height, unsigned jobs = 1);

/// Dispatches on acc_type: > 0 intersection, 0 pass-through. Other values are
/// rejected.
AccumulatorSpace accumulation_space(std::span<const Line> lines, int acc_type, int width,
                                    int height, unsigned jobs = 1);

/// Calls visit(x, y) for every pixel the pass-through rule covers for `line`.
template <typename Visit>
void rasterize_line(const Line& line, int width, int height, Visit&& visit);

}  // namespace pith

#include "pith/detail/rasterize.hpp"
