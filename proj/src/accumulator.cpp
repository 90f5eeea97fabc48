#include "pith/accumulator.hpp"

#include <algorithm>
#include <cmath>

#include "pith/parallel.hpp"

namespace pith {
namespace {

void check_dims(int width, int height) {
  if (width <= 0 || height <= 0)
    throw PithError(ErrorCode::InvalidArgument, "accumulator dimensions must be positive");
}

// Splits `count` work items into contiguous shards, accumulates each shard
// into its own matrix, and sums the shards. Integer addition keeps the result
// identical to a sequential pass.
template <typename Fill>
AccumulatorSpace sharded(std::size_t count, int width, int height, unsigned jobs, Fill fill) {
  if (jobs == 0) jobs = default_jobs();
  const std::size_t shards = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(count, 1));
  std::vector<AccumulatorSpace> partial(shards);
  parallel_for(shards, jobs, [&](std::size_t s) {
    partial[s] = AccumulatorSpace(width, height, 0);
    const std::size_t begin = count * s / shards;
    const std::size_t end = count * (s + 1) / shards;
    fill(begin, end, partial[s]);
  });

  AccumulatorSpace total = std::move(partial.front());
  for (std::size_t s = 1; s < shards; ++s) {
    auto dst = total.pixels();
    auto src = partial[s].pixels();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  }
  return total;
}

}  // namespace

Line make_line(double a, double b, double c) {
  const double n = std::hypot(a, b);
  if (!(n > 0.0) || !std::isfinite(n))
    throw PithError(ErrorCode::InvalidArgument, "line normal must be nonzero and finite");
  return {a / n, b / n, c / n};
}

Line to_line(const OrientationEstimate& est) {
  // Direction (cos t, sin t); the normal is its left perpendicular.
  const double a = -std::sin(est.angle);
  const double b = std::cos(est.angle);
  return {a, b, -(a * est.center.x + b * est.center.y)};
}

std::vector<Line> to_lines(std::span<const OrientationEstimate> estimates) {
  std::vector<Line> lines;
  lines.reserve(estimates.size());
  for (const auto& e : estimates) lines.push_back(to_line(e));
  return lines;
}

AccumulatorSpace lines_intersection_accumulation(std::span<const Line> lines, int width,
                                                 int height, unsigned jobs) {
  check_dims(width, height);
  return sharded(lines.size(), width, height, jobs,
                 [&](std::size_t begin, std::size_t end, AccumulatorSpace& acc) {
                   for (std::size_t i = begin; i < end; ++i) {
                     const Line& p = lines[i];
                     for (std::size_t j = i + 1; j < lines.size(); ++j) {
                       const Line& q = lines[j];
                       const double det = p.a * q.b - q.a * p.b;
                       if (std::fabs(det) < kParallelEpsilon) continue;
                       const double x = (p.b * q.c - q.b * p.c) / det;
                       const double y = (q.a * p.c - p.a * q.c) / det;
                       const long px = round_half_up(x);
                       const long py = round_half_up(y);
                       if (acc.contains(px, py)) ++acc.at(static_cast<int>(px), static_cast<int>(py));
                     }
                   }
                 });
}

AccumulatorSpace lines_pass_through_accumulation(std::span<const Line> lines, int width,
                                                 int height, unsigned jobs) {
  check_dims(width, height);
  return sharded(lines.size(), width, height, jobs,
                 [&](std::size_t begin, std::size_t end, AccumulatorSpace& acc) {
                   for (std::size_t i = begin; i < end; ++i)
                     rasterize_line(lines[i], width, height,
                                    [&](int x, int y) { ++acc.at(x, y); });
                 });
}

AccumulatorSpace accumulation_space(std::span<const Line> lines, int acc_type, int width,
                                    int height, unsigned jobs) {
  switch (acc_type) {
    case static_cast<int>(AccumulationType::Intersection):
      return lines_intersection_accumulation(lines, width, height, jobs);
    case static_cast<int>(AccumulationType::PassThrough):
      return lines_pass_through_accumulation(lines, width, height, jobs);
    default:
      throw PithError(ErrorCode::InvalidArgument,
                      "acc_type must be 0 (pass-through) or 1 (intersection)");
  }
}

}  // namespace pith
