#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pith {

/// Pixel-space coordinate. x grows to the right, y grows downward; integer
/// values sit on pixel centers.
struct Point2d {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2d&, const Point2d&) = default;
};

enum class ErrorCode {
  InvalidArgument,
  UnreadableImage,
  MaskMismatch,
  EmptyForeground,
  EmptyLineSet,
  NoEvidence,
  OutsideMask,
  MalformedPolygon,
  NoRecords,
  BadManifest,
  BadAnnotation,
};

std::string_view to_string(ErrorCode code);

class PithError : public std::runtime_error {
 public:
  PithError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline constexpr double kPi = std::numbers::pi;

/// Maps any angle onto [0, pi).
inline double normalize_half_turn(double angle) {
  double a = std::fmod(angle, kPi);
  if (a < 0.0) a += kPi;
  if (a >= kPi) a -= kPi;
  return a;
}

/// Smallest difference between two undirected angles, in [0, pi/2].
inline double undirected_angle_diff(double a, double b) {
  double d = std::fabs(normalize_half_turn(a) - normalize_half_turn(b));
  return std::min(d, kPi - d);
}

/// Round half up, used wherever a real coordinate snaps to a pixel.
inline long round_half_up(double v) { return static_cast<long>(std::floor(v + 0.5)); }

}  // namespace pith
