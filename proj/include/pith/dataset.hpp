#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pith/types.hpp"

namespace pith {

/// Closed polygon; the last vertex connects back to the first.
struct Polygon {
  std::vector<Point2d> vertices;
};

/// One annotated cross-section. Coordinates are original-image pixels and
/// rings are ordered innermost first (ring 0 bounds the medulla).
struct DatasetEntry {
  std::string id;
  std::filesystem::path image_path;
  std::optional<std::filesystem::path> mask_path;
  Point2d gt_pith;
  std::optional<std::filesystem::path> annotation_path;
  std::vector<Polygon> rings;
};

}  // namespace pith
