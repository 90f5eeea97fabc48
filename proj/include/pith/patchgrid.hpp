#pragma once

#include <vector>

#include "pith/raster.hpp"
#include "pith/types.hpp"

namespace pith {

/// Minimum foreground fraction a patch needs to be kept.
inline constexpr double kPatchRetention = 0.7;

struct Patch {
  GrayImage pixels;
  Point2d center;               ///< geometric center of the footprint, image pixels
  int origin_x = 0;             ///< top-left pixel of the footprint
  int origin_y = 0;
  double foreground_fraction = 0.0;
};

struct BlockGrid {
  int stride_x = 0;
  int stride_y = 0;
  int cols = 0;  ///< candidate blocks per row
  int rows = 0;  ///< candidate blocks per column

  int candidates() const { return cols * rows; }
};

/// Grid geometry for the given image and block layout. Partial blocks at the
/// far edges are not counted.
BlockGrid block_grid(int image_width, int image_height, double block_overlap,
                     int block_width_size, int block_height_size);

/// Splits the image into (possibly overlapping) blocks anchored at the image
/// origin and keeps those whose foreground fraction is at least `retention`.
std::vector<Patch> split_image_in_blocks(const GrayImage& img, const MaskImage& mask,
                                         double block_overlap, int block_width_size,
                                         int block_height_size,
                                         double retention = kPatchRetention);

}  // namespace pith
