#include "pith/patchgrid.hpp"

#include <string>

namespace pith {

BlockGrid block_grid(int image_width, int image_height, double block_overlap,
                     int block_width_size, int block_height_size) {
  if (!(block_overlap >= 0.0 && block_overlap < 1.0))
    throw PithError(ErrorCode::InvalidArgument, "block_overlap must lie in [0, 1)");
  if (block_width_size <= 0 || block_height_size <= 0)
    throw PithError(ErrorCode::InvalidArgument, "block sizes must be positive");
  if (block_width_size > image_width || block_height_size > image_height)
    throw PithError(ErrorCode::InvalidArgument,
                    "block size " + std::to_string(block_width_size) + "x" +
                        std::to_string(block_height_size) + " exceeds image " +
                        std::to_string(image_width) + "x" + std::to_string(image_height));

  BlockGrid g;
  g.stride_x = static_cast<int>(round_half_up(block_width_size * (1.0 - block_overlap)));
  g.stride_y = static_cast<int>(round_half_up(block_height_size * (1.0 - block_overlap)));
  if (g.stride_x <= 0 || g.stride_y <= 0)
    throw PithError(ErrorCode::InvalidArgument, "block stride rounds to zero");
  g.cols = (image_width - block_width_size) / g.stride_x + 1;
  g.rows = (image_height - block_height_size) / g.stride_y + 1;
  return g;
}

std::vector<Patch> split_image_in_blocks(const GrayImage& img, const MaskImage& mask,
                                         double block_overlap, int block_width_size,
                                         int block_height_size, double retention) {
  if (img.width() != mask.width() || img.height() != mask.height())
    throw PithError(ErrorCode::MaskMismatch, "mask dimensions differ from image dimensions");
  const BlockGrid grid =
      block_grid(img.width(), img.height(), block_overlap, block_width_size, block_height_size);
  const double area = static_cast<double>(block_width_size) * block_height_size;

  std::vector<Patch> patches;
  for (int r = 0; r < grid.rows; ++r) {
    const int y0 = r * grid.stride_y;
    for (int c = 0; c < grid.cols; ++c) {
      const int x0 = c * grid.stride_x;

      std::size_t fg = 0;
      for (int y = 0; y < block_height_size; ++y) {
        auto m = mask.row(y0 + y).subspan(static_cast<std::size_t>(x0),
                                          static_cast<std::size_t>(block_width_size));
        for (auto v : m) fg += v != 0;
      }
      const double fraction = static_cast<double>(fg) / area;
      if (fraction < retention) continue;

      Patch p;
      p.pixels = GrayImage(block_width_size, block_height_size);
      for (int y = 0; y < block_height_size; ++y) {
        auto src = img.row(y0 + y).subspan(static_cast<std::size_t>(x0),
                                           static_cast<std::size_t>(block_width_size));
        std::copy(src.begin(), src.end(), p.pixels.row(y).begin());
      }
      p.origin_x = x0;
      p.origin_y = y0;
      p.center = {x0 + (block_width_size - 1) / 2.0, y0 + (block_height_size - 1) / 2.0};
      p.foreground_fraction = fraction;
      patches.push_back(std::move(p));
    }
  }
  return patches;
}

}  // namespace pith
