#pragma once

#include <filesystem>
#include <optional>

#include "pith/raster.hpp"
#include "pith/types.hpp"

namespace pith {

/// Luminance weights applied to (R, G, B) on [0, 1].
inline constexpr double kLumaR = 0.299;
inline constexpr double kLumaG = 0.587;
inline constexpr double kLumaB = 0.114;

/// Pixels whose channels are all at or above this level count as background
/// when no mask file is supplied.
inline constexpr double kWhiteBackgroundLevel = 0.92;

inline float to_grayscale(double r, double g, double b) {
  return static_cast<float>(kLumaR * r + kLumaG * g + kLumaB * b);
}

/// Pixel-center aligned mapping between original and resized coordinates.
/// It is the same convention the bilinear resampler uses, so a pixel center in
/// one grid maps onto the sample position it was interpolated from.
struct ScaleMap {
  int original_width = 0;
  int original_height = 0;
  int resized_width = 0;
  int resized_height = 0;

  double scale_x() const { return static_cast<double>(original_width) / resized_width; }
  double scale_y() const { return static_cast<double>(original_height) / resized_height; }

  Point2d to_original(Point2d p) const {
    return {(p.x + 0.5) * scale_x() - 0.5, (p.y + 0.5) * scale_y() - 0.5};
  }
  Point2d to_resized(Point2d p) const {
    return {(p.x + 0.5) / scale_x() - 0.5, (p.y + 0.5) / scale_y() - 0.5};
  }
};

struct PreparedImage {
  GrayImage gray;             ///< new_shape x new_shape, background filled
  MaskImage mask;             ///< new_shape x new_shape
  MaskImage original_mask;    ///< mask at the input resolution
  ScaleMap scale;
};

/// Keeps the largest 8-connected foreground component and fills the
/// background holes it encloses.
MaskImage clean_foreground(const MaskImage& raw);

/// Background = pixels at or above kWhiteBackgroundLevel, then cleaned.
MaskImage derive_mask(const GrayImage& gray);

/// Sets every background pixel to the mean foreground luminance.
GrayImage apply_mask(const GrayImage& gray, const MaskImage& mask);

/// Bilinear resize for luminance.
GrayImage resize_gray(const GrayImage& gray, int width, int height);
/// Nearest-neighbour resize for masks.
MaskImage resize_mask(const MaskImage& mask, int width, int height);

/// In-memory variant of load_and_prepare for an already gray image. When the
/// mask is absent it is derived from near-white background.
PreparedImage prepare(const GrayImage& gray, const std::optional<MaskImage>& mask, int new_shape);

/// Reads an RGB raster (and optional single-channel mask), converts to
/// grayscale, resizes both to new_shape x new_shape and applies the mask.
PreparedImage load_and_prepare(const std::filesystem::path& image_path,
                               const std::optional<std::filesystem::path>& mask_path,
                               int new_shape);

/// Reads a mask raster; nonzero = foreground.
MaskImage load_mask(const std::filesystem::path& mask_path);

}  // namespace pith
