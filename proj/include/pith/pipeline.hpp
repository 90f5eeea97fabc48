#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "pith/accumulator.hpp"
#include "pith/imageprep.hpp"
#include "pith/orientation.hpp"
#include "pith/peak.hpp"

namespace pith {

/// Every tunable of the detector. Defaults are the command-line defaults.
struct PithParams {
  int new_shape = 1000;
  int block_width_size = 100;
  int block_height_size = 100;
  double block_overlap = 0.2;
  LoMethod lo_method = LoMethod::Pca;
  double lo_certainty_th = 0.9;
  double fft_peak_th = 0.8;
  SpectrumWindow window = SpectrumWindow::Hann;
  double peak_blur_sigma = 3.0;
  int acc_type = 0;
  PcaCertainty pca_certainty = PcaCertainty::Normalized;
  double patch_retention = kPatchRetention;
  unsigned jobs = 0;

  OrientationParams orientation() const;
  /// Throws InvalidArgument on out-of-range values.
  void validate() const;
};

struct Detection {
  Point2d pith;                                ///< resized-image pixels
  std::vector<OrientationEstimate> estimates;  ///< after certainty filtering
  AccumulatorSpace accumulator;
  PeakResult peak;
};

/// Local orientations -> accumulator -> peak on an already prepared image.
/// Throws EmptyLineSet when no estimate survives filtering.
Detection detect(const PreparedImage& image, const PithParams& params);

struct FileDetection {
  PreparedImage image;
  Detection detection;
  Point2d pith_original;  ///< original-image pixels
};

FileDetection detect_file(const std::filesystem::path& image_path,
                          const std::optional<std::filesystem::path>& mask_path,
                          const PithParams& params);

}  // namespace pith
