#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include <opencv2/core.hpp>

#include "pith/pipeline.hpp"

namespace pith::render {

/// BGR 8-bit rendering of the resized luminance; background is dimmed.
cv::Mat masked_input(const PreparedImage& image);

/// Input with every surviving orientation line drawn across the image and the
/// patch centers marked.
cv::Mat filtered_lines(const PreparedImage& image, std::span<const OrientationEstimate> estimates);

/// Smoothed votes scaled to [0, 255] under a jet color map.
cv::Mat accumulator_heatmap(const AccumulatorSpace& acc, double peak_blur_sigma);

/// Input with the global maxima in red and the prediction in blue.
cv::Mat peak_overlay(const PreparedImage& image, const PeakResult& peak);

/// Log-magnitude filtered spectra of up to `max_panels` patches, tiled in a
/// square grid in patch order.
cv::Mat spectrum_panels(std::span<const PatchAnalysis> analyses, int max_panels = 64);

/// Writes masked_input.png, filtered_lines.png, accumulator.png,
/// peak_overlay.png and spectra.png into `dir`.
void write_debug_images(const std::filesystem::path& dir, const FileDetection& detection,
                        const PithParams& params);

}  // namespace pith::render
