#include "pith/pipeline.hpp"

namespace pith {

OrientationParams PithParams::orientation() const {
  OrientationParams o;
  o.block_overlap = block_overlap;
  o.block_width_size = block_width_size;
  o.block_height_size = block_height_size;
  o.fft_peak_th = fft_peak_th;
  o.window = window;
  o.lo_method = lo_method;
  o.lo_certainty_th = lo_certainty_th;
  o.pca_certainty = pca_certainty;
  o.patch_retention = patch_retention;
  o.jobs = jobs;
  return o;
}

void PithParams::validate() const {
  auto fail = [](const char* msg) { throw PithError(ErrorCode::InvalidArgument, msg); };
  if (new_shape < 64) fail("new_shape must be at least 64");
  if (block_width_size < 8 || block_height_size < 8) fail("block sizes must be at least 8");
  if (block_width_size > new_shape || block_height_size > new_shape)
    fail("block sizes must not exceed new_shape");
  if (!(block_overlap >= 0.0 && block_overlap < 1.0)) fail("block_overlap must lie in [0, 1)");
  if (!(fft_peak_th >= 0.0 && fft_peak_th <= 1.0)) fail("fft_peak_th must lie in [0, 1]");
  if (!(lo_certainty_th >= 0.0)) fail("lo_certainty_th must be >= 0");
  if (!(peak_blur_sigma >= 0.0)) fail("peak_blur_sigma must be >= 0");
  if (acc_type != 0 && acc_type != 1) fail("acc_type must be 0 or 1");
  if (!(patch_retention >= 0.0 && patch_retention <= 1.0)) fail("patch retention must lie in [0, 1]");
}

Detection detect(const PreparedImage& image, const PithParams& params) {
  params.validate();
  Detection d;
  d.estimates = local_orientation_estimation(image.gray, image.mask, params.orientation());
  if (d.estimates.empty())
    throw PithError(ErrorCode::EmptyLineSet, "no local orientation passed the certainty threshold");

  const std::vector<Line> lines = to_lines(d.estimates);
  d.accumulator = accumulation_space(lines, params.acc_type, image.gray.width(),
                                     image.gray.height(), params.jobs);
  d.peak = find_peak(d.accumulator, params.peak_blur_sigma);
  d.pith = d.peak.location;
  return d;
}

FileDetection detect_file(const std::filesystem::path& image_path,
                          const std::optional<std::filesystem::path>& mask_path,
                          const PithParams& params) {
  params.validate();
  FileDetection out;
  out.image = load_and_prepare(image_path, mask_path, params.new_shape);
  out.detection = detect(out.image, params);
  out.pith_original = out.image.scale.to_original(out.detection.pith);
  return out;
}

}  // namespace pith
