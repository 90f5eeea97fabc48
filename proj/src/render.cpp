#include "pith/render.hpp"

#include <algorithm>
#include <cmath>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

namespace pith::render {
namespace {

const cv::Scalar kRed(0, 0, 255);
const cv::Scalar kBlue(255, 0, 0);
const cv::Scalar kGreen(0, 200, 0);
const cv::Scalar kYellow(0, 220, 255);

cv::Point to_cv(Point2d p) {
  return {static_cast<int>(round_half_up(p.x)), static_cast<int>(round_half_up(p.y))};
}

void write_png(const std::filesystem::path& path, const cv::Mat& img) {
  if (!cv::imwrite(path.string(), img))
    throw PithError(ErrorCode::InvalidArgument, "cannot write " + path.string());
}

}  // namespace

cv::Mat masked_input(const PreparedImage& image) {
  const int w = image.gray.width(), h = image.gray.height();
  cv::Mat out(h, w, CV_8UC3);
  for (int y = 0; y < h; ++y) {
    auto* row = out.ptr<cv::Vec3b>(y);
    for (int x = 0; x < w; ++x) {
      double v = std::clamp(static_cast<double>(image.gray.at(x, y)), 0.0, 1.0) * 255.0;
      if (image.mask.at(x, y) == 0) v *= 0.35;
      const auto g = cv::saturate_cast<uchar>(v);
      row[x] = {g, g, g};
    }
  }
  return out;
}

cv::Mat filtered_lines(const PreparedImage& image, std::span<const OrientationEstimate> estimates) {
  cv::Mat out = masked_input(image);
  const double reach = std::hypot(out.cols, out.rows);
  for (const auto& e : estimates) {
    const double dx = std::cos(e.angle) * reach, dy = std::sin(e.angle) * reach;
    cv::Point2d p0(e.center.x - dx, e.center.y - dy), p1(e.center.x + dx, e.center.y + dy);
    cv::Point a(cvRound(p0.x), cvRound(p0.y)), b(cvRound(p1.x), cvRound(p1.y));
    if (cv::clipLine(out.size(), a, b)) cv::line(out, a, b, kGreen, 1, cv::LINE_AA);
  }
  for (const auto& e : estimates) cv::circle(out, to_cv(e.center), 2, kYellow, cv::FILLED);
  return out;
}

cv::Mat accumulator_heatmap(const AccumulatorSpace& acc, double peak_blur_sigma) {
  const Raster<double> smooth = gaussian_blur(acc, peak_blur_sigma);
  const double top = *std::max_element(smooth.pixels().begin(), smooth.pixels().end());
  cv::Mat gray(acc.height(), acc.width(), CV_8UC1, cv::Scalar(0));
  if (top > 0.0)
    for (int y = 0; y < acc.height(); ++y)
      for (int x = 0; x < acc.width(); ++x)
        gray.at<uchar>(y, x) = cv::saturate_cast<uchar>(255.0 * smooth.at(x, y) / top);
  cv::Mat out;
  cv::applyColorMap(gray, out, cv::COLORMAP_JET);
  return out;
}

cv::Mat peak_overlay(const PreparedImage& image, const PeakResult& peak) {
  cv::Mat out = masked_input(image);
  const int r = std::max(3, out.cols / 150);
  for (const auto& m : peak.maxima) cv::circle(out, to_cv(m), r, kRed, cv::FILLED);
  cv::circle(out, to_cv(peak.location), 2 * r, kBlue, 2, cv::LINE_AA);
  cv::drawMarker(out, to_cv(peak.location), kBlue, cv::MARKER_CROSS, 4 * r, 2);
  return out;
}

cv::Mat spectrum_panels(std::span<const PatchAnalysis> analyses, int max_panels) {
  const int n = std::min<int>(max_panels, static_cast<int>(analyses.size()));
  if (n <= 0) return cv::Mat(1, 1, CV_8UC3, cv::Scalar(0, 0, 0));
  const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  const int rows = (n + cols - 1) / cols;
  int cw = 0, ch = 0;
  for (int i = 0; i < n; ++i) {
    cw = std::max(cw, analyses[i].filtered.width());
    ch = std::max(ch, analyses[i].filtered.height());
  }
  constexpr int kGap = 2;
  cv::Mat gray(rows * (ch + kGap), cols * (cw + kGap), CV_8UC1, cv::Scalar(0));
  for (int i = 0; i < n; ++i) {
    const Spectrum& s = analyses[i].filtered;
    if (s.width() == 0) continue;
    const double top = std::log1p(s.max());
    const int ox = (i % cols) * (cw + kGap), oy = (i / cols) * (ch + kGap);
    for (int v = s.v_min(); v <= s.v_max(); ++v)
      for (int u = s.u_min(); u <= s.u_max(); ++u) {
        const double m = top > 0.0 ? std::log1p(s.at(u, v)) / top : 0.0;
        gray.at<uchar>(oy + v - s.v_min(), ox + u - s.u_min()) = cv::saturate_cast<uchar>(255.0 * m);
      }
  }
  cv::Mat out;
  cv::applyColorMap(gray, out, cv::COLORMAP_INFERNO);
  return out;
}

void write_debug_images(const std::filesystem::path& dir, const FileDetection& detection,
                        const PithParams& params) {
  std::filesystem::create_directories(dir);
  const auto& img = detection.image;
  const auto& det = detection.detection;
  write_png(dir / "masked_input.png", masked_input(img));
  write_png(dir / "filtered_lines.png", filtered_lines(img, det.estimates));
  write_png(dir / "accumulator.png", accumulator_heatmap(det.accumulator, params.peak_blur_sigma));
  write_png(dir / "peak_overlay.png", peak_overlay(img, det.peak));
  const auto analyses = analyze_patches(img.gray, img.mask, params.orientation(), true);
  write_png(dir / "spectra.png", spectrum_panels(analyses));
}

}  // namespace pith::render
