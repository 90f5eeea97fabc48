#include "pith/imageprep.hpp"

#include <algorithm>
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>
#include <vector>

namespace pith {
namespace {

constexpr int kMinShape = 64;

cv::Mat as_mat(const GrayImage& img) {
  return cv::Mat(img.height(), img.width(), CV_32F, const_cast<float*>(img.pixels().data()));
}

cv::Mat as_mat(const MaskImage& img) {
  return cv::Mat(img.height(), img.width(), CV_8U, const_cast<std::uint8_t*>(img.pixels().data()));
}

MaskImage from_mat_u8(const cv::Mat& m) {
  MaskImage out(m.cols, m.rows);
  for (int y = 0; y < m.rows; ++y) {
    const auto* src = m.ptr<std::uint8_t>(y);
    auto dst = out.row(y);
    for (int x = 0; x < m.cols; ++x) dst[x] = src[x] != 0 ? 1 : 0;
  }
  return out;
}

void require_shape(int new_shape) {
  if (new_shape < kMinShape)
    throw PithError(ErrorCode::InvalidArgument,
                    "new_shape must be at least " + std::to_string(kMinShape));
}

PreparedImage finish(const GrayImage& gray, MaskImage mask, int new_shape) {
  if (foreground_count(mask) == 0)
    throw PithError(ErrorCode::EmptyForeground, "mask has no foreground pixels");

  PreparedImage out;
  out.scale = {gray.width(), gray.height(), new_shape, new_shape};
  GrayImage resized = resize_gray(gray, new_shape, new_shape);
  out.mask = resize_mask(mask, new_shape, new_shape);
  if (foreground_count(out.mask) == 0)
    throw PithError(ErrorCode::EmptyForeground, "foreground vanished after resizing");
  out.gray = apply_mask(resized, out.mask);
  out.original_mask = std::move(mask);
  return out;
}

}  // namespace

MaskImage clean_foreground(const MaskImage& raw) {
  cv::Mat fg = as_mat(raw) != 0;
  cv::Mat labels, stats, centroids;
  int n = cv::connectedComponentsWithStats(fg, labels, stats, centroids, 8, CV_32S);
  if (n <= 1) return MaskImage(raw.width(), raw.height(), 0);

  int best = 1;
  for (int i = 2; i < n; ++i)
    if (stats.at<int>(i, cv::CC_STAT_AREA) > stats.at<int>(best, cv::CC_STAT_AREA)) best = i;
  cv::Mat keep = labels == best;

  // Background regions that do not reach the border are holes in the disk.
  cv::Mat bg = keep == 0;
  cv::Mat bg_labels;
  int nb = cv::connectedComponents(bg, bg_labels, 4, CV_32S);
  std::vector<std::uint8_t> touches_border(static_cast<std::size_t>(nb), 0);
  const int w = bg.cols, h = bg.rows;
  for (int x = 0; x < w; ++x) {
    touches_border[bg_labels.at<int>(0, x)] = 1;
    touches_border[bg_labels.at<int>(h - 1, x)] = 1;
  }
  for (int y = 0; y < h; ++y) {
    touches_border[bg_labels.at<int>(y, 0)] = 1;
    touches_border[bg_labels.at<int>(y, w - 1)] = 1;
  }

  MaskImage out(w, h, 0);
  for (int y = 0; y < h; ++y) {
    const auto* k = keep.ptr<std::uint8_t>(y);
    const auto* l = bg_labels.ptr<int>(y);
    auto dst = out.row(y);
    for (int x = 0; x < w; ++x) dst[x] = (k[x] != 0 || (l[x] != 0 && !touches_border[l[x]])) ? 1 : 0;
  }
  return out;
}

MaskImage derive_mask(const GrayImage& gray) {
  MaskImage raw(gray.width(), gray.height(), 0);
  auto src = gray.pixels();
  auto dst = raw.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] < kWhiteBackgroundLevel ? 1 : 0;
  return clean_foreground(raw);
}

GrayImage apply_mask(const GrayImage& gray, const MaskImage& mask) {
  if (gray.width() != mask.width() || gray.height() != mask.height())
    throw PithError(ErrorCode::MaskMismatch, "mask dimensions differ from image dimensions");
  double sum = 0.0;
  std::size_t n = 0;
  auto g = gray.pixels();
  auto m = mask.pixels();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (m[i]) {
      sum += g[i];
      ++n;
    }
  }
  if (n == 0) throw PithError(ErrorCode::EmptyForeground, "mask has no foreground pixels");
  const float fill = static_cast<float>(sum / static_cast<double>(n));

  GrayImage out = gray;
  auto o = out.pixels();
  for (std::size_t i = 0; i < o.size(); ++i)
    if (!m[i]) o[i] = fill;
  return out;
}

GrayImage resize_gray(const GrayImage& gray, int width, int height) {
  if (gray.width() == width && gray.height() == height) return gray;
  cv::Mat dst;
  cv::resize(as_mat(gray), dst, cv::Size(width, height), 0, 0, cv::INTER_LINEAR);
  std::vector<float> data(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) std::copy_n(dst.ptr<float>(y), width, data.data() + static_cast<std::size_t>(y) * width);
  for (auto& v : data) v = std::clamp(v, 0.0f, 1.0f);
  return GrayImage(width, height, std::move(data));
}

MaskImage resize_mask(const MaskImage& mask, int width, int height) {
  if (mask.width() == width && mask.height() == height) return mask;
  cv::Mat dst;
  cv::resize(as_mat(mask), dst, cv::Size(width, height), 0, 0, cv::INTER_NEAREST);
  return from_mat_u8(dst);
}

PreparedImage prepare(const GrayImage& gray, const std::optional<MaskImage>& mask, int new_shape) {
  require_shape(new_shape);
  if (mask && (mask->width() != gray.width() || mask->height() != gray.height()))
    throw PithError(ErrorCode::MaskMismatch, "mask dimensions differ from image dimensions");
  return finish(gray, mask ? *mask : derive_mask(gray), new_shape);
}

MaskImage load_mask(const std::filesystem::path& mask_path) {
  cv::Mat m = cv::imread(mask_path.string(), cv::IMREAD_GRAYSCALE);
  if (m.empty())
    throw PithError(ErrorCode::UnreadableImage, "cannot read mask: " + mask_path.string());
  return from_mat_u8(m);
}

PreparedImage load_and_prepare(const std::filesystem::path& image_path,
                               const std::optional<std::filesystem::path>& mask_path,
                               int new_shape) {
  require_shape(new_shape);
  cv::Mat bgr = cv::imread(image_path.string(), cv::IMREAD_COLOR);
  if (bgr.empty())
    throw PithError(ErrorCode::UnreadableImage, "cannot read image: " + image_path.string());

  const int w = bgr.cols, h = bgr.rows;
  GrayImage gray(w, h);
  MaskImage white_free(w, h, 0);
  constexpr double inv = 1.0 / 255.0;
  for (int y = 0; y < h; ++y) {
    const auto* px = bgr.ptr<cv::Vec3b>(y);
    auto g = gray.row(y);
    auto m = white_free.row(y);
    for (int x = 0; x < w; ++x) {
      const double b = px[x][0] * inv, gr = px[x][1] * inv, r = px[x][2] * inv;
      g[x] = to_grayscale(r, gr, b);
      const bool white = r >= kWhiteBackgroundLevel && gr >= kWhiteBackgroundLevel &&
                         b >= kWhiteBackgroundLevel;
      m[x] = white ? 0 : 1;
    }
  }

  MaskImage mask;
  if (mask_path) {
    mask = load_mask(*mask_path);
    if (mask.width() != w || mask.height() != h)
      throw PithError(ErrorCode::MaskMismatch, "mask " + mask_path->string() +
                                                   " does not match image dimensions");
  } else {
    mask = clean_foreground(white_free);
  }
  return finish(gray, std::move(mask), new_shape);
}

}  // namespace pith
