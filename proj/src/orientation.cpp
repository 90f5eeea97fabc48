#include "pith/orientation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <opencv2/core.hpp>

#include "pith/parallel.hpp"

namespace pith {
namespace {

struct Bin {
  double u;
  double v;
  double magnitude;
};

std::vector<Bin> surviving_bins(const Spectrum& spec) {
  std::vector<Bin> bins;
  for (int v = spec.v_min(); v <= spec.v_max(); ++v)
    for (int u = spec.u_min(); u <= spec.u_max(); ++u)
      if (double m = spec.at(u, v); m > 0.0) bins.push_back({spec.freq_u(u), spec.freq_v(v), m});
  return bins;
}

// Second moments about the spectrum center.
struct Moments {
  double uu = 0.0;
  double vv = 0.0;
  double uv = 0.0;
};

template <typename WeightFn>
Moments moments(const std::vector<Bin>& bins, WeightFn weight) {
  Moments m;
  for (const auto& b : bins) {
    const double w = weight(b.magnitude);
    m.uu += w * b.u * b.u;
    m.vv += w * b.v * b.v;
    m.uv += w * b.u * b.v;
  }
  return m;
}

double principal_angle(const Moments& m) {
  return normalize_half_turn(0.5 * std::atan2(2.0 * m.uv, m.uu - m.vv));
}

OrientationEstimate peak_estimate(const std::vector<Bin>& bins, Point2d center) {
  const Bin* best = nullptr;
  double best_r = 0.0, best_angle = 0.0;
  for (const auto& b : bins) {
    const double r = std::hypot(b.u, b.v);
    const double angle = normalize_half_turn(std::atan2(b.v, b.u));
    const bool better =
        !best || b.magnitude > best->magnitude ||
        (b.magnitude == best->magnitude &&
         (r < best_r || (r == best_r && angle < best_angle)));
    if (better) {
      best = &b;
      best_r = r;
      best_angle = angle;
    }
  }
  return {center, best_angle, 1.0};
}

// Least squares line through the spectrum center. Ordinary regression of v on
// u unless the slope is near vertical, where the principal axis is used.
OrientationEstimate regression_estimate(const std::vector<Bin>& bins, bool weighted,
                                        Point2d center) {
  const Moments m = weighted ? moments(bins, [](double mag) { return std::sqrt(mag); })
                             : moments(bins, [](double) { return 1.0; });

  double angle;
  const bool near_vertical = m.uu <= 0.0 || std::fabs(m.uv / m.uu) > kNearVerticalSlope;
  if (near_vertical)
    angle = principal_angle(m);
  else
    angle = normalize_half_turn(std::atan(m.uv / m.uu));

  // Through the origin, 1 - SS_res / SS_tot reduces to uv^2 / (uu * vv) for
  // either choice of regression axis. A zero denominator means every bin is
  // on an axis, which the line fits exactly.
  double r2 = 1.0;
  if (m.uu > 0.0 && m.vv > 0.0) r2 = std::clamp(m.uv * m.uv / (m.uu * m.vv), 0.0, 1.0);
  return {center, angle, std::fabs(r2)};
}

OrientationEstimate pca_estimate(const std::vector<Bin>& bins, PcaCertainty mode, Point2d center) {
  const Moments m = moments(bins, [](double mag) { return mag; });
  const double trace = m.uu + m.vv;
  const double gap = std::hypot(m.uu - m.vv, 2.0 * m.uv);  // l1 - l2
  const double l1 = 0.5 * (trace + gap);
  const double l2 = std::max(0.0, 0.5 * (trace - gap));

  double certainty = 0.0;
  if (trace > 0.0) {
    if (mode == PcaCertainty::Normalized)
      certainty = std::clamp(gap / trace, 0.0, 1.0);
    else
      certainty = l2 > 0.0 ? l1 / l2 : std::numeric_limits<double>::infinity();
  }
  return {center, principal_angle(m), certainty};
}

}  // namespace

std::string_view to_string(LoMethod method) {
  switch (method) {
    case LoMethod::Peak: return "peak";
    case LoMethod::Lsr: return "lsr";
    case LoMethod::Wlsr: return "wlsr";
    case LoMethod::Pca: return "pca";
  }
  return "pca";
}

std::string_view to_string(SpectrumWindow window) {
  return window == SpectrumWindow::Hann ? "hann" : "none";
}

std::optional<SpectrumWindow> parse_spectrum_window(std::string_view name) {
  if (name == "hann") return SpectrumWindow::Hann;
  if (name == "none") return SpectrumWindow::None;
  return std::nullopt;
}

std::optional<LoMethod> parse_lo_method(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "peak") return LoMethod::Peak;
  if (lower == "lsr") return LoMethod::Lsr;
  if (lower == "wlsr") return LoMethod::Wlsr;
  if (lower == "pca") return LoMethod::Pca;
  return std::nullopt;
}

Spectrum::Spectrum(int width, int height)
    : width_(width),
      height_(height),
      magnitude_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0.0) {
  if (width <= 0 || height <= 0)
    throw PithError(ErrorCode::InvalidArgument, "spectrum dimensions must be positive");
}

double Spectrum::max() const noexcept {
  double m = 0.0;
  for (double v : magnitude_) m = std::max(m, v);
  return m;
}

std::size_t Spectrum::support() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(magnitude_.begin(), magnitude_.end(), [](double v) { return v > 0.0; }));
}

Spectrum compute_fourier_spectrum(const GrayImage& patch, SpectrumWindow window) {
  const int w = patch.width(), h = patch.height();
  if (w < 8 || h < 8)
    throw PithError(ErrorCode::InvalidArgument, "patch must be at least 8x8 for the spectrum");

  Spectrum spec(w, h);
  const auto [lo, hi] = std::minmax_element(patch.pixels().begin(), patch.pixels().end());
  if (*lo == *hi) return spec;

  std::vector<double> wx(static_cast<std::size_t>(w), 1.0), wy(static_cast<std::size_t>(h), 1.0);
  if (window == SpectrumWindow::Hann) {
    for (int x = 0; x < w; ++x) wx[x] = 0.5 - 0.5 * std::cos(2.0 * kPi * x / w);
    for (int y = 0; y < h; ++y) wy[y] = 0.5 - 0.5 * std::cos(2.0 * kPi * y / h);
  }

  double weighted = 0.0, total = 0.0;
  for (int y = 0; y < h; ++y) {
    auto row = patch.row(y);
    for (int x = 0; x < w; ++x) {
      weighted += wx[x] * wy[y] * row[x];
      total += wx[x] * wy[y];
    }
  }
  const double mean = weighted / total;

  cv::Mat src(h, w, CV_64F);
  for (int y = 0; y < h; ++y) {
    auto row = patch.row(y);
    auto* dst = src.ptr<double>(y);
    for (int x = 0; x < w; ++x) dst[x] = (row[x] - mean) * wx[x] * wy[y];
  }
  cv::Mat freq;
  cv::dft(src, freq, cv::DFT_COMPLEX_OUTPUT);

  for (int fy = 0; fy < h; ++fy) {
    const auto* row = freq.ptr<cv::Vec2d>(fy);
    const int v = fy <= spec.v_max() ? fy : fy - h;
    for (int fx = 0; fx < w; ++fx) {
      const int u = fx <= spec.u_max() ? fx : fx - w;
      spec.at(u, v) = std::hypot(row[fx][0], row[fx][1]);
    }
  }
  const double floor = kSpectrumFloor * spec.max();
  for (double& m : spec.magnitudes())
    if (m <= floor) m = 0.0;
  return spec;
}

Spectrum preprocess_fourier_spectrum(const Spectrum& spec, double fft_peak_th) {
  if (!(fft_peak_th >= 0.0 && fft_peak_th <= 1.0))
    throw PithError(ErrorCode::InvalidArgument, "fft_peak_th must lie in [0, 1]");

  const double lo = band_low(spec.height());
  const double hi = band_high(spec.height());
  Spectrum out(spec.width(), spec.height());
  for (int v = spec.v_min(); v <= spec.v_max(); ++v) {
    for (int u = spec.u_min(); u <= spec.u_max(); ++u) {
      const double r = std::hypot(spec.freq_u(u), spec.freq_v(v));
      if (r >= lo && r <= hi) out.at(u, v) = spec.at(u, v);
    }
  }

  const double cutoff = fft_peak_th * out.max();
  for (double& m : out.magnitudes())
    if (m < cutoff) m = 0.0;
  return out;
}

OrientationEstimate lo_estimate(const Spectrum& spec, LoMethod method, Point2d patch_center,
                                PcaCertainty pca_mode) {
  const std::vector<Bin> bins = surviving_bins(spec);
  if (bins.empty())
    throw PithError(ErrorCode::InvalidArgument, "cannot estimate orientation of an empty spectrum");

  if (method == LoMethod::Peak) return peak_estimate(bins, patch_center);
  if (bins.size() < 2) {
    const auto& b = bins.front();
    return {patch_center, normalize_half_turn(std::atan2(b.v, b.u)), 0.0};
  }
  switch (method) {
    case LoMethod::Lsr: return regression_estimate(bins, false, patch_center);
    case LoMethod::Wlsr: return regression_estimate(bins, true, patch_center);
    default: return pca_estimate(bins, pca_mode, patch_center);
  }
}

std::vector<PatchAnalysis> analyze_patches(const GrayImage& img, const MaskImage& mask,
                                           const OrientationParams& params,
                                           bool keep_spectra) {
  std::vector<Patch> patches =
      split_image_in_blocks(img, mask, params.block_overlap, params.block_width_size,
                            params.block_height_size, params.patch_retention);

  std::vector<PatchAnalysis> out(patches.size());
  parallel_for(patches.size(), params.jobs, [&](std::size_t i) {
    PatchAnalysis& a = out[i];
    a.patch = std::move(patches[i]);
    Spectrum raw = compute_fourier_spectrum(a.patch.pixels, params.window);
    Spectrum filtered = preprocess_fourier_spectrum(raw, params.fft_peak_th);
    if (!filtered.empty())
      a.estimate = lo_estimate(filtered, params.lo_method, a.patch.center, params.pca_certainty);
    if (keep_spectra) {
      a.raw = std::move(raw);
      a.filtered = std::move(filtered);
    }
  });
  return out;
}

std::vector<OrientationEstimate> filter_lo_by_certainty(
    std::span<const OrientationEstimate> estimates, double lo_certainty_th) {
  std::vector<OrientationEstimate> kept;
  for (const auto& e : estimates)
    if (e.certainty > lo_certainty_th) kept.push_back(e);
  return kept;
}

std::vector<OrientationEstimate> local_orientation_estimation(const GrayImage& img,
                                                              const MaskImage& mask,
                                                              const OrientationParams& params) {
  std::vector<OrientationEstimate> all;
  for (const auto& a : analyze_patches(img, mask, params, false))
    if (a.estimate) all.push_back(*a.estimate);
  return filter_lo_by_certainty(all, params.lo_certainty_th);
}

}  // namespace pith
