#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pith/patchgrid.hpp"
#include "pith/raster.hpp"
#include "pith/types.hpp"

namespace pith {

enum class LoMethod { Peak, Lsr, Wlsr, Pca };

std::string_view to_string(LoMethod method);
std::optional<LoMethod> parse_lo_method(std::string_view name);

/// How the PCA method turns its eigenvalues into a certainty score.
enum class PcaCertainty {
  Normalized,  ///< (l1 - l2) / (l1 + l2), in [0, 1]
  RawRatio,    ///< l1 / l2, unbounded; infinite when l2 == 0
};

/// Taper applied to a patch before its Fourier transform.
enum class SpectrumWindow { Hann, None };

std::string_view to_string(SpectrumWindow window);
std::optional<SpectrumWindow> parse_spectrum_window(std::string_view name);

/// Bins below this fraction of the largest magnitude are treated as round-off.
/// Single-precision patches leave residue near 1e-8 of the maximum.
inline constexpr double kSpectrumFloor = 1e-6;

/// Band-pass limits in cycles per patch height.
inline double band_low(int patch_height) { return patch_height / 64.0; }
inline double band_high(int patch_height) { return patch_height / 3.0; }

/// Lines fitted by least squares switch to the principal axis once the
/// ordinary-regression slope exceeds this magnitude.
inline constexpr double kNearVerticalSlope = 5.0;

/// DC-centered magnitude spectrum. Bin (u, v) holds the magnitude at u cycles
/// across the patch width and v cycles down the patch height; u = v = 0 is the
/// center bin at index (width / 2, height / 2).
class Spectrum {
 public:
  Spectrum() = default;
  Spectrum(int width, int height);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int u_min() const noexcept { return -(width_ / 2); }
  int u_max() const noexcept { return width_ - 1 - width_ / 2; }
  int v_min() const noexcept { return -(height_ / 2); }
  int v_max() const noexcept { return height_ - 1 - height_ / 2; }

  bool contains(int u, int v) const noexcept {
    return u >= u_min() && u <= u_max() && v >= v_min() && v <= v_max();
  }
  double at(int u, int v) const { return magnitude_[index(u, v)]; }
  double& at(int u, int v) { return magnitude_[index(u, v)]; }

  std::span<const double> magnitudes() const noexcept { return magnitude_; }
  std::span<double> magnitudes() noexcept { return magnitude_; }

  double max() const noexcept;
  /// Bins with nonzero magnitude.
  std::size_t support() const noexcept;
  bool empty() const noexcept { return support() == 0; }

  /// Frequency coordinates of bin (u, v) in cycles per patch height. Equal to
  /// (u, v) for square patches.
  double freq_u(int u) const noexcept { return static_cast<double>(u) * height_ / width_; }
  double freq_v(int v) const noexcept { return static_cast<double>(v); }

 private:
  std::size_t index(int u, int v) const noexcept {
    return static_cast<std::size_t>(v - v_min()) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(u - u_min());
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> magnitude_;
};

/// A line through a patch center along the local ring normal.
struct OrientationEstimate {
  Point2d center;
  double angle = 0.0;      ///< direction (cos, sin) in pixel coordinates, [0, pi)
  double certainty = 0.0;
};

/// Magnitude spectrum of the patch with its (window-weighted) mean removed.
/// A constant patch gives an all-zero spectrum.
Spectrum compute_fourier_spectrum(const GrayImage& patch,
                                  SpectrumWindow window = SpectrumWindow::Hann);

/// Annular band-pass [H/64, H/3] followed by zeroing every bin below
/// fft_peak_th times the band-passed maximum.
Spectrum preprocess_fourier_spectrum(const Spectrum& spec, double fft_peak_th);

/// Dominant line through the spectrum center and its certainty. The line in
/// frequency space has the direction of the ring normal in the image.
OrientationEstimate lo_estimate(const Spectrum& spec, LoMethod method, Point2d patch_center,
                                PcaCertainty pca_mode = PcaCertainty::Normalized);

struct OrientationParams {
  double block_overlap = 0.2;
  int block_width_size = 100;
  int block_height_size = 100;
  double fft_peak_th = 0.8;
  SpectrumWindow window = SpectrumWindow::Hann;
  LoMethod lo_method = LoMethod::Pca;
  double lo_certainty_th = 0.9;
  PcaCertainty pca_certainty = PcaCertainty::Normalized;
  double patch_retention = kPatchRetention;
  unsigned jobs = 0;  ///< 0 = hardware concurrency
};

/// Per-patch intermediate products, kept for diagnostics.
struct PatchAnalysis {
  Patch patch;
  Spectrum raw;
  Spectrum filtered;
  std::optional<OrientationEstimate> estimate;  ///< empty when the spectrum was empty
};

/// Runs split -> FFT -> preprocess -> estimate over every retained patch,
/// without certainty filtering. Output order follows the patch grid. Spectra
/// are left default-constructed unless keep_spectra is set.
std::vector<PatchAnalysis> analyze_patches(const GrayImage& img, const MaskImage& mask,
                                           const OrientationParams& params,
                                           bool keep_spectra = true);

/// Keeps estimates whose certainty is strictly above the threshold.
std::vector<OrientationEstimate> filter_lo_by_certainty(
    std::span<const OrientationEstimate> estimates, double lo_certainty_th);

std::vector<OrientationEstimate> local_orientation_estimation(const GrayImage& img,
                                                              const MaskImage& mask,
                                                              const OrientationParams& params);

}  // namespace pith
