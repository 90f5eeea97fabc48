#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "pith/dataset.hpp"
#include "pith/patchgrid.hpp"
#include "pith/raster.hpp"

namespace pith::synth {

/// Radial wedge with its apex at the disk center, rendered as a dark gap.
struct CrackWedge {
  double direction = 0.0;  ///< radians, pixel coordinates
  double width = 0.35;     ///< full angular width, radians
  double inner_radius_fraction = 0.1;
};

struct SpiderwebSpec {
  int size = 1000;
  Point2d center{500.0, 500.0};
  double ring_spacing = 20.0;  ///< period of the radial intensity profile, pixels
  double contrast = 0.8;       ///< peak-to-peak amplitude on [0, 1]
  double noise_sigma = 0.0;
  double disk_radius = 450.0;
  std::optional<CrackWedge> crack;
  int ray_count = 0;           ///< thin dark radial rays
  int ring_vertices = 256;
  std::uint64_t seed = 0;
  std::string id = "spiderweb";
};

/// Draws a spec from `seed`: center within size/10 of the middle, ring spacing
/// in [8, 16] px, disk radius in [0.35, 0.45] x size, noise sigma 0.05.
SpiderwebSpec random_spiderweb_spec(std::uint64_t seed, int size = 1000);

struct SyntheticCase {
  GrayImage image;  ///< white background outside the disk
  MaskImage mask;
  DatasetEntry entry;
};

/// Concentric sinusoidal rings around `center` on a white background. The
/// annotation rings sit on the intensity minima, so ring 0 is the dark circle
/// at half a period from the center.
SyntheticCase make_spiderweb(const SpiderwebSpec& spec);

struct SinusoidPatch {
  Patch patch;
  double angle = 0.0;   ///< realized wave-vector direction, [0, pi)
  double cycles = 0.0;  ///< realized cycles across the patch
};

/// Plane wave across a size x size patch. With `periodic` the wave vector is
/// snapped to integer cycles per side, so the spectrum is exactly one bin pair
/// and the realized angle is reported back.
SinusoidPatch make_sinusoid_patch(int size, double angle, double cycles, bool periodic = true);

/// Writes image.png, mask.png and rings.json for the case into `dir` and
/// returns the entry with its paths filled in.
DatasetEntry write_case(const SyntheticCase& c, const std::filesystem::path& dir);

}  // namespace pith::synth
