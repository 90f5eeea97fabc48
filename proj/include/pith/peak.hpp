#pragma once

#include <vector>

#include "pith/accumulator.hpp"
#include "pith/raster.hpp"

namespace pith {

struct PeakResult {
  Point2d location;             ///< mean of all global maxima
  std::vector<Point2d> maxima;  ///< cells sharing the global maximum
  double value = 0.0;           ///< smoothed maximum
};

/// Isotropic Gaussian smoothing with the kernel truncated at 3 sigma on each
/// side and zero extension past the border. sigma == 0 returns the votes
/// unchanged.
Raster<double> gaussian_blur(const AccumulatorSpace& acc, double sigma);

/// Smooths the votes and returns the global maximum; exact ties are averaged.
PeakResult find_peak(const AccumulatorSpace& acc, double peak_blur_sigma);

}  // namespace pith
