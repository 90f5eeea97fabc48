#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pith/dataset.hpp"
#include "pith/pipeline.hpp"
#include "pith/raster.hpp"

namespace pith::eval {

// ---------------------------------------------------------------- metrics

double euclidean_dist(Point2d dt, Point2d gt);

/// Rays traced through the ground truth for the diameter, and their spacing.
inline constexpr int kDiameterRays = 180;
inline constexpr double kDiameterRayStepDeg = 2.0;
/// March increment along each ray, pixels.
inline constexpr double kChordStep = 0.5;

/// Longest of the 180 chords through `gt` (one every 2 degrees), each traced
/// outward in both directions until it first leaves the foreground.
double max_diameter(const MaskImage& mask, Point2d gt);

/// Scale factor applied to Dist / d.
inline constexpr double kNormalizationFactor = 1000.0;

double normalized_dist(double dist, double diameter);

/// Even-odd rule; points on an edge may land on either side.
bool point_in_polygon(Point2d p, const Polygon& polygon);

/// Smallest i with `prediction` inside rings[i]; rings.size() when outside all.
int ring_index(Point2d prediction, std::span<const Polygon> rings);

/// Throws BadAnnotation unless rings are well formed and each lies strictly
/// inside the next one.
void validate_rings(std::span<const Polygon> rings);

struct EvaluationRecord {
  std::string id;
  Point2d prediction;  ///< original-image pixels
  Point2d gt;
  double dist = 0.0;
  double diameter = 0.0;
  double norm_dist = 0.0;
  std::optional<int> ring_index;  ///< empty without ring annotations
  bool is_tp = false;             ///< ring_index == 0
  double runtime_ms = 0.0;
};

/// Builds the record for one prediction. The diameter is measured on the
/// original-resolution mask.
EvaluationRecord evaluate_prediction(const DatasetEntry& entry, Point2d prediction,
                                     const MaskImage& original_mask);

struct PrecisionResult {
  int tp = 0;
  int fp = 0;
  double precision = 0.0;  ///< TP / (TP + FP)

  /// Precision as an integer percentage, rounded half away from zero.
  long percent() const;
};

PrecisionResult precision_from_counts(int tp, int fp);
/// Records without ring information are ignored; throws NoRecords when none
/// remain.
PrecisionResult precision(std::span<const EvaluationRecord> records);

struct Statistics {
  double mean = 0.0;
  double std = 0.0;  ///< population standard deviation
  double median = 0.0;
  double p90 = 0.0;
  double p95 = 0.0;
  double max = 0.0;
};

/// Quantile with linear interpolation between order statistics.
double quantile(std::vector<double> values, double q);
Statistics statistics(std::span<const double> values);

struct Summary {
  Statistics dist;
  Statistics norm_dist;
};

Summary summarize(std::span<const EvaluationRecord> records);

// ---------------------------------------------------------------- dataset I/O

/// Rings from a per-image JSON: {"rings": [{"name": ..., "points": [[x, y], ...]}, ...]},
/// innermost first. Nesting is validated.
std::vector<Polygon> load_rings(const std::filesystem::path& path);

/// CSV (header: id,image_path,mask_path,gt_x,gt_y,annotation_path) or JSON
/// (array of objects with the same keys, or {"entries": [...]}). Relative
/// paths resolve against the manifest directory. Annotations are loaded.
std::vector<DatasetEntry> load_manifest(const std::filesystem::path& path);

void write_manifest_csv(const std::filesystem::path& path, std::span<const DatasetEntry> entries);

// ---------------------------------------------------------------- evaluation

struct ImageOutcome {
  std::string id;
  std::optional<EvaluationRecord> record;
  std::string error;  ///< set when record is empty
};

struct EvaluationRun {
  std::vector<ImageOutcome> outcomes;  ///< manifest order

  std::vector<EvaluationRecord> records() const;
  std::size_t failures() const;
};

/// Runs the detector on every entry; per-image failures are captured.
EvaluationRun evaluate_dataset(std::span<const DatasetEntry> entries, const PithParams& params,
                               unsigned jobs = 0);

void write_records_csv(const std::filesystem::path& path, const EvaluationRun& run);
/// One row: counts, the six statistics for both distances, TP/FP/precision.
void write_summary_csv(const std::filesystem::path& path, const EvaluationRun& run);
/// Rows Mean..Max with distance and normalized distance columns.
void write_summary_table_csv(const std::filesystem::path& path, const EvaluationRun& run);
/// ring_index,count over records that carry ring information.
void write_ring_histogram(const std::filesystem::path& path, const EvaluationRun& run);

// ---------------------------------------------------------------- grid search

struct GridSpec {
  std::vector<int> patch_sizes;  ///< square patches
  std::vector<double> overlaps;
  std::vector<LoMethod> methods;
  std::vector<double> thresholds;
  PithParams base;  ///< fixed parameters

  /// Patch {20,30,50,100} x overlap {0,.2,.4,.5} x {PCA, peak} x
  /// threshold {.75,.85,.95}; 1000 px images, fft_peak_th 0.6, pass-through
  /// accumulation, sigma 3.
  static GridSpec reference_lattice();

  std::vector<PithParams> configurations() const;
};

struct GridRow {
  PithParams params;
  double mean_dist = 0.0;       ///< infinity when every image failed
  double mean_norm_dist = 0.0;
  std::size_t evaluated = 0;
  std::size_t failed = 0;
};

using GridWarning = std::function<void(const std::string&)>;

/// Evaluates every configuration on every image and ranks by mean distance
/// (ties by mean normalized distance). Images are prepared once per image;
/// configurations run in parallel.
std::vector<GridRow> grid_search(std::span<const DatasetEntry> entries, const GridSpec& grid,
                                 unsigned jobs = 0, const GridWarning& warn = {});

void write_grid_csv(const std::filesystem::path& path, std::span<const GridRow> rows);

}  // namespace pith::eval
