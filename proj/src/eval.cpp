#include "pith/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "pith/parallel.hpp"

namespace pith::eval {
namespace {

using nlohmann::json;

bool inside_mask(const MaskImage& mask, double x, double y) {
  const long px = round_half_up(x), py = round_half_up(y);
  return mask.contains(px, py) && mask.at(static_cast<int>(px), static_cast<int>(py)) != 0;
}

double march(const MaskImage& mask, Point2d from, double dx, double dy) {
  double s = 0.0;
  while (inside_mask(mask, from.x + (s + kChordStep) * dx, from.y + (s + kChordStep) * dy))
    s += kChordStep;
  return s;
}

EvaluationRecord make_record(const DatasetEntry& entry, Point2d prediction, double diameter) {
  EvaluationRecord r;
  r.id = entry.id;
  r.prediction = prediction;
  r.gt = entry.gt_pith;
  r.dist = euclidean_dist(prediction, entry.gt_pith);
  r.diameter = diameter;
  r.norm_dist = normalized_dist(r.dist, diameter);
  if (!entry.rings.empty()) {
    r.ring_index = ring_index(prediction, entry.rings);
    r.is_tp = *r.ring_index == 0;
  }
  return r;
}

// Minimal CSV field splitter; fields may be wrapped in double quotes.
std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == ',' && !quoted) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  for (auto& f : out) {
    const auto b = f.find_first_not_of(" \t");
    const auto e = f.find_last_not_of(" \t");
    f = b == std::string::npos ? std::string{} : f.substr(b, e - b + 1);
  }
  return out;
}

double parse_double(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw PithError(ErrorCode::BadManifest, "invalid " + what + ": '" + text + "'");
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

DatasetEntry finish_entry(DatasetEntry e) {
  if (e.id.empty()) e.id = e.image_path.stem().string();
  if (e.annotation_path) {
    e.rings = load_rings(*e.annotation_path);
    if (!e.rings.empty() && !point_in_polygon(e.gt_pith, e.rings.front()))
      throw PithError(ErrorCode::BadAnnotation,
                      "ground-truth pith of '" + e.id + "' is not inside ring 0");
  }
  return e;
}

std::string fmt(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << v;
  std::string s = os.str();
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw PithError(ErrorCode::InvalidArgument, "cannot write " + path.string());
  return out;
}

void write_stats(std::ostream& os, const Statistics& s) {
  os << fmt(s.mean) << ',' << fmt(s.std) << ',' << fmt(s.median) << ',' << fmt(s.p90) << ','
     << fmt(s.p95) << ',' << fmt(s.max);
}

}  // namespace

double euclidean_dist(Point2d dt, Point2d gt) { return std::hypot(dt.x - gt.x, dt.y - gt.y); }

double max_diameter(const MaskImage& mask, Point2d gt) {
  if (!inside_mask(mask, gt.x, gt.y))
    throw PithError(ErrorCode::OutsideMask, "ground-truth pith lies outside the foreground mask");
  double best = 0.0;
  for (int k = 0; k < kDiameterRays; ++k) {
    const double theta = k * kDiameterRayStepDeg * kPi / 180.0;
    const double dx = std::cos(theta), dy = std::sin(theta);
    best = std::max(best, march(mask, gt, dx, dy) + march(mask, gt, -dx, -dy));
  }
  return best;
}

double normalized_dist(double dist, double diameter) {
  if (!(diameter > 0.0))
    throw PithError(ErrorCode::InvalidArgument, "diameter must be positive");
  return kNormalizationFactor * dist / diameter;
}

bool point_in_polygon(Point2d p, const Polygon& polygon) {
  const auto& v = polygon.vertices;
  bool inside = false;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    if ((v[i].y > p.y) != (v[j].y > p.y)) {
      const double x = v[j].x + (p.y - v[j].y) * (v[i].x - v[j].x) / (v[i].y - v[j].y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

int ring_index(Point2d prediction, std::span<const Polygon> rings) {
  for (std::size_t i = 0; i < rings.size(); ++i) {
    const auto& v = rings[i].vertices;
    if (v.size() < 3)
      throw PithError(ErrorCode::MalformedPolygon, "ring polygon needs at least 3 vertices");
    if (point_in_polygon(prediction, rings[i])) return static_cast<int>(i);
  }
  return static_cast<int>(rings.size());
}

void validate_rings(std::span<const Polygon> rings) {
  for (std::size_t i = 0; i < rings.size(); ++i) {
    const auto& v = rings[i].vertices;
    if (v.size() < 3)
      throw PithError(ErrorCode::BadAnnotation, "ring " + std::to_string(i) + " has fewer than 3 vertices");
    for (const auto& p : v)
      if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw PithError(ErrorCode::BadAnnotation, "ring " + std::to_string(i) + " has a non-finite vertex");
    if (i + 1 < rings.size())
      for (const auto& p : v)
        if (!point_in_polygon(p, rings[i + 1]))
          throw PithError(ErrorCode::BadAnnotation, "ring " + std::to_string(i) +
                                                        " is not inside ring " + std::to_string(i + 1));
  }
}

EvaluationRecord evaluate_prediction(const DatasetEntry& entry, Point2d prediction,
                                     const MaskImage& original_mask) {
  return make_record(entry, prediction, max_diameter(original_mask, entry.gt_pith));
}

long PrecisionResult::percent() const { return std::lround(100.0 * precision); }

PrecisionResult precision_from_counts(int tp, int fp) {
  if (tp < 0 || fp < 0 || tp + fp == 0)
    throw PithError(ErrorCode::NoRecords, "precision needs at least one record");
  return {tp, fp, static_cast<double>(tp) / (tp + fp)};
}

PrecisionResult precision(std::span<const EvaluationRecord> records) {
  int tp = 0, fp = 0;
  for (const auto& r : records) {
    if (!r.ring_index) continue;
    (r.is_tp ? tp : fp)++;
  }
  return precision_from_counts(tp, fp);
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw PithError(ErrorCode::NoRecords, "quantile of an empty set");
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

Statistics statistics(std::span<const double> values) {
  if (values.empty()) throw PithError(ErrorCode::NoRecords, "no records to summarize");
  Statistics s;
  const auto n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(ss / n);
  std::vector<double> copy(values.begin(), values.end());
  s.median = quantile(copy, 0.5);
  s.p90 = quantile(copy, 0.9);
  s.p95 = quantile(copy, 0.95);
  s.max = *std::max_element(copy.begin(), copy.end());
  return s;
}

Summary summarize(std::span<const EvaluationRecord> records) {
  std::vector<double> d, nd;
  for (const auto& r : records) {
    d.push_back(r.dist);
    nd.push_back(r.norm_dist);
  }
  return {statistics(d), statistics(nd)};
}

std::vector<Polygon> load_rings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PithError(ErrorCode::BadAnnotation, "cannot read annotation " + path.string());
  std::vector<Polygon> rings;
  try {
    const json doc = json::parse(in);
    for (const auto& ring : doc.at("rings")) {
      Polygon poly;
      for (const auto& pt : ring.at("points"))
        poly.vertices.push_back({pt.at(0).get<double>(), pt.at(1).get<double>()});
      rings.push_back(std::move(poly));
    }
  } catch (const json::exception& e) {
    throw PithError(ErrorCode::BadAnnotation, path.string() + ": " + e.what());
  }
  validate_rings(rings);
  return rings;
}

std::vector<DatasetEntry> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PithError(ErrorCode::BadManifest, "cannot read manifest " + path.string());
  const auto base = path.parent_path();
  std::vector<DatasetEntry> entries;

  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".json") {
    try {
      json doc = json::parse(in);
      const json& list = doc.is_object() ? doc.at("entries") : doc;
      for (const auto& row : list) {
        DatasetEntry e;
        e.id = row.value("id", std::string{});
        e.image_path = resolve(base, row.at("image_path").get<std::string>());
        if (auto m = row.value("mask_path", std::string{}); !m.empty()) e.mask_path = resolve(base, m);
        e.gt_pith = {row.at("gt_x").get<double>(), row.at("gt_y").get<double>()};
        if (auto a = row.value("annotation_path", std::string{}); !a.empty())
          e.annotation_path = resolve(base, a);
        entries.push_back(finish_entry(std::move(e)));
      }
    } catch (const json::exception& e) {
      throw PithError(ErrorCode::BadManifest, path.string() + ": " + e.what());
    }
    return entries;
  }

  std::string line;
  if (!std::getline(in, line)) throw PithError(ErrorCode::BadManifest, "empty manifest " + path.string());
  const auto header = split_csv(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* required : {"image_path", "gt_x", "gt_y"})
    if (!col.count(required))
      throw PithError(ErrorCode::BadManifest, std::string("manifest lacks column '") + required + "'");

  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto f = split_csv(line);
    auto get = [&](const char* name) -> std::string {
      auto it = col.find(name);
      return it != col.end() && it->second < f.size() ? f[it->second] : std::string{};
    };
    DatasetEntry e;
    e.id = get("id");
    e.image_path = resolve(base, get("image_path"));
    if (auto m = get("mask_path"); !m.empty()) e.mask_path = resolve(base, m);
    e.gt_pith = {parse_double(get("gt_x"), "gt_x"), parse_double(get("gt_y"), "gt_y")};
    if (auto a = get("annotation_path"); !a.empty()) e.annotation_path = resolve(base, a);
    entries.push_back(finish_entry(std::move(e)));
  }
  return entries;
}

void write_manifest_csv(const std::filesystem::path& path, std::span<const DatasetEntry> entries) {
  auto out = open_out(path);
  out << "id,image_path,mask_path,gt_x,gt_y,annotation_path\n";
  for (const auto& e : entries)
    out << e.id << ',' << e.image_path.string() << ',' << (e.mask_path ? e.mask_path->string() : "")
        << ',' << fmt(e.gt_pith.x) << ',' << fmt(e.gt_pith.y) << ','
        << (e.annotation_path ? e.annotation_path->string() : "") << '\n';
}

std::vector<EvaluationRecord> EvaluationRun::records() const {
  std::vector<EvaluationRecord> out;
  for (const auto& o : outcomes)
    if (o.record) out.push_back(*o.record);
  return out;
}

std::size_t EvaluationRun::failures() const {
  return static_cast<std::size_t>(
      std::count_if(outcomes.begin(), outcomes.end(), [](const auto& o) { return !o.record; }));
}

EvaluationRun evaluate_dataset(std::span<const DatasetEntry> entries, const PithParams& params,
                               unsigned jobs) {
  EvaluationRun run;
  run.outcomes.resize(entries.size());
  PithParams inner = params;
  inner.jobs = 1;
  parallel_for(entries.size(), jobs, [&](std::size_t i) {
    const DatasetEntry& e = entries[i];
    ImageOutcome& out = run.outcomes[i];
    out.id = e.id;
    try {
      const auto t0 = std::chrono::steady_clock::now();
      FileDetection fd = detect_file(e.image_path, e.mask_path, inner);
      const auto t1 = std::chrono::steady_clock::now();
      EvaluationRecord r = evaluate_prediction(e, fd.pith_original, fd.image.original_mask);
      r.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      out.record = std::move(r);
    } catch (const std::exception& ex) {
      out.error = ex.what();
    }
  });
  return run;
}

void write_records_csv(const std::filesystem::path& path, const EvaluationRun& run) {
  auto out = open_out(path);
  out << "id,status,pred_x,pred_y,gt_x,gt_y,dist,diameter,norm_dist,ring_index,is_tp,runtime_ms,error\n";
  for (const auto& o : run.outcomes) {
    if (!o.record) {
      std::string err = o.error;
      std::replace(err.begin(), err.end(), '"', '\'');
      out << o.id << ",failed,,,,,,,,,,,\"" << err << "\"\n";
      continue;
    }
    const auto& r = *o.record;
    out << r.id << ",ok," << fmt(r.prediction.x) << ',' << fmt(r.prediction.y) << ',' << fmt(r.gt.x)
        << ',' << fmt(r.gt.y) << ',' << fmt(r.dist) << ',' << fmt(r.diameter) << ','
        << fmt(r.norm_dist) << ',' << (r.ring_index ? std::to_string(*r.ring_index) : "") << ','
        << (r.ring_index ? (r.is_tp ? "1" : "0") : "") << ',' << fmt(r.runtime_ms) << ",\n";
  }
}

void write_summary_csv(const std::filesystem::path& path, const EvaluationRun& run) {
  auto out = open_out(path);
  out << "images,evaluated,failed,"
         "dist_mean,dist_std,dist_median,dist_p90,dist_p95,dist_max,"
         "norm_dist_mean,norm_dist_std,norm_dist_median,norm_dist_p90,norm_dist_p95,norm_dist_max,"
         "tp,fp,precision_percent\n";
  const auto records = run.records();
  out << run.outcomes.size() << ',' << records.size() << ',' << run.failures() << ',';
  if (records.empty()) {
    out << ",,,,,,,,,,,,,,\n";
    return;
  }
  const Summary s = summarize(records);
  write_stats(out, s.dist);
  out << ',';
  write_stats(out, s.norm_dist);
  const bool has_rings = std::any_of(records.begin(), records.end(),
                                     [](const auto& r) { return r.ring_index.has_value(); });
  if (has_rings) {
    const auto p = precision(records);
    out << ',' << p.tp << ',' << p.fp << ',' << p.percent() << '\n';
  } else {
    out << ",,,\n";
  }
}

void write_summary_table_csv(const std::filesystem::path& path, const EvaluationRun& run) {
  auto out = open_out(path);
  out << "statistic,distance,normalized_distance\n";
  const auto records = run.records();
  if (records.empty()) return;
  const Summary s = summarize(records);
  const std::pair<const char*, double Statistics::*> rows[] = {
      {"Mean", &Statistics::mean}, {"Std", &Statistics::std},  {"Median", &Statistics::median},
      {"P90", &Statistics::p90},   {"P95", &Statistics::p95},  {"Max", &Statistics::max}};
  for (const auto& [name, field] : rows)
    out << name << ',' << fmt(s.dist.*field) << ',' << fmt(s.norm_dist.*field) << '\n';
}

void write_ring_histogram(const std::filesystem::path& path, const EvaluationRun& run) {
  std::map<int, int> counts;
  for (const auto& r : run.records())
    if (r.ring_index) ++counts[*r.ring_index];
  auto out = open_out(path);
  out << "ring_index,count\n";
  if (counts.empty()) return;
  for (int i = 0; i <= counts.rbegin()->first; ++i) out << i << ',' << counts[i] << '\n';
}

GridSpec GridSpec::reference_lattice() {
  GridSpec g;
  g.patch_sizes = {20, 30, 50, 100};
  g.overlaps = {0.0, 0.2, 0.4, 0.5};
  g.methods = {LoMethod::Pca, LoMethod::Peak};
  g.thresholds = {0.75, 0.85, 0.95};
  g.base.new_shape = 1000;
  g.base.fft_peak_th = 0.6;
  g.base.acc_type = 0;
  g.base.peak_blur_sigma = 3.0;
  return g;
}

std::vector<PithParams> GridSpec::configurations() const {
  std::vector<PithParams> out;
  for (int size : patch_sizes)
    for (double overlap : overlaps)
      for (LoMethod method : methods)
        for (double th : thresholds) {
          PithParams p = base;
          p.block_width_size = size;
          p.block_height_size = size;
          p.block_overlap = overlap;
          p.lo_method = method;
          p.lo_certainty_th = th;
          out.push_back(p);
        }
  return out;
}

std::vector<GridRow> grid_search(std::span<const DatasetEntry> entries, const GridSpec& grid,
                                 unsigned jobs, const GridWarning& warn) {
  if (entries.empty()) throw PithError(ErrorCode::NoRecords, "grid search needs a nonempty dataset");
  const std::vector<PithParams> configs = grid.configurations();
  for (const auto& c : configs) c.validate();

  // results[c][i]: record of configuration c on image i.
  std::vector<std::vector<std::optional<EvaluationRecord>>> results(
      configs.size(), std::vector<std::optional<EvaluationRecord>>(entries.size()));
  std::vector<std::string> messages;

  for (std::size_t i = 0; i < entries.size(); ++i) {
    const DatasetEntry& e = entries[i];
    PreparedImage image;
    double diameter = 0.0;
    try {
      image = load_and_prepare(e.image_path, e.mask_path, grid.base.new_shape);
      diameter = max_diameter(image.original_mask, e.gt_pith);
    } catch (const std::exception& ex) {
      if (warn) warn("image '" + e.id + "' skipped for every configuration: " + ex.what());
      continue;
    }

    std::vector<std::string> errors(configs.size());
    parallel_for(configs.size(), jobs, [&](std::size_t c) {
      PithParams p = configs[c];
      p.jobs = 1;
      try {
        const Detection d = detect(image, p);
        results[c][i] = make_record(e, image.scale.to_original(d.pith), diameter);
      } catch (const std::exception& ex) {
        errors[c] = ex.what();
      }
    });
    if (warn)
      for (std::size_t c = 0; c < configs.size(); ++c)
        if (!errors[c].empty())
          warn("configuration " + std::to_string(c) + " failed on '" + e.id + "': " + errors[c]);
  }

  std::vector<GridRow> rows;
  rows.reserve(configs.size());
  for (std::size_t c = 0; c < configs.size(); ++c) {
    GridRow row;
    row.params = configs[c];
    double sum = 0.0, sum_norm = 0.0;
    for (const auto& r : results[c]) {
      if (!r) {
        ++row.failed;
        continue;
      }
      ++row.evaluated;
      sum += r->dist;
      sum_norm += r->norm_dist;
    }
    if (row.evaluated > 0) {
      row.mean_dist = sum / static_cast<double>(row.evaluated);
      row.mean_norm_dist = sum_norm / static_cast<double>(row.evaluated);
    } else {
      row.mean_dist = row.mean_norm_dist = std::numeric_limits<double>::infinity();
    }
    rows.push_back(row);
  }
  std::stable_sort(rows.begin(), rows.end(), [](const GridRow& a, const GridRow& b) {
    if (a.mean_dist != b.mean_dist) return a.mean_dist < b.mean_dist;
    return a.mean_norm_dist < b.mean_norm_dist;
  });
  return rows;
}

void write_grid_csv(const std::filesystem::path& path, std::span<const GridRow> rows) {
  auto out = open_out(path);
  out << "rank,block_width_size,block_height_size,block_overlap,lo_method,lo_certainty_th,"
         "new_shape,fft_peak_th,acc_type,peak_blur_sigma,mean_dist,mean_norm_dist,evaluated,failed\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const auto& p = r.params;
    out << i + 1 << ',' << p.block_width_size << ',' << p.block_height_size << ','
        << fmt(p.block_overlap) << ',' << to_string(p.lo_method) << ',' << fmt(p.lo_certainty_th)
        << ',' << p.new_shape << ',' << fmt(p.fft_peak_th) << ',' << p.acc_type << ','
        << fmt(p.peak_blur_sigma) << ',' << fmt(r.mean_dist) << ',' << fmt(r.mean_norm_dist) << ','
        << r.evaluated << ',' << r.failed << '\n';
  }
}

}  // namespace pith::eval
