#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pith/eval.hpp"
#include "pith/pipeline.hpp"
#include "pith/render.hpp"
#include "pith/synth.hpp"

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr int kPipelineFailure = 2;

const std::vector<std::string> kMethods{"peak", "lsr", "wlsr", "pca"};
const std::vector<std::string> kWindows{"hann", "none"};

pith::LoMethod method_of(const std::string& name) { return *pith::parse_lo_method(name); }

// Registers the detector flags on `app`, writing straight into `p`.
void add_detector_flags(CLI::App* app, pith::PithParams& p) {
  app->add_option("--new_shape", p.new_shape, "Side of the square working image, pixels")
      ->capture_default_str();
  app->add_option("--block_width_size", p.block_width_size, "Patch width, pixels")
      ->capture_default_str();
  app->add_option("--block_height_size", p.block_height_size, "Patch height, pixels")
      ->capture_default_str();
  app->add_option("--block_overlap", p.block_overlap, "Patch overlap fraction in [0, 1)")
      ->capture_default_str();
  app->add_option_function<std::string>(
         "--lo_method", [&p](const std::string& v) { p.lo_method = method_of(v); },
         "Local orientation estimator")
      ->check(CLI::IsMember(kMethods, CLI::ignore_case))
      ->default_str("pca");
  app->add_option("--lo_certainty_th", p.lo_certainty_th, "Keep estimates with certainty above this")
      ->capture_default_str();
  app->add_option("--fft_peak_th", p.fft_peak_th, "Spectrum threshold relative to the band maximum")
      ->capture_default_str();
  app->add_option_function<std::string>(
         "--fft_window",
         [&p](const std::string& v) { p.window = *pith::parse_spectrum_window(v); },
         "Window applied before the FFT")
      ->check(CLI::IsMember(kWindows, CLI::ignore_case))
      ->default_str("hann");
  app->add_option("--peak_blur_sigma", p.peak_blur_sigma, "Gaussian sigma for the accumulator")
      ->capture_default_str();
  app->add_option("--acc_type", p.acc_type, "0 = pass-through, 1 = intersection")
      ->check(CLI::IsMember({0, 1}))
      ->capture_default_str();
  app->add_option("--jobs", p.jobs, "Worker threads (0 = all cores)")->capture_default_str();
}

ordered_json params_json(const pith::PithParams& p) {
  return {{"new_shape", p.new_shape},
          {"block_width_size", p.block_width_size},
          {"block_height_size", p.block_height_size},
          {"block_overlap", p.block_overlap},
          {"lo_method", std::string(pith::to_string(p.lo_method))},
          {"lo_certainty_th", p.lo_certainty_th},
          {"fft_peak_th", p.fft_peak_th},
          {"fft_window", std::string(pith::to_string(p.window))},
          {"peak_blur_sigma", p.peak_blur_sigma},
          {"acc_type", p.acc_type}};
}

void write_json(const fs::path& path, const ordered_json& doc) {
  std::ofstream out(path);
  if (!out) throw pith::PithError(pith::ErrorCode::InvalidArgument, "cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

int report_error(const std::optional<fs::path>& dir, const std::string& code,
                 const std::string& message) {
  ordered_json err{{"error", {{"code", code}, {"message", message}}}};
  if (dir) {
    try {
      fs::create_directories(*dir);
      write_json(*dir / "error.json", err);
    } catch (const std::exception&) {
    }
  }
  std::cerr << err.dump() << '\n';
  return kPipelineFailure;
}

template <typename Fn>
int guarded(const std::optional<fs::path>& dir, Fn&& fn) {
  try {
    return fn();
  } catch (const pith::PithError& e) {
    return report_error(dir, std::string(pith::to_string(e.code())), e.what());
  } catch (const std::exception& e) {
    return report_error(dir, "internal", e.what());
  }
}

struct DetectArgs {
  std::string filename;
  std::string output_dir = "output";
  std::string mask;
  bool debug = false;
};

int run_detect(const DetectArgs& a, const pith::PithParams& params) {
  const fs::path out_dir = a.output_dir;
  return guarded(out_dir, [&] {
    fs::create_directories(out_dir);
    std::optional<fs::path> mask;
    if (!a.mask.empty()) mask = a.mask;
    const auto t0 = std::chrono::steady_clock::now();
    const pith::FileDetection fd = pith::detect_file(a.filename, mask, params);
    const auto t1 = std::chrono::steady_clock::now();

    ordered_json doc{{"image_id", fs::path(a.filename).stem().string()},
                     {"image", a.filename},
                     {"x", fd.pith_original.x},
                     {"y", fd.pith_original.y},
                     {"x_resized", fd.detection.pith.x},
                     {"y_resized", fd.detection.pith.y},
                     {"lines", fd.detection.estimates.size()},
                     {"parameters", params_json(params)},
                     {"runtime_ms", std::chrono::duration<double, std::milli>(t1 - t0).count()}};
    write_json(out_dir / "pith.json", doc);
    if (a.debug) pith::render::write_debug_images(out_dir, fd, params);
    std::cout << doc.dump() << '\n';
    return 0;
  });
}

struct EvalArgs {
  std::string manifest;
  std::string output_dir = "eval_output";
};

int run_eval(const EvalArgs& a, const pith::PithParams& params) {
  const fs::path out_dir = a.output_dir;
  return guarded(out_dir, [&] {
    params.validate();
    const auto entries = pith::eval::load_manifest(a.manifest);
    const auto run = pith::eval::evaluate_dataset(entries, params, params.jobs);
    fs::create_directories(out_dir);
    pith::eval::write_records_csv(out_dir / "records.csv", run);
    pith::eval::write_summary_csv(out_dir / "summary.csv", run);
    pith::eval::write_summary_table_csv(out_dir / "summary_table.csv", run);
    pith::eval::write_ring_histogram(out_dir / "ring_histogram.csv", run);
    for (const auto& o : run.outcomes)
      if (!o.record) std::cerr << "warning: " << o.id << " failed: " << o.error << '\n';
    const auto records = run.records();
    std::cout << "evaluated " << records.size() << " of " << run.outcomes.size() << " images\n";
    if (records.empty()) return kPipelineFailure;
    const auto s = pith::eval::summarize(records);
    std::cout << "mean dist " << s.dist.mean << " px, mean norm_dist " << s.norm_dist.mean << '\n';
    return 0;
  });
}

struct GridArgs {
  std::string manifest;
  std::string output_dir = "grid_output";
  std::vector<int> patch_sizes;
  std::vector<double> overlaps;
  std::vector<std::string> methods;
  std::vector<double> thresholds;
};

int run_grid(const GridArgs& a, pith::eval::GridSpec grid) {
  const fs::path out_dir = a.output_dir;
  return guarded(out_dir, [&] {
    if (!a.patch_sizes.empty()) grid.patch_sizes = a.patch_sizes;
    if (!a.overlaps.empty()) grid.overlaps = a.overlaps;
    if (!a.methods.empty()) {
      grid.methods.clear();
      for (const auto& m : a.methods) grid.methods.push_back(method_of(m));
    }
    if (!a.thresholds.empty()) grid.thresholds = a.thresholds;
    const auto entries = pith::eval::load_manifest(a.manifest);
    const auto rows = pith::eval::grid_search(entries, grid, grid.base.jobs,
                                              [](const std::string& m) { std::cerr << "warning: " << m << '\n'; });
    fs::create_directories(out_dir);
    pith::eval::write_grid_csv(out_dir / "grid_ranking.csv", rows);
    const auto& best = rows.front();
    std::cout << rows.size() << " configurations; best: block " << best.params.block_width_size
              << " overlap " << best.params.block_overlap << " method "
              << pith::to_string(best.params.lo_method) << " threshold "
              << best.params.lo_certainty_th << " mean dist " << best.mean_dist << " px\n";
    return 0;
  });
}

struct SynthArgs {
  std::string output_dir = "synthetic";
  int count = 2;
  int size = 1000;
  std::uint64_t seed = 0;
};

int run_synth(const SynthArgs& a) {
  const fs::path out_dir = a.output_dir;
  return guarded(out_dir, [&] {
    std::vector<pith::DatasetEntry> entries;
    for (int i = 0; i < a.count; ++i) {
      const auto spec = pith::synth::random_spiderweb_spec(a.seed + static_cast<std::uint64_t>(i), a.size);
      const auto c = pith::synth::make_spiderweb(spec);
      auto e = pith::synth::write_case(c, out_dir / spec.id);
      e.image_path = fs::relative(e.image_path, out_dir);
      e.mask_path = fs::relative(*e.mask_path, out_dir);
      e.annotation_path = fs::relative(*e.annotation_path, out_dir);
      entries.push_back(std::move(e));
    }
    pith::eval::write_manifest_csv(out_dir / "manifest.csv", entries);
    std::cout << (out_dir / "manifest.csv").string() << '\n';
    return 0;
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pith detection on tree cross-section images"};
  app.require_subcommand(1);

  pith::PithParams detect_params;
  DetectArgs detect_args;
  auto* detect = app.add_subcommand("detect", "Detect the pith of one image");
  detect->add_option("--filename", detect_args.filename, "Input image")->required()->check(CLI::ExistingFile);
  detect->add_option("--output_dir", detect_args.output_dir, "Directory for pith.json")->capture_default_str();
  detect->add_option("--mask", detect_args.mask, "Foreground mask image (nonzero = wood)")->check(CLI::ExistingFile);
  detect->add_flag("--debug", detect_args.debug, "Also write the intermediate PNGs");
  add_detector_flags(detect, detect_params);

  pith::PithParams eval_params;
  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Evaluate the detector over a dataset manifest");
  eval->add_option("--manifest", eval_args.manifest, "CSV or JSON manifest")->required()->check(CLI::ExistingFile);
  eval->add_option("--output_dir", eval_args.output_dir, "Directory for the reports")->capture_default_str();
  add_detector_flags(eval, eval_params);

  pith::eval::GridSpec grid = pith::eval::GridSpec::reference_lattice();
  GridArgs grid_args;
  auto* gridcmd = app.add_subcommand("grid", "Grid search over patch size, overlap, method and threshold");
  gridcmd->add_option("--manifest", grid_args.manifest, "CSV or JSON manifest")->required()->check(CLI::ExistingFile);
  gridcmd->add_option("--output_dir", grid_args.output_dir, "Directory for grid_ranking.csv")->capture_default_str();
  gridcmd->add_option("--patch_sizes", grid_args.patch_sizes, "Square patch sides")->delimiter(',');
  gridcmd->add_option("--overlaps", grid_args.overlaps, "Overlap fractions")->delimiter(',');
  gridcmd->add_option("--methods", grid_args.methods, "Estimators")
      ->delimiter(',')
      ->check(CLI::IsMember(kMethods, CLI::ignore_case));
  gridcmd->add_option("--thresholds", grid_args.thresholds, "Certainty thresholds")->delimiter(',');
  add_detector_flags(gridcmd, grid.base);

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Write synthetic spider-web cases and a manifest");
  synth->add_option("--output_dir", synth_args.output_dir, "Destination directory")->capture_default_str();
  synth->add_option("--count", synth_args.count, "Number of images")->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--size", synth_args.size, "Image side, pixels")->check(CLI::Range(64, 8192))->capture_default_str();
  synth->add_option("--seed", synth_args.seed, "Seed of the first image")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (*detect) return run_detect(detect_args, detect_params);
  if (*eval) return run_eval(eval_args, eval_params);
  if (*gridcmd) return run_grid(grid_args, grid);
  return run_synth(synth_args);
}
