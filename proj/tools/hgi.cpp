// Command-line front end for the hybrid-transform ghost imaging toolkit.
//
// Exit codes: 0 success, 1 configuration error, 2 I/O error, 3 numeric error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "hgi/errors.hpp"
#include "hgi/experiment.hpp"
#include "hgi/io.hpp"
#include "hgi/metrics.hpp"
#include "hgi/reconstruct.hpp"
#include "hgi/scenes.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GlobalFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<double> sigma;
  std::string out = ".";
  bool quiet = false;
  unsigned workers = 1;
};

hgi::ExperimentConfig load_with_overrides(const GlobalFlags& g) {
  if (g.config.empty()) throw hgi::ConfigError("--config", "a config file is required");
  json j;
  try {
    j = json::parse(hgi::io::read_file(g.config));
  } catch (const json::parse_error& e) {
    throw hgi::ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw hgi::ConfigError("config", "expected an object");
  if (g.seed) j["noise"]["seed"] = *g.seed;
  if (g.sigma) j["noise"]["sigma"] = *g.sigma;
  return hgi::parse_config(j);
}

void say(const GlobalFlags& g, const std::string& line) {
  if (!g.quiet) std::cout << line << "\n";
}

int cmd_gen_object(const GlobalFlags& g, const std::string& output) {
  const hgi::ExperimentConfig c = load_with_overrides(g);
  const hgi::SceneImage object = hgi::make_object(c.object);
  fs::path path = fs::path(g.out) / output;
  hgi::save_image(object, path);
  hgi::io::write_csv(fs::path(path).replace_extension(".csv"), object.values());
  say(g, "wrote " + path.string() + " (" + std::to_string(object.rows()) + "x" +
             std::to_string(object.cols()) + ", " + std::string(hgi::range_name(object.range())) + ")");
  return 0;
}

int cmd_acquire(const GlobalFlags& g) {
  const hgi::ExperimentConfig c = load_with_overrides(g);
  if (c.acquisition != hgi::AcquisitionPath::Physical) {
    throw hgi::ConfigError("acquisition", "the acquire subcommand simulates the physical path only");
  }
  const hgi::SceneImage object = hgi::make_object(c.object);
  const hgi::BucketSignals y = hgi::acquire(c.hybrid, object, c.noise, {g.workers});
  const fs::path path = fs::path(g.out) / c.outputs.buckets;
  hgi::io::write_csv(path, y.values);
  const json sidecar = {{"spec", hgi::hybrid_to_json(c.hybrid)},
                        {"sigma", y.noise_sigma},
                        {"seed", y.seed},
                        {"complex", false},
                        {"range", std::string(hgi::range_name(object.range()))},
                        {"rows", object.rows()},
                        {"cols", object.cols()},
                        {"config", hgi::to_json(c)}};
  hgi::io::write_file(path.string() + ".json", sidecar.dump(2) + "\n");
  say(g, "wrote " + path.string() + " (" + std::to_string(y.values.rows()) + "x" +
             std::to_string(y.values.cols()) + " buckets, set " + c.hybrid.name() + ")");
  return 0;
}

int cmd_reconstruct(const GlobalFlags& g, const std::string& buckets, const std::string& output) {
  const fs::path bucket_path(buckets);
  json sidecar;
  try {
    sidecar = json::parse(hgi::io::read_file(bucket_path.string() + ".json"));
  } catch (const json::parse_error& e) {
    throw hgi::ConfigError("sidecar", std::string("invalid JSON: ") + e.what());
  }
  if (sidecar.value("complex", false)) {
    throw hgi::ConfigError("sidecar.complex", "complex bucket files are reconstructed by the run subcommand");
  }
  const hgi::HybridSpec spec = hgi::hybrid_from_json(sidecar.at("spec"), "sidecar.spec");
  hgi::ValueRange range = hgi::ValueRange::Reflectance;
  try {
    range = hgi::parse_range(sidecar.value("range", std::string("reflectance")));
  } catch (const hgi::ParameterError& e) {
    throw hgi::ConfigError("sidecar.range", e.what());
  }
  const hgi::MatrixX<double> y = hgi::io::read_csv(bucket_path);
  const auto result = hgi::reconstruct_chain<double>(spec, y);
  const fs::path path = fs::path(g.out) / output;
  hgi::save_image(hgi::clip_to_range(result.image, range), path);
  if (path.extension() != ".csv") {
    hgi::io::write_csv(fs::path(path).replace_extension(".csv"), result.image);
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", result.residual_norm);
  say(g, "wrote " + path.string() + " (residual " + buf + ")");
  return 0;
}

int cmd_metrics(const GlobalFlags& g, const std::string& reference, const std::string& test,
                const std::string& range_name, std::optional<double> peak,
                const std::vector<long>& roi, double rel_tol, const std::string& buckets) {
  const hgi::ValueRange range = hgi::parse_range(range_name);
  const hgi::SceneImage ref = hgi::load_image(reference, range);
  const hgi::MatrixX<double> img =
      fs::path(test).extension() == ".csv" ? hgi::io::read_csv(test) : hgi::load_image(test, range).values();
  std::optional<hgi::Roi> region;
  if (!roi.empty()) {
    if (roi.size() != 4) throw hgi::ConfigError("--roi", "expected top left height width");
    region = hgi::Roi{roi[0], roi[1], roi[2], roi[3]};
  }
  const hgi::QualityReport report =
      hgi::quality_report(ref.values(), img, peak.value_or(hgi::range_width(range)), region);
  json out = hgi::to_json(report);
  if (!buckets.empty()) {
    out["significant"] = hgi::count_significant(hgi::io::read_csv(buckets), rel_tol).count;
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_run(const GlobalFlags& g) {
  const hgi::ExperimentConfig c = load_with_overrides(g);
  const hgi::RunResult r = hgi::run_experiment(c, g.out, {g.workers, true});
  say(g, r.summary);
  return 0;
}

int cmd_sweep(const GlobalFlags& g, const std::string& output) {
  if (g.config.empty()) throw hgi::ConfigError("--config", "a sweep file is required");
  json j;
  try {
    j = json::parse(hgi::io::read_file(g.config));
  } catch (const json::parse_error& e) {
    throw hgi::ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  auto configs = hgi::expand_sweep(j);
  for (auto& c : configs) {
    if (g.seed) c.noise.seed = *g.seed;
    if (g.sigma) c.noise.sigma = *g.sigma;
  }
  const std::string table = hgi::sweep_csv(hgi::sweep(configs, g.workers));
  hgi::io::write_file(fs::path(g.out) / output, table);
  if (!g.quiet) std::cout << table;
  return 0;
}

int cmd_footprint(long rows, long cols) {
  const hgi::Footprint f = hgi::footprint_report(rows, cols);
  std::cout << "one_d_matrix_entries " << f.one_d_matrix_entries << "\n"
            << "two_d_left_entries " << f.two_d_left_entries << "\n"
            << "two_d_right_entries " << f.two_d_right_entries << "\n";
  return 0;
}

int cmd_demo_stripes(const GlobalFlags& g, long rows, long cols) {
  if (!g.config.empty()) {
    // Counts for a user-supplied stripe object across the six two-matrix sets.
    const hgi::ExperimentConfig c = load_with_overrides(g);
    const hgi::SceneImage x = hgi::make_object(c.object);
    for (const auto& [l, r] : hgi::two_matrix_sets()) {
      const auto spec = hgi::HybridSpec::pair(l, x.rows(), r, x.cols());
      const auto y = hgi::acquire(spec, x, c.noise, {g.workers});
      std::cout << spec.name() << " significant=" << hgi::count_significant(y.values, c.metrics.rel_tol).count
                << "\n";
    }
    return 0;
  }
  using K = hgi::TransformKind;
  const auto found = hgi::find_single_peak_stripes(rows, cols, {{K::Hadamard, K::DCT}, {K::Haar, K::Hadamard}, {K::Haar, K::DCT}});
  if (!found) {
    std::cout << "no stripe layout of size " << rows << "x" << cols
              << " gives a single bucket for D-C, H-D and H-C\n";
    return 3;
  }
  const hgi::StripeSpec& s = found->spec;
  std::cout << "stripes " << rows << "x" << cols << " period=" << s.stripe_period << " orientation="
            << (s.orientation == hgi::StripeOrientation::Horizontal ? "horizontal" : "vertical")
            << " stagger_offset=" << s.stagger_offset << " band_size=" << s.band_size << "\n";
  for (const auto& [name, count] : found->counts) std::cout << name << " significant=" << count << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Computational ghost imaging with hybrid Kronecker transforms"};
  app.require_subcommand(1);
  GlobalFlags g;
  app.add_option("--config", g.config, "Experiment or sweep JSON file");
  app.add_option("--seed", g.seed, "Override the noise seed");
  app.add_option("--sigma", g.sigma, "Override the noise standard deviation")->check(CLI::NonNegativeNumber);
  app.add_option("--out", g.out, "Output directory");
  app.add_flag("--quiet", g.quiet, "Suppress summaries");
  app.add_option("--workers", g.workers, "Worker threads")->check(CLI::Range(1u, 256u));
  // Accept the global flags after the subcommand name as well.
  app.fallthrough();

  std::string object_out = "object.pgm";
  auto* gen = app.add_subcommand("gen-object", "Generate or load the configured object");
  gen->add_option("--output", object_out, "File name inside --out (.pgm or .csv)");

  auto* acq = app.add_subcommand("acquire", "Simulate bucket acquisition and write Y");

  std::string buckets_in, image_out = "reconstruction.pgm";
  auto* rec = app.add_subcommand("reconstruct", "Reconstruct an image from a bucket CSV + sidecar");
  rec->add_option("--buckets", buckets_in, "Bucket CSV (its .json sidecar must sit beside it)")->required();
  rec->add_option("--output", image_out, "File name inside --out (.pgm or .csv)");

  std::string ref_path, test_path, range = "reflectance", buckets_metric;
  std::optional<double> peak;
  std::vector<long> roi;
  double rel_tol = hgi::kDefaultRelTol;
  auto* met = app.add_subcommand("metrics", "PSNR/SSIM between two images");
  met->add_option("--reference", ref_path)->required();
  met->add_option("--test", test_path)->required();
  met->add_option("--range", range, "reflectance or signed");
  met->add_option("--peak", peak);
  met->add_option("--roi", roi, "top left height width")->expected(4);
  met->add_option("--buckets", buckets_metric, "Also count significant buckets in this CSV");
  met->add_option("--rel-tol", rel_tol);

  auto* run = app.add_subcommand("run", "Full pipeline: object, acquire, reconstruct, score, export");

  std::string sweep_out = "sweep.csv";
  auto* swp = app.add_subcommand("sweep", "Run a sweep file and write a CSV table");
  swp->add_option("--output", sweep_out, "File name inside --out");

  long fp_rows = 32, fp_cols = 64;
  auto* fp = app.add_subcommand("footprint", "Matrix element counts, 1D versus 2D");
  fp->add_option("--rows", fp_rows, "M")->check(CLI::PositiveNumber);
  fp->add_option("--cols", fp_cols, "N")->check(CLI::PositiveNumber);

  long demo_rows = 32, demo_cols = 16;
  auto* demo = app.add_subcommand("demo-stripes", "Significant bucket counts for a stripe object");
  demo->add_option("--rows", demo_rows)->check(CLI::PositiveNumber);
  demo->add_option("--cols", demo_cols)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*gen) return cmd_gen_object(g, object_out);
    if (*acq) return cmd_acquire(g);
    if (*rec) return cmd_reconstruct(g, buckets_in, image_out);
    if (*met) return cmd_metrics(g, ref_path, test_path, range, peak, roi, rel_tol, buckets_metric);
    if (*run) return cmd_run(g);
    if (*swp) return cmd_sweep(g, sweep_out);
    if (*fp) return cmd_footprint(fp_rows, fp_cols);
    if (*demo) return cmd_demo_stripes(g, demo_rows, demo_cols);
  } catch (const hgi::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const hgi::ParameterError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const hgi::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 2;
  } catch (const hgi::Error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
