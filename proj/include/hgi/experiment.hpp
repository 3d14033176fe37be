#pragma once

// JSON-configured experiment runner: generate or load an object, acquire
// bucket signals, reconstruct, score and export.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hgi/measurement.hpp"
#include "hgi/metrics.hpp"
#include "hgi/scenes.hpp"
#include "hgi/simulator.hpp"

namespace hgi {

enum class AcquisitionPath { Physical, Ideal };

struct ObjectSource {
  std::string generator;  // "windmill", "stripes", "separable", or empty for a file
  nlohmann::json params = nlohmann::json::object();
  std::filesystem::path file;
  ValueRange range = ValueRange::Reflectance;
};

struct MetricsConfig {
  std::optional<Roi> roi;
  std::optional<double> peak;
  double rel_tol = kDefaultRelTol;
};

struct OutputsConfig {
  std::string image = "reconstruction.pgm";  // a full-precision .csv is written beside it
  std::string buckets = "buckets.csv";       // sidecar: <buckets>.json
  std::string report = "report.json";
};

struct ExperimentConfig {
  std::string name;
  ObjectSource object;
  HybridSpec hybrid;
  AcquisitionPath acquisition = AcquisitionPath::Physical;
  NoiseModel noise;
  MetricsConfig metrics;
  OutputsConfig outputs;
};

/// Round-half-up: floor(rate * order + 0.5), so 0.906 gives 29 of 32 and 58 of 64.
Index resolve_kept_rows(double rate, Index order);

/// Validates and converts a JSON config. Failures throw ConfigError naming
/// the offending field.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Canonical form; parse_config(to_json(c)) reproduces c.
nlohmann::json to_json(const ExperimentConfig& config);

nlohmann::json hybrid_to_json(const HybridSpec& spec);
HybridSpec hybrid_from_json(const nlohmann::json& j, const std::string& path = "hybrid");

/// Parses "D-C" style names for the two-matrix case (D, C, H, F, I).
HybridSpec hybrid_from_name(const std::string& name, Index rows, Index cols, double left_rate = 1.0,
                            double right_rate = 1.0);

SceneImage make_object(const ObjectSource& source);

struct RunOptions {
  unsigned workers = 1;
  bool write_outputs = true;
};

struct RunResult {
  std::string set_name;
  double sampling_rate = 1.0;
  QualityReport report;
  Significance significance;
  MatrixX<double> buckets;  // |Y| for the ideal complex path
  MatrixX<double> image;    // real part of the reconstruction
  std::string summary;
};

/// Runs the whole pipeline. Output paths in the config are resolved against
/// out_dir.
RunResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                         const RunOptions& options = {});

/// Expands a sweep document into individual configs. Accepts either
/// {"runs": [config, ...]} or {"base": config, "grid": {"sets": [...],
/// "sampling_rates": [...], "sigmas": [...], "seeds": [...]}}; grid axes
/// nest in that order with seeds innermost.
std::vector<ExperimentConfig> expand_sweep(const nlohmann::json& j);

struct SweepRow {
  std::size_t index = 0;
  std::string set_name;
  double sampling_rate = 0.0;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  QualityReport report;
  std::size_t significant = 0;
  std::string status = "ok";  // error message when the run failed
};

/// Runs every config (independently, possibly in parallel) without writing
/// per-run artifacts. Rows come back in config order.
std::vector<SweepRow> sweep(const std::vector<ExperimentConfig>& configs, unsigned workers = 1);
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// The six two-matrix sets in the order D-C, D-H, C-D, C-H, H-D, H-C.
std::vector<std::pair<TransformKind, TransformKind>> two_matrix_sets();

struct StripeSearchResult {
  StripeSpec spec;
  std::vector<std::pair<std::string, std::size_t>> counts;  // set name -> significant buckets
};

/// Enumerates stripe layouts of the given size (orientation, period,
/// stagger offset, band size) and returns the first for which every set in
/// `single_peak_sets` gives exactly one significant noiseless bucket, along
/// with the counts for all six two-matrix sets.
std::optional<StripeSearchResult> find_single_peak_stripes(
    Index rows, Index cols, const std::vector<std::pair<TransformKind, TransformKind>>& single_peak_sets,
    double rel_tol = kDefaultRelTol);

}  // namespace hgi
