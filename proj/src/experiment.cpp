#include "hgi/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <thread>

#include "hgi/errors.hpp"
#include "hgi/io.hpp"
#include "hgi/reconstruct.hpp"

namespace hgi {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

const json* find(const json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
}

std::int64_t get_int(const json& j, const char* key, const std::string& path,
                     std::optional<std::int64_t> fallback = {}) {
  const json* v = find(j, key);
  if (!v) {
    if (fallback) return *fallback;
    throw ConfigError(join(path, key), "required integer is missing");
  }
  if (!v->is_number_integer()) throw ConfigError(join(path, key), "expected an integer");
  return v->get<std::int64_t>();
}

double get_number(const json& j, const char* key, const std::string& path,
                  std::optional<double> fallback = {}) {
  const json* v = find(j, key);
  if (!v) {
    if (fallback) return *fallback;
    throw ConfigError(join(path, key), "required number is missing");
  }
  if (!v->is_number()) throw ConfigError(join(path, key), "expected a number");
  const double d = v->get<double>();
  if (!std::isfinite(d)) throw ConfigError(join(path, key), "expected a finite number");
  return d;
}

std::string get_string(const json& j, const char* key, const std::string& path,
                       std::optional<std::string> fallback = {}) {
  const json* v = find(j, key);
  if (!v) {
    if (fallback) return *fallback;
    throw ConfigError(join(path, key), "required string is missing");
  }
  if (!v->is_string()) throw ConfigError(join(path, key), "expected a string");
  return v->get<std::string>();
}

bool get_bool(const json& j, const char* key, const std::string& path, bool fallback) {
  const json* v = find(j, key);
  if (!v) return fallback;
  if (!v->is_boolean()) throw ConfigError(join(path, key), "expected a boolean");
  return v->get<bool>();
}

TransformKind kind_at(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a transform kind string");
  try {
    return parse_kind(v.get<std::string>());
  } catch (const ParameterError& e) {
    throw ConfigError(path, e.what());
  }
}

std::vector<ChainEntry> side_from_json(const json& j, const std::string& path) {
  require_object(j, path);
  std::vector<TransformKind> kinds;
  if (const json* k = find(j, "kinds")) {
    if (!k->is_array() || k->empty()) throw ConfigError(join(path, "kinds"), "expected a non-empty array");
    for (std::size_t i = 0; i < k->size(); ++i) {
      kinds.push_back(kind_at((*k)[i], join(path, "kinds") + "[" + std::to_string(i) + "]"));
    }
  } else if (const json* k1 = find(j, "kind")) {
    kinds.push_back(kind_at(*k1, join(path, "kind")));
  } else {
    throw ConfigError(join(path, "kind"), "required transform kind is missing");
  }
  const std::int64_t order = get_int(j, "order", path);
  if (order < 1) throw ConfigError(join(path, "order"), "must be >= 1");

  Index kept = order;
  const bool has_rows = find(j, "kept_rows") != nullptr;
  const bool has_rate = find(j, "sampling_rate") != nullptr;
  if (has_rows && has_rate) {
    throw ConfigError(path, "give either kept_rows or sampling_rate, not both");
  }
  if (has_rows) {
    kept = get_int(j, "kept_rows", path);
  } else if (has_rate) {
    const double rate = get_number(j, "sampling_rate", path);
    if (!(rate > 0.0) || rate > 1.0) throw ConfigError(join(path, "sampling_rate"), "must lie in (0, 1]");
    kept = resolve_kept_rows(rate, order);
  }
  if (kept < 1 || kept > order) {
    throw ConfigError(join(path, has_rate ? "sampling_rate" : "kept_rows"),
                      "kept rows must lie in [1, " + std::to_string(order) + "]");
  }

  std::vector<ChainEntry> chain;
  for (TransformKind kind : kinds) chain.push_back({kind, order, order});
  chain.back().kept_rows = kept;
  return chain;
}

json side_to_json(const std::vector<ChainEntry>& chain) {
  json kinds = json::array();
  for (const ChainEntry& e : chain) kinds.push_back(std::string(kind_name(e.kind)));
  return {{"kinds", kinds}, {"order", chain.front().order}, {"kept_rows", chain.back().kept_rows}};
}

ObjectSource object_from_json(const json& j, const std::string& path) {
  require_object(j, path);
  ObjectSource src;
  if (find(j, "file")) {
    src.file = get_string(j, "file", path);
    try {
      src.range = parse_range(get_string(j, "range", path, std::string("reflectance")));
    } catch (const ParameterError& e) {
      throw ConfigError(join(path, "range"), e.what());
    }
    return src;
  }
  src.generator = get_string(j, "generator", path);
  src.params = j;
  src.params.erase("generator");
  if (src.generator == "windmill") {
    src.range = ValueRange::Reflectance;
    get_int(j, "rows", path);
    get_int(j, "cols", path);
    get_int(j, "blades", path, 4);
  } else if (src.generator == "stripes") {
    src.range = ValueRange::Signed;
    get_int(j, "rows", path);
    get_int(j, "cols", path);
    get_int(j, "period", path);
    const std::string o = get_string(j, "orientation", path, std::string("horizontal"));
    if (o != "horizontal" && o != "vertical") {
      throw ConfigError(join(path, "orientation"), "expected horizontal or vertical");
    }
    get_int(j, "stagger_offset", path, 0);
    get_int(j, "band_size", path, 1);
  } else if (src.generator == "separable") {
    src.range = ValueRange::Signed;
    kind_at(j.value("left", json()), join(path, "left"));
    kind_at(j.value("right", json()), join(path, "right"));
    get_int(j, "rows", path);
    get_int(j, "cols", path);
    get_int(j, "m", path);
    get_int(j, "n", path);
    get_bool(j, "binarize", path, false);
  } else {
    throw ConfigError(join(path, "generator"),
                      "unknown generator '" + src.generator + "' (expected windmill, stripes or separable)");
  }
  return src;
}

json object_to_json(const ObjectSource& src) {
  if (src.generator.empty()) return {{"file", src.file.string()}, {"range", std::string(range_name(src.range))}};
  json j = src.params;
  j["generator"] = src.generator;
  return j;
}

std::string format_double(double v, const char* fmt) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

Index resolve_kept_rows(double rate, Index order) {
  if (!(rate > 0.0) || rate > 1.0) throw ParameterError("sampling rate must lie in (0, 1]");
  if (order < 1) throw ParameterError("order must be >= 1");
  return std::max<Index>(1, static_cast<Index>(std::floor(rate * static_cast<double>(order) + 0.5)));
}

nlohmann::json hybrid_to_json(const HybridSpec& spec) {
  return {{"left", side_to_json(spec.left_chain)}, {"right", side_to_json(spec.right_chain)}};
}

HybridSpec hybrid_from_json(const nlohmann::json& j, const std::string& path) {
  require_object(j, path);
  if (!find(j, "left")) throw ConfigError(join(path, "left"), "required side is missing");
  if (!find(j, "right")) throw ConfigError(join(path, "right"), "required side is missing");
  HybridSpec spec;
  spec.left_chain = side_from_json(j["left"], join(path, "left"));
  spec.right_chain = side_from_json(j["right"], join(path, "right"));
  try {
    validate(spec);
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
  return spec;
}

HybridSpec hybrid_from_name(const std::string& name, Index rows, Index cols, double left_rate,
                            double right_rate) {
  const auto dash = name.find('-');
  if (dash == std::string::npos || dash == 0 || dash + 1 == name.size()) {
    throw ParameterError("set name '" + name + "' is not of the form L-R");
  }
  auto letter_kind = [&](char c) {
    for (auto kind : {TransformKind::Hadamard, TransformKind::DCT, TransformKind::Haar,
                      TransformKind::DFT, TransformKind::Identity}) {
      if (kind_letter(kind) == c) return kind;
    }
    throw ParameterError("unknown transform letter '" + std::string(1, c) + "' in '" + name + "'");
  };
  auto side = [&](const std::string& letters, Index order, double rate) {
    std::vector<ChainEntry> chain;
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
      chain.push_back({letter_kind(*it), order, order});
    }
    chain.back().kept_rows = resolve_kept_rows(rate, order);
    return chain;
  };
  HybridSpec spec;
  spec.left_chain = side(name.substr(0, dash), rows, left_rate);
  spec.right_chain = side(name.substr(dash + 1), cols, right_rate);
  validate(spec);
  return spec;
}

ExperimentConfig parse_config(const nlohmann::json& j) {
  require_object(j, "config");
  ExperimentConfig c;
  c.name = get_string(j, "name", "", std::string());

  if (!find(j, "object")) throw ConfigError("object", "required section is missing");
  c.object = object_from_json(j["object"], "object");
  if (!find(j, "hybrid")) throw ConfigError("hybrid", "required section is missing");
  c.hybrid = hybrid_from_json(j["hybrid"], "hybrid");

  const std::string path = get_string(j, "acquisition", "", std::string("physical"));
  if (path == "physical") {
    c.acquisition = AcquisitionPath::Physical;
  } else if (path == "ideal") {
    c.acquisition = AcquisitionPath::Ideal;
  } else {
    throw ConfigError("acquisition", "expected physical or ideal");
  }

  if (const json* n = find(j, "noise")) {
    require_object(*n, "noise");
    c.noise.sigma = get_number(*n, "sigma", "noise", 0.0);
    if (c.noise.sigma < 0.0) throw ConfigError("noise.sigma", "must be >= 0");
    if (const json* s = find(*n, "seed")) {
      if (!s->is_number_unsigned() && !(s->is_number_integer() && s->get<std::int64_t>() >= 0)) {
        throw ConfigError("noise.seed", "expected a non-negative integer");
      }
      c.noise.seed = s->get<std::uint64_t>();
    }
  }

  if (const json* m = find(j, "metrics")) {
    require_object(*m, "metrics");
    if (const json* r = find(*m, "roi")) {
      require_object(*r, "metrics.roi");
      c.metrics.roi = Roi{get_int(*r, "top", "metrics.roi"), get_int(*r, "left", "metrics.roi"),
                          get_int(*r, "height", "metrics.roi"), get_int(*r, "width", "metrics.roi")};
    }
    if (find(*m, "peak")) {
      c.metrics.peak = get_number(*m, "peak", "metrics");
      if (!(*c.metrics.peak > 0.0)) throw ConfigError("metrics.peak", "must be > 0");
    }
    c.metrics.rel_tol = get_number(*m, "rel_tol", "metrics", kDefaultRelTol);
    if (!(c.metrics.rel_tol > 0.0)) throw ConfigError("metrics.rel_tol", "must be > 0");
  }

  if (const json* o = find(j, "outputs")) {
    require_object(*o, "outputs");
    c.outputs.image = get_string(*o, "image", "outputs", c.outputs.image);
    c.outputs.buckets = get_string(*o, "buckets", "outputs", c.outputs.buckets);
    c.outputs.report = get_string(*o, "report", "outputs", c.outputs.report);
  }

  if (c.hybrid.uses_dft() &&
      (c.acquisition != AcquisitionPath::Ideal || c.noise.sigma != 0.0)) {
    throw ConfigError("hybrid", "dft is only permitted with acquisition \"ideal\" and sigma 0");
  }
  if (c.acquisition == AcquisitionPath::Ideal && c.noise.sigma != 0.0) {
    throw ConfigError("noise.sigma", "the ideal acquisition path is noiseless; sigma must be 0");
  }
  if (!c.object.generator.empty()) {
    const Index rows = get_int(c.object.params, "rows", "object");
    const Index cols = get_int(c.object.params, "cols", "object");
    if (rows != c.hybrid.rows() || cols != c.hybrid.cols()) {
      throw ConfigError("hybrid", "factor orders " + std::to_string(c.hybrid.rows()) + "x" +
                                      std::to_string(c.hybrid.cols()) + " do not match the " +
                                      std::to_string(rows) + "x" + std::to_string(cols) + " object");
    }
    try {
      (void)make_object(c.object);
    } catch (const Error& e) {
      throw ConfigError("object", e.what());
    }
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  const std::string text = io::read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

nlohmann::json to_json(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  j["object"] = object_to_json(c.object);
  j["hybrid"] = hybrid_to_json(c.hybrid);
  j["acquisition"] = c.acquisition == AcquisitionPath::Ideal ? "ideal" : "physical";
  j["noise"] = {{"sigma", c.noise.sigma}, {"seed", c.noise.seed}};
  j["metrics"] = {{"roi", c.metrics.roi ? to_json(*c.metrics.roi) : json(nullptr)},
                  {"peak", c.metrics.peak ? json(*c.metrics.peak) : json(nullptr)},
                  {"rel_tol", c.metrics.rel_tol}};
  j["outputs"] = {{"image", c.outputs.image}, {"buckets", c.outputs.buckets}, {"report", c.outputs.report}};
  return j;
}

SceneImage make_object(const ObjectSource& source) {
  if (source.generator.empty()) return load_image(source.file, source.range);
  const json& p = source.params;
  const std::string path = "object";
  const Index rows = get_int(p, "rows", path);
  const Index cols = get_int(p, "cols", path);
  if (source.generator == "windmill") {
    return windmill(rows, cols, static_cast<int>(get_int(p, "blades", path, 4)));
  }
  if (source.generator == "stripes") {
    StripeSpec s;
    s.height = rows;
    s.width = cols;
    s.stripe_period = get_int(p, "period", path);
    s.orientation = get_string(p, "orientation", path, std::string("horizontal")) == "vertical"
                        ? StripeOrientation::Vertical
                        : StripeOrientation::Horizontal;
    s.stagger_offset = get_int(p, "stagger_offset", path, 0);
    s.band_size = get_int(p, "band_size", path, 1);
    return staggered_stripes(s);
  }
  if (source.generator == "separable") {
    const auto left = make_transform<double>(kind_at(p.value("left", json()), "object.left"), rows);
    const auto right = make_transform<double>(kind_at(p.value("right", json()), "object.right"), cols);
    return separable_object(left, right, get_int(p, "m", path), get_int(p, "n", path),
                            get_bool(p, "binarize", path, false));
  }
  throw ConfigError("object.generator", "unknown generator '" + source.generator + "'");
}

RunResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                         const RunOptions& options) {
  const SceneImage object = make_object(config.object);
  const HybridSpec& spec = config.hybrid;
  if (object.rows() != spec.rows() || object.cols() != spec.cols()) {
    throw ShapeError("object is " + std::to_string(object.rows()) + "x" + std::to_string(object.cols()) +
                     " but the hybrid spec expects " + std::to_string(spec.rows()) + "x" +
                     std::to_string(spec.cols()));
  }

  RunResult result;
  result.set_name = spec.name();
  result.sampling_rate = spec.sampling_rate();
  std::optional<MatrixX<Complex>> complex_buckets;

  if (config.acquisition == AcquisitionPath::Physical) {
    const BucketSignals y = acquire(spec, object, config.noise, {options.workers});
    result.buckets = y.values;
    result.image = reconstruct_chain<double>(y).image;
  } else if (spec.uses_dft()) {
    const auto [left, right] = compose_chain<Complex>(spec);
    MatrixX<Complex> y = forward_model(left, right, object.values());
    result.image = reconstruct_chain<Complex>(spec, y).image.real();
    result.buckets = y.cwiseAbs();
    complex_buckets = std::move(y);
  } else {
    const auto [left, right] = compose_chain<double>(spec);
    result.buckets = forward_model(left, right, object.values());
    result.image = reconstruct_chain<double>(spec, result.buckets).image;
  }

  const double peak = config.metrics.peak.value_or(range_width(object.range()));
  const Roi region = config.metrics.roi.value_or(Roi{0, 0, object.rows(), object.cols()});
  result.report.mse = mse(object.values(), result.image, config.metrics.roi);
  result.report.psnr_db = psnr(object.values(), result.image, peak, config.metrics.roi);
  result.report.ssim = region.height >= kSsimWindow && region.width >= kSsimWindow
                           ? ssim(object.values(), result.image, peak, config.metrics.roi)
                           : std::nan("");
  result.report.roi = config.metrics.roi;
  result.significance = count_significant(result.buckets, config.metrics.rel_tol);

  result.summary = result.set_name + " rate=" + format_double(result.sampling_rate, "%.3f") +
                   " psnr=" + format_double(result.report.psnr_db, "%.4f") +
                   " ssim=" + format_double(result.report.ssim, "%.6f") +
                   " significant=" + std::to_string(result.significance.count);

  if (options.write_outputs) {
    const auto buckets_path = out_dir / config.outputs.buckets;
    if (complex_buckets) {
      io::write_csv(buckets_path, *complex_buckets);
    } else {
      io::write_csv(buckets_path, result.buckets);
    }
    json sidecar = {{"spec", hybrid_to_json(spec)},
                    {"sigma", config.noise.sigma},
                    {"seed", config.noise.seed},
                    {"complex", complex_buckets.has_value()},
                    {"range", std::string(range_name(object.range()))},
                    {"rows", object.rows()},
                    {"cols", object.cols()},
                    {"config", to_json(config)}};
    io::write_file(std::filesystem::path(buckets_path.string() + ".json"), sidecar.dump(2) + "\n");

    auto image_path = out_dir / config.outputs.image;
    auto csv_path = image_path;
    csv_path.replace_extension(".csv");
    if (image_path.extension() == ".csv") {
      io::write_csv(image_path, result.image);
    } else {
      save_image(clip_to_range(result.image, object.range()), image_path);
      io::write_csv(csv_path, result.image);
    }

    json report = to_json(result.report);
    if (std::isnan(result.report.ssim)) report["ssim"] = nullptr;
    report["set"] = result.set_name;
    report["sampling_rate"] = result.sampling_rate;
    report["peak"] = peak;
    report["significant"] = result.significance.count;
    json positions = json::array();
    for (const auto& [m, n] : result.significance.positions) positions.push_back({m, n});
    report["significant_positions"] = positions;
    report["config"] = to_json(config);
    io::write_file(out_dir / config.outputs.report, report.dump(2) + "\n");
  }
  return result;
}

std::vector<std::pair<TransformKind, TransformKind>> two_matrix_sets() {
  using K = TransformKind;
  return {{K::Hadamard, K::DCT}, {K::Hadamard, K::Haar}, {K::DCT, K::Hadamard},
          {K::DCT, K::Haar},     {K::Haar, K::Hadamard}, {K::Haar, K::DCT}};
}

std::vector<ExperimentConfig> expand_sweep(const nlohmann::json& j) {
  require_object(j, "sweep");
  std::vector<ExperimentConfig> out;
  if (const json* runs = find(j, "runs")) {
    if (!runs->is_array() || runs->empty()) throw ConfigError("runs", "expected a non-empty array");
    for (std::size_t i = 0; i < runs->size(); ++i) {
      try {
        out.push_back(parse_config((*runs)[i]));
      } catch (const ConfigError& e) {
        throw ConfigError("runs[" + std::to_string(i) + "]." + e.path(), e.what());
      }
    }
    return out;
  }
  if (!find(j, "base")) throw ConfigError("base", "a sweep needs either runs or base + grid");
  ExperimentConfig base;
  try {
    base = parse_config(j["base"]);
  } catch (const ConfigError& e) {
    throw ConfigError("base." + e.path(), e.what());
  }
  const json grid = j.value("grid", json::object());
  require_object(grid, "grid");

  auto axis = [&](const char* key) -> std::vector<json> {
    const json* a = find(grid, key);
    if (!a) return {json(nullptr)};
    if (!a->is_array() || a->empty()) throw ConfigError(join("grid", key), "expected a non-empty array");
    return std::vector<json>(a->begin(), a->end());
  };
  const auto sets = axis("sets");
  const auto rates = axis("sampling_rates");
  const auto sigmas = axis("sigmas");
  const auto seeds = axis("seeds");

  for (std::size_t si = 0; si < sets.size(); ++si) {
    for (std::size_t ri = 0; ri < rates.size(); ++ri) {
      for (const json& sigma : sigmas) {
        for (const json& seed : seeds) {
          ExperimentConfig c = base;
          const std::string where = "grid.sets[" + std::to_string(si) + "]";
          double rate = 0.0;
          if (!rates[ri].is_null()) {
            if (!rates[ri].is_number() || !(rates[ri].get<double>() > 0.0) || rates[ri].get<double>() > 1.0) {
              throw ConfigError("grid.sampling_rates[" + std::to_string(ri) + "]", "must lie in (0, 1]");
            }
            rate = rates[ri].get<double>();
          }
          if (!sets[si].is_null()) {
            if (!sets[si].is_string()) throw ConfigError(where, "expected a set name such as \"D-C\"");
            try {
              c.hybrid = hybrid_from_name(sets[si].get<std::string>(), base.hybrid.rows(),
                                          base.hybrid.cols(), rate > 0 ? rate : 1.0, rate > 0 ? rate : 1.0);
              if (rate == 0.0) {
                c.hybrid.left_chain.back().kept_rows = base.hybrid.left_kept();
                c.hybrid.right_chain.back().kept_rows = base.hybrid.right_kept();
              }
            } catch (const Error& e) {
              throw ConfigError(where, e.what());
            }
          } else if (rate > 0.0) {
            c.hybrid.left_chain.back().kept_rows = resolve_kept_rows(rate, c.hybrid.rows());
            c.hybrid.right_chain.back().kept_rows = resolve_kept_rows(rate, c.hybrid.cols());
          }
          if (!sigma.is_null()) {
            if (!sigma.is_number() || sigma.get<double>() < 0.0) {
              throw ConfigError("grid.sigmas", "expected non-negative numbers");
            }
            c.noise.sigma = sigma.get<double>();
          }
          if (!seed.is_null()) {
            if (!seed.is_number_integer() || (seed.is_number_integer() && !seed.is_number_unsigned() &&
                                              seed.get<std::int64_t>() < 0)) {
              throw ConfigError("grid.seeds", "expected non-negative integers");
            }
            c.noise.seed = seed.get<std::uint64_t>();
          }
          // Re-validate the combination (e.g. dft with sigma > 0).
          out.push_back(parse_config(to_json(c)));
        }
      }
    }
  }
  return out;
}

std::vector<SweepRow> sweep(const std::vector<ExperimentConfig>& configs, unsigned workers) {
  std::vector<SweepRow> rows(configs.size());
  auto run_one = [&](std::size_t i) {
    const ExperimentConfig& c = configs[i];
    SweepRow& row = rows[i];
    row.index = i;
    row.set_name = c.hybrid.name();
    row.sampling_rate = c.hybrid.sampling_rate();
    row.sigma = c.noise.sigma;
    row.seed = c.noise.seed;
    try {
      const RunResult r = run_experiment(c, {}, {1, false});
      row.report = r.report;
      row.significant = r.significance.count;
    } catch (const std::exception& e) {
      row.status = e.what();
      row.report.psnr_db = std::nan("");
      row.report.ssim = std::nan("");
      row.report.mse = std::nan("");
    }
  };

  const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(configs.size())));
  if (n <= 1) {
    for (std::size_t i = 0; i < configs.size(); ++i) run_one(i);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < n; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) run_one(i);
      });
    }
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "index,set,sampling_rate,sigma,seed,psnr_db,ssim,mse,significant,status\n";
  for (const SweepRow& r : rows) {
    std::string status = r.status;
    for (char& ch : status) {
      if (ch == ',' || ch == '\n' || ch == '"') ch = ' ';
    }
    out += std::to_string(r.index) + "," + r.set_name + "," + format_double(r.sampling_rate, "%.6f") +
           "," + format_double(r.sigma, "%.10g") + "," + std::to_string(r.seed) + "," +
           format_double(r.report.psnr_db, "%.17g") + "," + format_double(r.report.ssim, "%.17g") + "," +
           format_double(r.report.mse, "%.17g") + "," + std::to_string(r.significant) + "," + status +
           "\n";
  }
  return out;
}

std::optional<StripeSearchResult> find_single_peak_stripes(
    Index rows, Index cols, const std::vector<std::pair<TransformKind, TransformKind>>& single_peak_sets,
    double rel_tol) {
  struct Factors {
    std::string name;
    TruncatedTransform<double> left, right;
  };
  std::vector<Factors> all;
  for (const auto& [l, r] : two_matrix_sets()) {
    const HybridSpec s = HybridSpec::pair(l, rows, r, cols);
    auto [lt, rt] = compose_chain<double>(s);
    all.push_back({s.name(), std::move(lt), std::move(rt)});
  }
  std::vector<const Factors*> wanted;
  std::vector<HybridSpec> wanted_specs;
  for (const auto& [l, r] : single_peak_sets) {
    const HybridSpec s = HybridSpec::pair(l, rows, r, cols);
    wanted_specs.push_back(s);
    for (const Factors& f : all) {
      if (f.name == s.name()) wanted.push_back(&f);
    }
  }

  for (auto orientation : {StripeOrientation::Horizontal, StripeOrientation::Vertical}) {
    const bool horizontal = orientation == StripeOrientation::Horizontal;
    const Index along = horizontal ? rows : cols;
    const Index across = horizontal ? cols : rows;
    for (Index period = 2; period <= along; period += 2) {
      for (Index offset = 0; offset < period; ++offset) {
        for (Index band = 1; band <= across; ++band) {
          if (offset == 0 && band > 1) continue;  // every band size is the same plain layout
          const StripeSpec spec{rows, cols, period, orientation, offset, band};
          const SceneImage x = staggered_stripes(spec);
          // Screen with the dense forward model, then confirm through the simulator.
          bool ok = true;
          for (const Factors* f : wanted) {
            if (count_significant(forward_model(f->left, f->right, x.values()), rel_tol).count != 1) {
              ok = false;
              break;
            }
          }
          if (!ok) continue;
          for (const HybridSpec& s : wanted_specs) {
            if (count_significant(acquire(s, x, {}).values, rel_tol).count != 1) ok = false;
          }
          if (!ok) continue;
          StripeSearchResult result{spec, {}};
          for (const auto& [l, r] : two_matrix_sets()) {
            const HybridSpec s = HybridSpec::pair(l, rows, r, cols);
            result.counts.emplace_back(s.name(), count_significant(acquire(s, x, {}).values, rel_tol).count);
          }
          return result;
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace hgi
