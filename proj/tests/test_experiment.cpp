#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "hgi/experiment.hpp"
#include "hgi/io.hpp"

namespace hgi {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json windmill_config(const std::string& left = "hadamard", const std::string& right = "dct") {
  return json::parse(R"({
    "name": "unit",
    "object": {"generator": "windmill", "rows": 32, "cols": 64, "blades": 4},
    "hybrid": {"left": {"kind": ")" + left + R"(", "order": 32},
               "right": {"kind": ")" + right + R"(", "order": 64}},
    "noise": {"sigma": 0.0, "seed": 7}
  })");
}

std::string config_error_path(const json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<no error>";
}

TEST(Config, KeptRowsRoundHalfUp) {
  EXPECT_EQ(resolve_kept_rows(0.906, 32), 29);
  EXPECT_EQ(resolve_kept_rows(0.906, 64), 58);
  EXPECT_EQ(resolve_kept_rows(1.0, 64), 64);
  EXPECT_EQ(resolve_kept_rows(0.5, 3), 2);
  EXPECT_EQ(resolve_kept_rows(0.01, 8), 1);
  EXPECT_THROW(resolve_kept_rows(0.0, 8), ParameterError);
  EXPECT_THROW(resolve_kept_rows(1.5, 8), ParameterError);
}

TEST(Config, SamplingRateResolvesPerSide) {
  json j = windmill_config();
  j["hybrid"]["left"]["sampling_rate"] = 0.906;
  j["hybrid"]["right"]["sampling_rate"] = 0.906;
  const ExperimentConfig c = parse_config(j);
  EXPECT_EQ(c.hybrid.left_kept(), 29);
  EXPECT_EQ(c.hybrid.right_kept(), 58);
  EXPECT_NEAR(c.hybrid.sampling_rate(), 0.821, 0.001);
}

TEST(Config, ErrorsNameTheField) {
  json j = windmill_config();
  j["hybrid"]["left"]["kind"] = "wavelet";
  EXPECT_EQ(config_error_path(j), "hybrid.left.kind");

  j = windmill_config();
  j["hybrid"]["right"].erase("order");
  EXPECT_EQ(config_error_path(j), "hybrid.right.order");

  j = windmill_config();
  j["hybrid"]["left"]["kept_rows"] = 40;
  EXPECT_EQ(config_error_path(j), "hybrid.left.kept_rows");

  j = windmill_config();
  j["noise"]["sigma"] = "loud";
  EXPECT_EQ(config_error_path(j), "noise.sigma");

  j = windmill_config();
  j["object"]["rows"] = 16;
  EXPECT_EQ(config_error_path(j), "hybrid");

  j = windmill_config();
  j.erase("object");
  EXPECT_EQ(config_error_path(j), "object");

  j = windmill_config();
  j["acquisition"] = "magic";
  EXPECT_EQ(config_error_path(j), "acquisition");

  j = windmill_config();
  j["hybrid"]["left"] = {{"kinds", json::array({"dct", "hadamard"})}, {"order", 32}, {"kept_rows", 16}};
  EXPECT_NO_THROW(parse_config(j));
}

TEST(Config, DftNeedsTheIdealNoiselessPath) {
  json j = windmill_config("dft", "dct");
  EXPECT_EQ(config_error_path(j), "hybrid");
  j["acquisition"] = "ideal";
  EXPECT_NO_THROW(parse_config(j));
  j["noise"]["sigma"] = 0.01;
  EXPECT_NE(config_error_path(j), "<no error>");
}

TEST(Config, CanonicalJsonRoundTrip) {
  json j = windmill_config("haar", "hadamard");
  j["hybrid"]["left"]["sampling_rate"] = 0.75;
  j["metrics"] = {{"roi", {{"top", 2}, {"left", 4}, {"height", 16}, {"width", 32}}}, {"peak", 2.0}};
  j["noise"] = {{"sigma", 0.05}, {"seed", 99}};
  const ExperimentConfig c = parse_config(j);
  const json canonical = to_json(c);
  EXPECT_EQ(to_json(parse_config(canonical)), canonical);

  const RunResult a = run_experiment(c, {}, {1, false});
  const RunResult b = run_experiment(parse_config(canonical), {}, {1, false});
  EXPECT_EQ(a.buckets, b.buckets);
  EXPECT_EQ(a.image, b.image);
  EXPECT_EQ(a.summary, b.summary);
}

TEST(Config, NamedSets) {
  const HybridSpec s = hybrid_from_name("H-C", 32, 64, 0.906, 0.906);
  EXPECT_EQ(s.name(), "H-C");
  EXPECT_EQ(s.left_chain.front().kind, TransformKind::Haar);
  EXPECT_EQ(s.right_chain.front().kind, TransformKind::DCT);
  EXPECT_EQ(s.left_kept(), 29);
  EXPECT_THROW(hybrid_from_name("X-C", 8, 8), Error);
  EXPECT_THROW(hybrid_from_name("DC", 8, 8), Error);
}

TEST(Run, AllSixSetsRecoverTheWindmillExactly) {
  for (const auto& [l, r] : two_matrix_sets()) {
    json j = windmill_config(std::string(kind_name(l)), std::string(kind_name(r)));
    const RunResult res = run_experiment(parse_config(j), {}, {1, false});
    EXPECT_LT(res.report.mse, 1e-24) << res.set_name;
    EXPECT_GT(res.report.psnr_db, 200.0) << res.set_name;
    EXPECT_NEAR(res.report.ssim, 1.0, 1e-12) << res.set_name;
    EXPECT_DOUBLE_EQ(res.sampling_rate, 1.0);
  }
}

TEST(Run, IdealDftPath) {
  json j = windmill_config("dft", "hadamard");
  j["acquisition"] = "ideal";
  const RunResult res = run_experiment(parse_config(j), {}, {1, false});
  EXPECT_EQ(res.set_name, "F-D");
  EXPECT_LT(res.report.mse, 1e-24);
  EXPECT_TRUE((res.buckets.array() >= 0.0).all());
}

TEST(Run, PhysicalAndIdealPathsAgreeWithoutNoise) {
  json j = windmill_config("haar", "dct");
  j["hybrid"]["left"]["sampling_rate"] = 0.5;
  const RunResult phys = run_experiment(parse_config(j), {}, {1, false});
  j["acquisition"] = "ideal";
  const RunResult ideal = run_experiment(parse_config(j), {}, {1, false});
  EXPECT_LT((phys.buckets - ideal.buckets).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((phys.image - ideal.image).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Run, WritesArtifacts) {
  const fs::path dir = fs::temp_directory_path() / "hgi_experiment_tests" / "artifacts";
  fs::remove_all(dir);
  const ExperimentConfig c = parse_config(windmill_config());
  const RunResult r = run_experiment(c, dir);
  for (const char* f : {"buckets.csv", "buckets.csv.json", "reconstruction.pgm", "reconstruction.csv", "report.json"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  EXPECT_EQ(io::read_csv(dir / "buckets.csv"), r.buckets);
  EXPECT_EQ(io::read_csv(dir / "reconstruction.csv"), r.image);
  const json report = json::parse(io::read_file(dir / "report.json"));
  EXPECT_GT(report["psnr_db"].get<double>(), 200.0);
  EXPECT_EQ(report["set"], "D-C");
  const json sidecar = json::parse(io::read_file(dir / "buckets.csv.json"));
  EXPECT_EQ(parse_config(sidecar["config"]).hybrid, c.hybrid);
}

TEST(Sweep, GridExpandsInOrder) {
  const json doc = {{"base", windmill_config()},
                    {"grid", {{"sets", {"D-C", "D-H", "C-D", "C-H", "H-D", "H-C"}},
                              {"sampling_rates", {1.0, 0.906}}}}};
  const auto configs = expand_sweep(doc);
  ASSERT_EQ(configs.size(), 12u);
  EXPECT_EQ(configs[0].hybrid.name(), "D-C");
  EXPECT_EQ(configs[1].hybrid.left_kept(), 29);
  EXPECT_EQ(configs[11].hybrid.name(), "H-C");

  const auto rows = sweep(configs, 4);
  ASSERT_EQ(rows.size(), 12u);
  const auto serial = sweep(configs, 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].index, i);
    EXPECT_EQ(rows[i].status, "ok");
    EXPECT_EQ(rows[i].report.mse, serial[i].report.mse);
    if (i % 2 == 0) EXPECT_GT(rows[i].report.psnr_db, 200.0);
    else EXPECT_LT(rows[i].report.psnr_db, 60.0);
  }
  const std::string csv = sweep_csv(rows);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 13);
  EXPECT_EQ(csv.rfind("index,set,sampling_rate,sigma,seed,psnr_db,ssim,mse,significant,status\n", 0), 0u);
}

TEST(Sweep, FailedRunsAreRecorded) {
  ExperimentConfig bad = parse_config(windmill_config());
  bad.object.params["rows"] = 16;
  const auto rows = sweep({parse_config(windmill_config()), bad}, 2);
  EXPECT_EQ(rows[0].status, "ok");
  EXPECT_NE(rows[1].status, "ok");
  EXPECT_TRUE(std::isnan(rows[1].report.psnr_db));
}

TEST(Sweep, InvalidGridEntriesNameTheAxis) {
  json doc = {{"base", windmill_config()}, {"grid", {{"sigmas", {0.1, -1.0}}}}};
  try {
    expand_sweep(doc);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.path(), "grid.sigmas");
  }
  doc = {{"runs", {windmill_config(), json::object()}}};
  try {
    expand_sweep(doc);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.path(), "runs[1].object");
  }
}

TEST(Sweep, PsnrFallsAsNoiseGrows) {
  json base = windmill_config();
  base["object"]["rows"] = 16;
  base["object"]["cols"] = 16;
  base["hybrid"]["left"]["order"] = 16;
  base["hybrid"]["right"]["order"] = 16;
  json seeds = json::array();
  for (int s = 0; s < 10; ++s) seeds.push_back(s);
  const json doc = {{"base", base}, {"grid", {{"sigmas", {0.001, 0.01, 0.1}}, {"seeds", seeds}}}};
  const auto rows = sweep(expand_sweep(doc), 4);
  ASSERT_EQ(rows.size(), 30u);
  double mean[3] = {0, 0, 0};
  for (const auto& r : rows) mean[r.index / 10] += r.report.psnr_db / 10.0;
  EXPECT_GT(mean[0], mean[1]);
  EXPECT_GT(mean[1], mean[2]);
}

TEST(StripeSearch, FindsACommonSinglePeakLayout) {
  using K = TransformKind;
  const auto found = find_single_peak_stripes(32, 16, {{K::Hadamard, K::DCT}, {K::Haar, K::Hadamard}, {K::Haar, K::DCT}});
  ASSERT_TRUE(found.has_value());
  ASSERT_EQ(found->counts.size(), 6u);
  for (const auto& [name, count] : found->counts) {
    if (name == "D-C" || name == "H-D" || name == "H-C") EXPECT_EQ(count, 1u) << name;
  }
  const SceneImage x = staggered_stripes(found->spec);
  const auto y = acquire(HybridSpec::pair(K::Haar, 32, K::DCT, 16), x, {});
  EXPECT_EQ(count_significant(y.values).count, 1u);
}

}  // namespace
}  // namespace hgi
