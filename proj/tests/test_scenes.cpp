#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <queue>

#include "hgi/io.hpp"
#include "hgi/metrics.hpp"
#include "hgi/reconstruct.hpp"
#include "hgi/scenes.hpp"
#include "test_util.hpp"

namespace hgi {
namespace {

namespace fs = std::filesystem;

fs::path temp_path(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "hgi_scene_tests";
  fs::create_directories(dir);
  return dir / name;
}

int bright_components(const Eigen::MatrixXd& x) {
  Eigen::MatrixXi seen = Eigen::MatrixXi::Zero(x.rows(), x.cols());
  int components = 0;
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = 0; j < x.cols(); ++j) {
      if (x(i, j) != 1.0 || seen(i, j)) continue;
      ++components;
      std::queue<std::pair<Index, Index>> q;
      q.emplace(i, j);
      seen(i, j) = 1;
      while (!q.empty()) {
        auto [a, b] = q.front();
        q.pop();
        const Index da[] = {1, -1, 0, 0}, db[] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          const Index u = a + da[k], v = b + db[k];
          if (u < 0 || v < 0 || u >= x.rows() || v >= x.cols()) continue;
          if (x(u, v) == 1.0 && !seen(u, v)) {
            seen(u, v) = 1;
            q.emplace(u, v);
          }
        }
      }
    }
  }
  return components;
}

// Fraction of pixels where x agrees with x rotated by `angle` about the
// image center (nearest-pixel sampling, outside counts as 0).
double rotation_agreement(const Eigen::MatrixXd& x, double angle) {
  const double cy = x.rows() / 2.0, cx = x.cols() / 2.0;
  Index agree = 0;
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = 0; j < x.cols(); ++j) {
      const double dy = i + 0.5 - cy, dx = j + 0.5 - cx;
      const double sx = std::cos(angle) * dx + std::sin(angle) * dy;
      const double sy = -std::sin(angle) * dx + std::cos(angle) * dy;
      const auto si = static_cast<Index>(std::floor(sy + cy));
      const auto sj = static_cast<Index>(std::floor(sx + cx));
      const double src = (si < 0 || sj < 0 || si >= x.rows() || sj >= x.cols()) ? 0.0 : x(si, sj);
      agree += src == x(i, j);
    }
  }
  return static_cast<double>(agree) / static_cast<double>(x.size());
}

TEST(Stripes, PlainStripesAreRankOne) {
  const SceneImage s = staggered_stripes({16, 12, 4, StripeOrientation::Horizontal, 0, 3});
  EXPECT_EQ(s.range(), ValueRange::Signed);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(s.values());
  EXPECT_GT(svd.singularValues()(0), 1.0);
  EXPECT_LT(svd.singularValues()(1), 1e-10);
  EXPECT_EQ(s.values().col(0).replicate(1, 12), s.values());
}

TEST(Stripes, VerticalPeriodTwoAlternatesColumns) {
  const SceneImage s = staggered_stripes({4, 4, 2, StripeOrientation::Vertical, 0, 1});
  Eigen::MatrixXd expected(4, 4);
  expected << 1, -1, 1, -1,
              1, -1, 1, -1,
              1, -1, 1, -1,
              1, -1, 1, -1;
  EXPECT_EQ(s.values(), expected);
}

TEST(Stripes, StaggerShiftsSuccessiveBands) {
  const SceneImage s = staggered_stripes({8, 6, 4, StripeOrientation::Horizontal, 1, 2});
  EXPECT_TRUE((s.values().array().abs() == 1.0).all());
  // Band 1 (columns 2-3) is band 0 shifted by one row.
  for (Index i = 0; i < 8; ++i) {
    EXPECT_EQ(s.values()(i, 2), s.values()((i + 1) % 8, 0));
    EXPECT_EQ(s.values()(i, 4), s.values()((i + 2) % 8, 0));
  }
}

TEST(Stripes, TwoValuedForManyLayouts) {
  for (Index period : {2, 4, 6, 8}) {
    for (Index offset : {-3, 0, 1, 5}) {
      for (auto o : {StripeOrientation::Horizontal, StripeOrientation::Vertical}) {
        const SceneImage s = staggered_stripes({8, 8, period, o, offset, 3});
        EXPECT_TRUE((s.values().array() == 1.0 || s.values().array() == -1.0).all());
      }
    }
  }
}

TEST(Stripes, ParameterErrors) {
  EXPECT_THROW(staggered_stripes({8, 8, 3, StripeOrientation::Horizontal, 0, 1}), ParameterError);
  EXPECT_THROW(staggered_stripes({8, 8, 10, StripeOrientation::Horizontal, 0, 1}), ParameterError);
  EXPECT_THROW(staggered_stripes({8, 4, 6, StripeOrientation::Vertical, 0, 1}), ParameterError);
  EXPECT_THROW(staggered_stripes({8, 8, 2, StripeOrientation::Vertical, 0, 0}), ParameterError);
}

TEST(Stripes, HalfAndHalfLayoutIsSinglePeakForThreeSets) {
  const SceneImage x = staggered_stripes({32, 16, 32, StripeOrientation::Horizontal, 0, 1});
  using K = TransformKind;
  for (auto [l, r] : {std::pair{K::Hadamard, K::DCT}, std::pair{K::Haar, K::Hadamard}, std::pair{K::Haar, K::DCT}}) {
    const auto y = acquire(HybridSpec::pair(l, 32, r, 16), x, {});
    EXPECT_EQ(count_significant(y.values).count, 1u);
  }
}

TEST(Separable, BinarizedHadamardObjectsGiveOneBucket) {
  const auto l = build_hadamard(5);
  const auto r = build_hadamard(4);
  const auto spec = HybridSpec::pair(TransformKind::Hadamard, 32, TransformKind::Hadamard, 16);
  for (auto [m, n] : {std::pair<Index, Index>{0, 0}, {3, 7}, {31, 15}, {16, 1}}) {
    const SceneImage x = separable_object(l, r, m, n, true);
    const auto sig = count_significant(acquire(spec, x, {}).values);
    ASSERT_EQ(sig.count, 1u);
    EXPECT_EQ(sig.positions[0], (std::pair<Index, Index>{m, n}));
  }
  EXPECT_EQ(separable_object(l, r, 0, 0, true).values(), Eigen::MatrixXd::Ones(32, 16));
}

TEST(Separable, UnbinarizedDctColumnFactorStaysSinglePeak) {
  const auto l = build_haar(3);
  const auto r = build_dct(8);
  const SceneImage x = separable_object(l, r, 5, 3, false);
  EXPECT_DOUBLE_EQ(x.values().cwiseAbs().maxCoeff(), 1.0);
  const auto sig = count_significant(acquire(HybridSpec::pair(TransformKind::Haar, 8, TransformKind::DCT, 8), x, {}).values);
  ASSERT_EQ(sig.count, 1u);
  EXPECT_EQ(sig.positions[0], (std::pair<Index, Index>{5, 3}));
}

TEST(Separable, Errors) {
  const auto l = build_haar(3);
  const auto r = build_hadamard(3);
  EXPECT_THROW(separable_object(l, r, 8, 0, false), IndexError);
  // Haar row 2 has zero support outside its block.
  EXPECT_THROW(separable_object(l, r, 2, 0, true), DegeneratePatternError);
  EXPECT_NO_THROW(separable_object(l, r, 1, 0, true));
}

TEST(Windmill, FourBladesAtReferenceSize) {
  const SceneImage w = windmill(32, 64, 4);
  EXPECT_EQ(w.range(), ValueRange::Reflectance);
  EXPECT_TRUE((w.values().array() == 0.0 || w.values().array() == 1.0).all());
  EXPECT_EQ(bright_components(w.values()), 4);
  EXPECT_EQ(bright_components(windmill(48, 48, 6).values()), 6);
}

TEST(Windmill, RotationalSymmetry) {
  for (int blades : {3, 4, 6}) {
    const Eigen::MatrixXd x = windmill(32, 64, blades).values();
    EXPECT_GE(rotation_agreement(x, 2.0 * std::numbers::pi / blades), 0.95) << blades;
    // Half a period swaps blades and gaps, so agreement drops well below that.
    EXPECT_LT(rotation_agreement(x, std::numbers::pi / blades), 0.9) << blades;
  }
}

TEST(Windmill, ExactRecoveryAtFullSampling) {
  const SceneImage w = windmill(32, 64, 4);
  const auto y = acquire(HybridSpec::pair(TransformKind::Haar, 32, TransformKind::DCT, 64), w, {});
  EXPECT_LT(testing::max_abs_diff(reconstruct_chain<double>(y).image, w.values()), 1e-9);
}

TEST(Windmill, ParameterErrors) {
  EXPECT_THROW(windmill(32, 32, 1), ParameterError);
  EXPECT_THROW(windmill(7, 32, 4), ParameterError);
}

TEST(ImageFiles, PgmRangeMapping) {
  io::GrayImage g{2, 1, {0, 255}};
  const auto path = temp_path("map.pgm");
  io::write_pgm(path, g);
  const SceneImage refl = load_image(path, ValueRange::Reflectance);
  EXPECT_EQ(refl.values()(0, 0), 0.0);
  EXPECT_EQ(refl.values()(0, 1), 1.0);
  const SceneImage sgn = load_image(path, ValueRange::Signed);
  EXPECT_EQ(sgn.values()(0, 0), -1.0);
  EXPECT_EQ(sgn.values()(0, 1), 1.0);
}

TEST(ImageFiles, PgmRoundTripWithinQuantization) {
  const SceneImage x(testing::random_matrix(9, 13, 3, -1.0, 1.0), ValueRange::Signed);
  const auto path = temp_path("roundtrip.pgm");
  save_image(x, path);
  const SceneImage back = load_image(path, ValueRange::Signed);
  EXPECT_LE(testing::max_abs_diff(back.values(), x.values()), 1.0 / 255.0 + 1e-12);
  // Quantized values survive a second pass unchanged.
  save_image(back, path);
  EXPECT_EQ(load_image(path, ValueRange::Signed).values(), back.values());
}

TEST(ImageFiles, CsvRoundTripIsExact) {
  const SceneImage x(testing::random_matrix(7, 5, 4, 0.0, 1.0), ValueRange::Reflectance);
  const auto path = temp_path("roundtrip.csv");
  save_image(x, path);
  EXPECT_EQ(load_image(path, ValueRange::Reflectance).values(), x.values());
}

TEST(ImageFiles, MalformedInputReportsOffset) {
  try {
    io::parse_pgm("P5\n4 x\n255\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 5u);
  }
  EXPECT_THROW(io::parse_pgm("P2\n1 1\n255\n0"), ParseError);
  EXPECT_THROW(io::parse_pgm("P5\n2 2\n255\nab"), ParseError);
  EXPECT_THROW(io::parse_pgm("P5\n2 2\n65535\nabcdefgh"), ParseError);
  EXPECT_THROW(io::parse_pgm("P5\n100000 100000\n255\n"), ResourceError);
  EXPECT_NO_THROW(io::parse_pgm("P5\n# comment\n2 1\n255\nab"));
  try {
    io::parse_csv("1,2\n3,oops\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 6u);
  }
  EXPECT_THROW(io::parse_csv("1,2\n3\n"), ParseError);
  EXPECT_THROW(io::parse_csv(""), ParseError);
  EXPECT_THROW(load_image(temp_path("missing.pgm"), ValueRange::Signed), IoError);
  EXPECT_THROW(load_image(temp_path("image.png"), ValueRange::Signed), IoError);
}

TEST(ImageFiles, CsvUsesSeventeenDigits) {
  Eigen::MatrixXd m(1, 2);
  m << 0.1, 1.0 / 3.0;
  EXPECT_EQ(io::to_csv(m), "0.10000000000000001,0.33333333333333331\n");
  EXPECT_EQ(io::parse_csv(io::to_csv(m)), m);
}

}  // namespace
}  // namespace hgi
