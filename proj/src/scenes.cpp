#include "hgi/scenes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hgi/errors.hpp"
#include "hgi/io.hpp"

namespace hgi {

namespace {

Index positive_mod(Index a, Index m) { return ((a % m) + m) % m; }

bool has_extension(const std::filesystem::path& path, const char* ext) {
  std::string e = path.extension().string();
  std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return std::tolower(c); });
  return e == ext;
}

}  // namespace

SceneImage staggered_stripes(const StripeSpec& spec) {
  if (spec.height < 1 || spec.width < 1) throw ParameterError("stripe image must be at least 1x1");
  if (spec.stripe_period < 2 || spec.stripe_period % 2 != 0) {
    throw ParameterError("stripe_period must be a positive even integer");
  }
  if (spec.band_size < 1) throw ParameterError("band_size must be >= 1");
  const bool horizontal = spec.orientation == StripeOrientation::Horizontal;
  const Index along = horizontal ? spec.height : spec.width;
  if (spec.stripe_period > along) {
    throw ParameterError("stripe_period " + std::to_string(spec.stripe_period) +
                         " exceeds the stripe dimension " + std::to_string(along));
  }

  MatrixX<double> x(spec.height, spec.width);
  const Index half = spec.stripe_period / 2;
  for (Index i = 0; i < spec.height; ++i) {
    for (Index j = 0; j < spec.width; ++j) {
      const Index pos = horizontal ? i : j;
      const Index band = (horizontal ? j : i) / spec.band_size;
      const Index phase = positive_mod(pos + band * spec.stagger_offset, spec.stripe_period);
      x(i, j) = phase < half ? 1.0 : -1.0;
    }
  }
  return SceneImage(std::move(x), ValueRange::Signed);
}

SceneImage separable_object(const TransformMatrix& left, const TransformMatrix& right, Index m,
                            Index n, bool binarize) {
  if (m < 0 || m >= left.order() || n < 0 || n >= right.order()) {
    throw IndexError("separable object index (" + std::to_string(m) + ", " + std::to_string(n) +
                     ") out of range");
  }
  const auto l = left.matrix().row(m);
  const auto r = right.matrix().row(n);
  if (binarize && ((l.array() == 0.0).any() || (r.array() == 0.0).any())) {
    throw DegeneratePatternError("cannot binarize a transform row that contains zeros");
  }
  MatrixX<double> x = l.transpose() * r;
  if (binarize) {
    x = x.unaryExpr([](double v) { return v > 0.0 ? 1.0 : -1.0; });
  } else {
    x /= x.cwiseAbs().maxCoeff();
  }
  return SceneImage(std::move(x), ValueRange::Signed);
}

SceneImage windmill(Index rows, Index cols, int blade_count) {
  if (blade_count < 2) throw ParameterError("windmill needs at least 2 blades");
  if (rows < 8 || cols < 8) throw ParameterError("windmill needs at least an 8x8 image");
  const double cy = static_cast<double>(rows) / 2.0;
  const double cx = static_cast<double>(cols) / 2.0;
  const double radius = static_cast<double>(std::min(rows, cols)) / 2.0;
  const double hub = 1.5;
  const double sector = std::numbers::pi / blade_count;

  MatrixX<double> x = MatrixX<double>::Zero(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      const double dy = static_cast<double>(i) + 0.5 - cy;
      const double dx = static_cast<double>(j) + 0.5 - cx;
      const double r = std::hypot(dx, dy);
      if (r < hub || r > radius) continue;
      double theta = std::atan2(dy, dx);
      if (theta < 0.0) theta += 2.0 * std::numbers::pi;
      const auto s = static_cast<long>(std::floor(theta / sector));
      if (s % 2 == 0) x(i, j) = 1.0;
    }
  }
  return SceneImage(std::move(x), ValueRange::Reflectance);
}

SceneImage load_image(const std::filesystem::path& path, ValueRange range) {
  if (has_extension(path, ".csv")) return SceneImage(io::read_csv(path), range);
  if (!has_extension(path, ".pgm")) {
    throw IoError("unsupported image format '" + path.string() + "' (expected .pgm or .csv)");
  }
  const io::GrayImage g = io::read_pgm(path);
  MatrixX<double> x(g.height, g.width);
  const double lo = range_low(range);
  const double width = range_width(range);
  for (Index i = 0; i < g.height; ++i) {
    for (Index j = 0; j < g.width; ++j) {
      x(i, j) = lo + width * static_cast<double>(g.pixels[static_cast<std::size_t>(i * g.width + j)]) / 255.0;
    }
  }
  return SceneImage(std::move(x), range);
}

void save_image(const SceneImage& scene, const std::filesystem::path& path) {
  if (has_extension(path, ".csv")) {
    io::write_csv(path, scene.values());
    return;
  }
  if (!has_extension(path, ".pgm")) {
    throw IoError("unsupported image format '" + path.string() + "' (expected .pgm or .csv)");
  }
  io::GrayImage g;
  g.height = scene.rows();
  g.width = scene.cols();
  g.pixels.resize(static_cast<std::size_t>(g.height * g.width));
  const double lo = range_low(scene.range());
  const double width = range_width(scene.range());
  for (Index i = 0; i < g.height; ++i) {
    for (Index j = 0; j < g.width; ++j) {
      const double level = std::round((scene.values()(i, j) - lo) / width * 255.0);
      g.pixels[static_cast<std::size_t>(i * g.width + j)] =
          static_cast<std::uint8_t>(std::clamp(level, 0.0, 255.0));
    }
  }
  io::write_pgm(path, g);
}

}  // namespace hgi
