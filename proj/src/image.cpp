#include "hgi/image.hpp"

#include <cmath>
#include <string>

namespace hgi {

double range_low(ValueRange range) noexcept { return range == ValueRange::Signed ? -1.0 : 0.0; }
double range_high(ValueRange) noexcept { return 1.0; }

std::string_view range_name(ValueRange range) noexcept {
  return range == ValueRange::Signed ? "signed" : "reflectance";
}

ValueRange parse_range(std::string_view name) {
  if (name == "reflectance") return ValueRange::Reflectance;
  if (name == "signed") return ValueRange::Signed;
  throw ParameterError("unknown value range '" + std::string(name) +
                       "' (expected reflectance or signed)");
}

SceneImage::SceneImage(MatrixX<double> values, ValueRange range)
    : values_(std::move(values)), range_(range) {
  if (values_.rows() < 1 || values_.cols() < 1) throw ShapeError("scene must be at least 1x1");
  const double lo = range_low(range_);
  const double hi = range_high(range_);
  for (Index i = 0; i < values_.rows(); ++i) {
    for (Index j = 0; j < values_.cols(); ++j) {
      const double v = values_(i, j);
      if (!std::isfinite(v) || v < lo || v > hi) {
        throw RangeError("scene value " + std::to_string(v) + " at (" + std::to_string(i) + ", " +
                         std::to_string(j) + ") is outside the " +
                         std::string(range_name(range_)) + " range");
      }
    }
  }
}

SceneImage clip_to_range(const MatrixX<double>& values, ValueRange range) {
  return SceneImage(values.cwiseMax(range_low(range)).cwiseMin(range_high(range)), range);
}

}  // namespace hgi
