#pragma once

#include <Eigen/Dense>

#include <string_view>

#include "hgi/transforms.hpp"

namespace hgi {

enum class ValueRange { Reflectance, Signed };

// Reflectance is [0, 1], Signed is [-1, 1].
double range_low(ValueRange range) noexcept;
double range_high(ValueRange range) noexcept;
inline double range_width(ValueRange range) noexcept { return range_high(range) - range_low(range); }
std::string_view range_name(ValueRange range) noexcept;
ValueRange parse_range(std::string_view name);

/// An M x N real scene whose values all lie in the declared range.
class SceneImage {
 public:
  SceneImage(MatrixX<double> values, ValueRange range);

  Index rows() const noexcept { return values_.rows(); }
  Index cols() const noexcept { return values_.cols(); }
  const MatrixX<double>& values() const noexcept { return values_; }
  ValueRange range() const noexcept { return range_; }

 private:
  MatrixX<double> values_;
  ValueRange range_;
};

/// Clamps every value into the declared range. Used for display export only.
SceneImage clip_to_range(const MatrixX<double>& values, ValueRange range);

}  // namespace hgi
