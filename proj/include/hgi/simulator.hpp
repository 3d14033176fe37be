#pragma once

// Projector + bucket-detector acquisition. Signed patterns are shown as two
// nonnegative halves I+ = (1 + I)/2 and I- = (1 - I)/2. A Signed (virtual)
// object is split the same way and each bucket takes four projections; a
// Reflectance object needs only two.

#include <Eigen/Dense>

#include <cstdint>
#include <utility>

#include "hgi/image.hpp"
#include "hgi/measurement.hpp"

namespace hgi {

/// Additive zero-mean Gaussian noise on every physical projection. The draw
/// for projection k is a pure function of (seed, k).
struct NoiseModel {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// Detection matrix Y (M_L x N_R) plus the acquisition that produced it.
struct BucketSignals {
  MatrixX<double> values;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  HybridSpec spec;
};

struct SplitPattern {
  MatrixX<double> plus;
  MatrixX<double> minus;
};

struct NormalizedPattern {
  MatrixX<double> scaled;  // values in [-1, 1], max |.| == 1
  double scale = 1.0;      // scaled * scale reproduces the input
};

SplitPattern split_pattern(const MatrixX<double>& pattern);

NormalizedPattern normalize_pattern(const MatrixX<double>& pattern);

/// The Gaussian draw used for physical projection `index`.
double projection_noise(const NoiseModel& noise, std::uint64_t index);

/// One physical projection: sum(pattern .* object) + noise draw `index`.
double project(const MatrixX<double>& pattern, const MatrixX<double>& object,
               const NoiseModel& noise, std::uint64_t index);

/// Number of physical projections per bucket for a scene range.
int projections_per_bucket(ValueRange range) noexcept;

/// Bucket value for a normalized signed pattern. Uses noise indices
/// base_index .. base_index + projections_per_bucket - 1.
double measure_bucket(const MatrixX<double>& pattern, const SceneImage& scene,
                      const NoiseModel& noise, std::uint64_t base_index);

/// Complex patterns cannot be projected; this overload always throws
/// UnsupportedPatternError unless every imaginary part is exactly zero.
double measure_bucket(const MatrixX<Complex>& pattern, const SceneImage& scene,
                      const NoiseModel& noise, std::uint64_t base_index);

struct AcquireOptions {
  unsigned workers = 1;
};

/// Simulates the full acquisition for every kept (m, n). Each pattern is
/// normalized to max-abs 1 before splitting and the bucket is scaled back, so
/// at sigma = 0 the result equals L_k X R_k^T.
BucketSignals acquire(const HybridSpec& spec, const SceneImage& scene, const NoiseModel& noise,
                      const AcquireOptions& options = {});

}  // namespace hgi
