#include "hgi/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace hgi {

namespace {

void check_same_shape(const MatrixX<double>& a, const MatrixX<double>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("pattern is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                     " but the object is " + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()));
  }
}

// Object halves are computed once per acquisition and reused for every bucket.
struct SplitScene {
  ValueRange range;
  MatrixX<double> whole;
  MatrixX<double> plus;
  MatrixX<double> minus;
};

SplitScene split_scene(const SceneImage& scene) {
  SplitScene s{scene.range(), scene.values(), {}, {}};
  if (scene.range() == ValueRange::Signed) {
    SplitPattern halves = split_pattern(scene.values());
    s.plus = std::move(halves.plus);
    s.minus = std::move(halves.minus);
  }
  return s;
}

double bucket_from_halves(const SplitPattern& pattern, const SplitScene& scene,
                          const NoiseModel& noise, std::uint64_t base) {
  if (scene.range == ValueRange::Signed) {
    return project(pattern.plus, scene.plus, noise, base) -
           project(pattern.plus, scene.minus, noise, base + 1) -
           project(pattern.minus, scene.plus, noise, base + 2) +
           project(pattern.minus, scene.minus, noise, base + 3);
  }
  return project(pattern.plus, scene.whole, noise, base) -
         project(pattern.minus, scene.whole, noise, base + 1);
}

}  // namespace

SplitPattern split_pattern(const MatrixX<double>& pattern) {
  if (pattern.size() == 0) throw ShapeError("empty pattern");
  if (!pattern.allFinite() || pattern.cwiseAbs().maxCoeff() > 1.0) {
    throw RangeError("pattern values must lie in [-1, 1]; normalize the pattern first");
  }
  return {(1.0 + pattern.array()).matrix() / 2.0, (1.0 - pattern.array()).matrix() / 2.0};
}

NormalizedPattern normalize_pattern(const MatrixX<double>& pattern) {
  const double peak = pattern.size() == 0 ? 0.0 : pattern.cwiseAbs().maxCoeff();
  if (!(peak > 0.0) || !std::isfinite(peak)) {
    throw DegeneratePatternError("cannot normalize an all-zero or non-finite pattern");
  }
  return {pattern / peak, peak};
}

double projection_noise(const NoiseModel& noise, std::uint64_t index) {
  if (noise.sigma <= 0.0) return 0.0;
  std::seed_seq seq{static_cast<std::uint32_t>(noise.seed), static_cast<std::uint32_t>(noise.seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 engine(seq);
  std::normal_distribution<double> gauss(0.0, noise.sigma);
  return gauss(engine);
}

double project(const MatrixX<double>& pattern, const MatrixX<double>& object,
               const NoiseModel& noise, std::uint64_t index) {
  check_same_shape(pattern, object);
  return pattern.cwiseProduct(object).sum() + projection_noise(noise, index);
}

int projections_per_bucket(ValueRange range) noexcept {
  return range == ValueRange::Signed ? 4 : 2;
}

double measure_bucket(const MatrixX<double>& pattern, const SceneImage& scene,
                      const NoiseModel& noise, std::uint64_t base_index) {
  check_same_shape(pattern, scene.values());
  return bucket_from_halves(split_pattern(pattern), split_scene(scene), noise, base_index);
}

double measure_bucket(const MatrixX<Complex>& pattern, const SceneImage& scene,
                      const NoiseModel& noise, std::uint64_t base_index) {
  if (pattern.size() > 0 && pattern.imag().cwiseAbs().maxCoeff() != 0.0) {
    throw UnsupportedPatternError("complex-valued patterns cannot be projected");
  }
  return measure_bucket(MatrixX<double>(pattern.real()), scene, noise, base_index);
}

BucketSignals acquire(const HybridSpec& spec, const SceneImage& scene, const NoiseModel& noise,
                      const AcquireOptions& options) {
  validate(spec);
  if (spec.uses_dft()) {
    throw UnsupportedPatternError("DFT patterns are complex and cannot be physically projected");
  }
  if (noise.sigma < 0.0) throw ParameterError("noise sigma must be >= 0");
  if (spec.rows() != scene.rows() || spec.cols() != scene.cols()) {
    throw ShapeError("hybrid spec expects a " + std::to_string(spec.rows()) + "x" +
                     std::to_string(spec.cols()) + " scene, got " + std::to_string(scene.rows()) +
                     "x" + std::to_string(scene.cols()));
  }

  const auto [left, right] = compose_chain<double>(spec);
  const SplitScene split = split_scene(scene);
  const Index kept_l = left.kept_rows();
  const Index kept_r = right.kept_rows();
  const auto per_bucket = static_cast<std::uint64_t>(projections_per_bucket(scene.range()));

  BucketSignals out;
  out.values.resize(kept_l, kept_r);
  out.noise_sigma = noise.sigma;
  out.seed = noise.seed;
  out.spec = spec;

  const Index total = kept_l * kept_r;
  auto run_range = [&](Index begin, Index end) {
    for (Index k = begin; k < end; ++k) {
      const Index m = k / kept_r;
      const Index n = k % kept_r;
      const NormalizedPattern p = normalize_pattern(pattern(left, right, m, n));
      const double raw = bucket_from_halves(split_pattern(p.scaled), split, noise,
                                            static_cast<std::uint64_t>(k) * per_bucket);
      out.values(m, n) = raw * p.scale;
    }
  };

  const auto workers = static_cast<Index>(std::clamp<unsigned>(options.workers, 1u, 256u));
  if (workers == 1 || total < 2) {
    run_range(0, total);
  } else {
    // Each worker writes a disjoint set of entries; noise is indexed by k, so
    // the result does not depend on the partition.
    const Index chunk = (total + workers - 1) / workers;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    {
      std::vector<std::jthread> pool;
      for (Index w = 0; w * chunk < total; ++w) {
        pool.emplace_back([&, w] {
          try {
            run_range(w * chunk, std::min(total, (w + 1) * chunk));
          } catch (...) {
            errors[static_cast<std::size_t>(w)] = std::current_exception();
          }
        });
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  return out;
}

}  // namespace hgi
