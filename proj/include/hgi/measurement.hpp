#pragma once

// Kronecker-structured measurement model. An M x N scene X is measured
// through a left factor L (acting on the M rows) and a right factor R
// (acting on the N columns): Y = L X R^H, or in vectorized form
// vec_rows(Y) = (L (x) conj(R)) vec_rows(X). For real factors conj(R) = R.

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hgi/errors.hpp"
#include "hgi/transforms.hpp"

namespace hgi {

// Largest dense measurement matrix kron() will materialize (entries).
inline constexpr std::uint64_t kMaxMeasurementEntries = std::uint64_t{1} << 28;

/// One factor in a transform chain. kept_rows < order is only legal on the
/// outermost entry of a side.
struct ChainEntry {
  TransformKind kind = TransformKind::Identity;
  Index order = 1;
  Index kept_rows = 1;

  friend bool operator==(const ChainEntry&, const ChainEntry&) = default;
};

/// A hybridization set. Chains are listed innermost first: left_chain[0] is
/// the factor applied to the scene first, so the effective left operator is
/// left_chain.back() * ... * left_chain[0].
struct HybridSpec {
  std::vector<ChainEntry> left_chain;
  std::vector<ChainEntry> right_chain;

  /// The two-matrix case with optional truncation.
  static HybridSpec pair(TransformKind left, Index rows, TransformKind right, Index cols,
                         Index left_kept = 0, Index right_kept = 0);

  Index rows() const;       // scene height M
  Index cols() const;       // scene width N
  Index left_kept() const;  // M_L
  Index right_kept() const; // N_R
  double sampling_rate() const;
  bool uses_dft() const;
  // e.g. "D-C" for a Hadamard/DCT pair, "CD-H" for a left chain DCT*Hadamard.
  std::string name() const;

  friend bool operator==(const HybridSpec&, const HybridSpec&) = default;
};

/// Throws CompositionError when a side is empty, orders disagree within a
/// side, or an inner factor is truncated; InvalidOrderError on bad orders.
void validate(const HybridSpec& spec);

/// Pads the shorter chain with Identity factors on the inner end so both
/// sides have equal length.
HybridSpec pad_chains(HybridSpec spec);

/// The first kept_rows rows of a full-order orthonormal operator.
template <typename Scalar>
class TruncatedTransform {
 public:
  TruncatedTransform(const Transform<Scalar>& source, Index kept_rows)
      : TruncatedTransform({source.kind()}, source.matrix(), kept_rows) {}

  TruncatedTransform(std::vector<TransformKind> factors, MatrixX<Scalar> full, Index kept_rows)
      : factors_(std::move(factors)), full_(std::move(full)), kept_rows_(kept_rows) {
    if (full_.rows() != full_.cols() || full_.rows() < 1) {
      throw ShapeError("truncated transform source must be square");
    }
    if (kept_rows_ < 1 || kept_rows_ > full_.rows()) {
      throw ParameterError("kept_rows must lie in [1, " + std::to_string(full_.rows()) +
                           "], got " + std::to_string(kept_rows_));
    }
    entries_ = full_.topRows(kept_rows_);
  }

  Index order() const noexcept { return full_.cols(); }
  Index kept_rows() const noexcept { return kept_rows_; }
  // kept_rows x order
  const MatrixX<Scalar>& matrix() const noexcept { return entries_; }
  const MatrixX<Scalar>& full() const noexcept { return full_; }
  // Factor kinds, outermost first.
  const std::vector<TransformKind>& factors() const noexcept { return factors_; }

 private:
  std::vector<TransformKind> factors_;
  MatrixX<Scalar> full_;
  Index kept_rows_;
  MatrixX<Scalar> entries_;
};

/// Dense (M_L N_R) x (M N) matrix with entry (m N_R + n, i N + j) equal to
/// L(m, i) conj(R(n, j)).
template <typename Scalar>
struct MeasurementMatrix {
  MatrixX<Scalar> entries;
  std::vector<TransformKind> left_factors;
  std::vector<TransformKind> right_factors;
  Index left_rows = 0, left_cols = 0, right_rows = 0, right_cols = 0;

  Index rows() const noexcept { return entries.rows(); }
  Index cols() const noexcept { return entries.cols(); }
};

template <typename Derived>
VectorX<typename Derived::Scalar> vec_rows(const Eigen::MatrixBase<Derived>& x) {
  return x.template reshaped<Eigen::RowMajor>();
}

template <typename Derived>
MatrixX<typename Derived::Scalar> unvec(const Eigen::MatrixBase<Derived>& v, Index rows,
                                        Index cols) {
  if (rows < 1 || cols < 1 || v.size() != rows * cols) {
    throw ShapeError("cannot reshape a vector of length " + std::to_string(v.size()) + " to " +
                     std::to_string(rows) + "x" + std::to_string(cols));
  }
  return v.template reshaped<Eigen::RowMajor>(rows, cols);
}

template <typename Scalar>
MeasurementMatrix<Scalar> kron(const TruncatedTransform<Scalar>& left,
                               const TruncatedTransform<Scalar>& right) {
  const MatrixX<Scalar>& l = left.matrix();
  const MatrixX<Scalar> r = right.matrix().conjugate();
  const auto entries = static_cast<std::uint64_t>(l.rows()) * static_cast<std::uint64_t>(r.rows()) *
                       static_cast<std::uint64_t>(l.cols()) * static_cast<std::uint64_t>(r.cols());
  if (entries > kMaxMeasurementEntries) {
    throw ResourceError("measurement matrix would hold " + std::to_string(entries) +
                        " entries, above the cap of " + std::to_string(kMaxMeasurementEntries));
  }
  MeasurementMatrix<Scalar> a;
  a.left_factors = left.factors();
  a.right_factors = right.factors();
  a.left_rows = l.rows();
  a.left_cols = l.cols();
  a.right_rows = r.rows();
  a.right_cols = r.cols();
  a.entries.resize(l.rows() * r.rows(), l.cols() * r.cols());
  for (Index m = 0; m < l.rows(); ++m) {
    for (Index i = 0; i < l.cols(); ++i) {
      a.entries.block(m * r.rows(), i * r.cols(), r.rows(), r.cols()) = l(m, i) * r;
    }
  }
  return a;
}

template <typename Scalar>
MeasurementMatrix<Scalar> kron(const Transform<Scalar>& left, const Transform<Scalar>& right) {
  return kron(TruncatedTransform<Scalar>(left, left.order()),
              TruncatedTransform<Scalar>(right, right.order()));
}

/// The projected pattern for bucket (m, n): the outer product of row m of L
/// with the conjugate of row n of R, an M x N image.
template <typename Scalar>
MatrixX<Scalar> pattern(const TruncatedTransform<Scalar>& left,
                        const TruncatedTransform<Scalar>& right, Index m, Index n) {
  if (m < 0 || m >= left.kept_rows() || n < 0 || n >= right.kept_rows()) {
    throw IndexError("pattern index (" + std::to_string(m) + ", " + std::to_string(n) +
                     ") outside " + std::to_string(left.kept_rows()) + "x" +
                     std::to_string(right.kept_rows()));
  }
  return left.matrix().row(m).transpose() * right.matrix().row(n).conjugate();
}

/// Ideal bucket signals Y = L X R^H.
template <typename Scalar, typename Derived>
MatrixX<Scalar> forward_model(const TruncatedTransform<Scalar>& left,
                              const TruncatedTransform<Scalar>& right,
                              const Eigen::MatrixBase<Derived>& x) {
  if (x.rows() != left.order() || x.cols() != right.order()) {
    throw ShapeError("scene is " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                     " but the factors expect " + std::to_string(left.order()) + "x" +
                     std::to_string(right.order()));
  }
  return left.matrix() * x.template cast<Scalar>() * right.matrix().adjoint();
}

namespace detail {

template <typename Scalar>
TruncatedTransform<Scalar> compose_side(const std::vector<ChainEntry>& chain) {
  const Index order = chain.front().order;
  MatrixX<Scalar> product = MatrixX<Scalar>::Identity(order, order);
  std::vector<TransformKind> factors;
  for (const ChainEntry& entry : chain) {
    product = make_transform<Scalar>(entry.kind, entry.order).matrix() * product;
    factors.insert(factors.begin(), entry.kind);
  }
  return TruncatedTransform<Scalar>(std::move(factors), std::move(product), chain.back().kept_rows);
}

}  // namespace detail

/// Multiplies out each side of a chain spec. The outermost factor's
/// kept_rows truncates the product.
template <typename Scalar = double>
std::pair<TruncatedTransform<Scalar>, TruncatedTransform<Scalar>> compose_chain(
    const HybridSpec& spec) {
  validate(spec);
  const HybridSpec padded = pad_chains(spec);
  return {detail::compose_side<Scalar>(padded.left_chain),
          detail::compose_side<Scalar>(padded.right_chain)};
}

/// Element counts of the dense 1D measurement matrix versus the two 2D
/// factors for an M x N scene. The "left" count is the factor acting on the
/// N-length dimension.
struct Footprint {
  std::uint64_t one_d_matrix_entries = 0;
  std::uint64_t two_d_left_entries = 0;
  std::uint64_t two_d_right_entries = 0;
};

Footprint footprint_report(Index rows, Index cols);

}  // namespace hgi
