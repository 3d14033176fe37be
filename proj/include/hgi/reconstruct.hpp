#pragma once

// Image recovery by inverse orthogonal transforms. No regularization or
// iteration: every route here is a fixed linear map of the bucket signals.

#include <Eigen/Dense>

#include <string>

#include "hgi/measurement.hpp"
#include "hgi/simulator.hpp"

namespace hgi {

template <typename Scalar>
struct ReconstructionResult {
  MatrixX<Scalar> image;  // full M x N even under truncation, never clipped
  HybridSpec spec;
  double residual_norm = 0.0;  // ||Y - L_k X' R_k^H||_F
};

namespace detail {

template <typename Scalar>
std::vector<ChainEntry> side_spec(const TruncatedTransform<Scalar>& t) {
  std::vector<ChainEntry> chain;
  const auto& f = t.factors();
  for (auto it = f.rbegin(); it != f.rend(); ++it) chain.push_back({*it, t.order(), t.order()});
  chain.back().kept_rows = t.kept_rows();
  return chain;
}

template <typename Derived>
void check_bucket_shape(const Eigen::MatrixBase<Derived>& y, Index rows, Index cols) {
  if (y.rows() != rows || y.cols() != cols) {
    throw ShapeError("bucket matrix is " + std::to_string(y.rows()) + "x" +
                     std::to_string(y.cols()) + " but the factors keep " + std::to_string(rows) +
                     "x" + std::to_string(cols) + " rows");
  }
}

}  // namespace detail

/// x' = A^H y for a dense measurement matrix.
template <typename Scalar, typename Derived>
VectorX<Scalar> reconstruct_1d(const MeasurementMatrix<Scalar>& a,
                               const Eigen::MatrixBase<Derived>& y) {
  if (y.cols() != 1 || y.rows() != a.rows()) {
    throw ShapeError("bucket vector has length " + std::to_string(y.size()) + ", expected " +
                     std::to_string(a.rows()));
  }
  return a.entries.adjoint() * y.template cast<Scalar>();
}

/// X' = L_t^H Y R_t, the orthogonal projection of the scene onto the kept
/// row spaces when Y is noiseless.
template <typename Scalar, typename Derived>
ReconstructionResult<Scalar> reconstruct_sub(const TruncatedTransform<Scalar>& left,
                                             const TruncatedTransform<Scalar>& right,
                                             const Eigen::MatrixBase<Derived>& y) {
  detail::check_bucket_shape(y, left.kept_rows(), right.kept_rows());
  const MatrixX<Scalar> yy = y.template cast<Scalar>();
  ReconstructionResult<Scalar> out;
  out.image = left.matrix().adjoint() * yy * right.matrix();
  out.residual_norm = (yy - left.matrix() * out.image * right.matrix().adjoint()).norm();
  out.spec.left_chain = detail::side_spec(left);
  out.spec.right_chain = detail::side_spec(right);
  return out;
}

/// X' = L^H Y R for full-order factors.
template <typename Scalar, typename Derived>
ReconstructionResult<Scalar> reconstruct_2d(const Transform<Scalar>& left,
                                            const Transform<Scalar>& right,
                                            const Eigen::MatrixBase<Derived>& y) {
  detail::check_bucket_shape(y, left.order(), right.order());
  return reconstruct_sub(TruncatedTransform<Scalar>(left, left.order()),
                         TruncatedTransform<Scalar>(right, right.order()), y);
}

template <typename Scalar>
ReconstructionResult<Scalar> reconstruct_2d(const Transform<Scalar>& left,
                                            const Transform<Scalar>& right,
                                            const BucketSignals& y) {
  return reconstruct_2d(left, right, y.values);
}

/// Inverts a chained forward model factor by factor:
/// X' = L1^H L2^H ... Lj^H Y Rk ... R2 R1, where the outermost factors are
/// truncated to the kept rows.
template <typename Scalar = double, typename Derived>
ReconstructionResult<Scalar> reconstruct_chain(const HybridSpec& spec,
                                               const Eigen::MatrixBase<Derived>& y) {
  validate(spec);
  const HybridSpec padded = pad_chains(spec);
  detail::check_bucket_shape(y, spec.left_kept(), spec.right_kept());

  const MatrixX<Scalar> yy = y.template cast<Scalar>();
  MatrixX<Scalar> x = yy;
  for (auto it = padded.left_chain.rbegin(); it != padded.left_chain.rend(); ++it) {
    const MatrixX<Scalar> factor = make_transform<Scalar>(it->kind, it->order).matrix();
    x = factor.topRows(it->kept_rows).adjoint() * x;
  }
  for (auto it = padded.right_chain.rbegin(); it != padded.right_chain.rend(); ++it) {
    const MatrixX<Scalar> factor = make_transform<Scalar>(it->kind, it->order).matrix();
    x = x * factor.topRows(it->kept_rows);
  }

  const auto [left, right] = compose_chain<Scalar>(spec);
  ReconstructionResult<Scalar> out;
  out.residual_norm = (yy - left.matrix() * x * right.matrix().adjoint()).norm();
  out.image = std::move(x);
  out.spec = spec;
  return out;
}

template <typename Scalar = double>
ReconstructionResult<Scalar> reconstruct_chain(const BucketSignals& y) {
  return reconstruct_chain<Scalar>(y.spec, y.values);
}

}  // namespace hgi
