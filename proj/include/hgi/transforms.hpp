#pragma once

// Orthonormal transform matrices: Walsh-Hadamard (Sylvester order), DCT-II,
// Haar and the unitary DFT. All builders are dense and desk-scale; orders
// are capped at 2^12 for the power-of-two kinds.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <string_view>
#include <type_traits>

#include "hgi/errors.hpp"

namespace hgi {

using Index = Eigen::Index;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};
template <typename T>
inline constexpr bool is_complex_v = is_complex<T>::value;

enum class TransformKind { Hadamard, DCT, Haar, DFT, Identity };

inline constexpr int kMaxExponent = 12;

std::string_view kind_name(TransformKind kind);
// Single-letter tag used in hybridization set names: D, C, H, F, I.
char kind_letter(TransformKind kind);
// Accepts the names returned by kind_name(); throws ParameterError otherwise.
TransformKind parse_kind(std::string_view name);

/// An orthonormal (unitary for complex scalars) square matrix together with
/// the transform it was built from. Builders only emit normalized matrices.
template <typename Scalar>
class Transform {
 public:
  using MatrixType = MatrixX<Scalar>;

  Transform(TransformKind kind, MatrixType entries) : kind_(kind), entries_(std::move(entries)) {
    if (entries_.rows() < 1 || entries_.rows() != entries_.cols()) {
      throw ShapeError("transform matrix must be square with order >= 1");
    }
  }

  TransformKind kind() const noexcept { return kind_; }
  Index order() const noexcept { return entries_.rows(); }
  bool normalized() const noexcept { return true; }
  const MatrixType& matrix() const noexcept { return entries_; }

  template <typename Other>
  Transform<Other> cast() const {
    static_assert(!(is_complex_v<Scalar> && !is_complex_v<Other>),
                  "narrowing a complex transform to a real scalar");
    return Transform<Other>(kind_, entries_.template cast<Other>());
  }

 private:
  TransformKind kind_;
  MatrixType entries_;
};

using TransformMatrix = Transform<double>;
using ComplexTransformMatrix = Transform<Complex>;

namespace detail {

inline void check_exponent(int n) {
  if (n < 1 || n > kMaxExponent) {
    throw InvalidOrderError("exponent must lie in [1, " + std::to_string(kMaxExponent) +
                            "], got " + std::to_string(n));
  }
}

inline void check_order(Index order) {
  if (order < 1) {
    throw InvalidOrderError("order must be >= 1, got " + std::to_string(order));
  }
}

// Returns n with 2^n == order, or throws.
inline int power_of_two_exponent(Index order) {
  if (order < 2 || (order & (order - 1)) != 0) {
    throw InvalidOrderError("order must be a power of two >= 2, got " + std::to_string(order));
  }
  int n = 0;
  while ((Index{1} << n) < order) ++n;
  check_exponent(n);
  return n;
}

}  // namespace detail

/// Sylvester-recursive Hadamard matrix of order 2^n with a 1/sqrt(2) factor
/// applied at every doubling, so every entry is +-2^(-n/2).
template <typename Scalar = double>
Transform<Scalar> build_hadamard(int n) {
  detail::check_exponent(n);
  const double s = 1.0 / std::sqrt(2.0);
  MatrixX<Scalar> h = MatrixX<Scalar>::Ones(1, 1);
  for (int level = 1; level <= n; ++level) {
    const Index half = h.rows();
    MatrixX<Scalar> next(2 * half, 2 * half);
    next.topLeftCorner(half, half) = h;
    next.topRightCorner(half, half) = h;
    next.bottomLeftCorner(half, half) = h;
    next.bottomRightCorner(half, half) = -h;
    h = Scalar(s) * next;
  }
  return Transform<Scalar>(TransformKind::Hadamard, std::move(h));
}

/// Orthonormal DCT-II: C(r, c) = w_r cos(r pi (c + 1/2) / M), w_0 = 1/sqrt(M),
/// w_r = sqrt(2/M) otherwise.
template <typename Scalar = double>
Transform<Scalar> build_dct(Index order) {
  detail::check_order(order);
  const double m = static_cast<double>(order);
  MatrixX<Scalar> c(order, order);
  for (Index r = 0; r < order; ++r) {
    const double w = r == 0 ? 1.0 / std::sqrt(m) : std::sqrt(2.0 / m);
    for (Index col = 0; col < order; ++col) {
      c(r, col) = Scalar(w * std::cos(static_cast<double>(r) * std::numbers::pi *
                                      (static_cast<double>(col) + 0.5) / m));
    }
  }
  return Transform<Scalar>(TransformKind::DCT, std::move(c));
}

/// Haar rows before normalization, entries in {-1, 0, 1}. Row 0 is the
/// constant vector; row 2^j + k holds the level-j, shift-k wavelet, which is
/// +1 on the first half and -1 on the second half of the block
/// [k 2^(n-j), (k+1) 2^(n-j)).
inline MatrixX<double> haar_unnormalized(int n) {
  detail::check_exponent(n);
  const Index order = Index{1} << n;
  MatrixX<double> h = MatrixX<double>::Zero(order, order);
  h.row(0).setOnes();
  for (int j = 0; j < n; ++j) {
    const Index width = Index{1} << (n - j);
    for (Index k = 0; k < (Index{1} << j); ++k) {
      const Index row = (Index{1} << j) + k;
      const Index start = k * width;
      h.row(row).segment(start, width / 2).setConstant(1.0);
      h.row(row).segment(start + width / 2, width / 2).setConstant(-1.0);
    }
  }
  return h;
}

/// Haar matrix of order 2^n with every row scaled to unit Euclidean norm.
template <typename Scalar = double>
Transform<Scalar> build_haar(int n) {
  MatrixX<double> h = haar_unnormalized(n);
  h.rowwise().normalize();
  return Transform<Scalar>(TransformKind::Haar, h.cast<Scalar>());
}

/// Unitary DFT, F(r, c) = exp(2 pi i r c / N) / sqrt(N).
inline ComplexTransformMatrix build_dft(Index order) {
  detail::check_order(order);
  const double scale = 1.0 / std::sqrt(static_cast<double>(order));
  MatrixX<Complex> f(order, order);
  for (Index r = 0; r < order; ++r) {
    for (Index c = 0; c < order; ++c) {
      // Reduce the phase index modulo N before scaling to keep the argument small.
      const double phase = 2.0 * std::numbers::pi * static_cast<double>((r * c) % order) /
                           static_cast<double>(order);
      f(r, c) = std::polar(scale, phase);
    }
  }
  return ComplexTransformMatrix(TransformKind::DFT, std::move(f));
}

template <typename Scalar = double>
Transform<Scalar> build_identity(Index order) {
  detail::check_order(order);
  return Transform<Scalar>(TransformKind::Identity, MatrixX<Scalar>::Identity(order, order));
}

/// Builds any kind at the requested order. Requesting a DFT with a real
/// scalar throws UnsupportedPatternError.
template <typename Scalar = double>
Transform<Scalar> make_transform(TransformKind kind, Index order) {
  switch (kind) {
    case TransformKind::Hadamard:
      return build_hadamard<Scalar>(detail::power_of_two_exponent(order));
    case TransformKind::Haar:
      return build_haar<Scalar>(detail::power_of_two_exponent(order));
    case TransformKind::DCT:
      return build_dct<Scalar>(order);
    case TransformKind::Identity:
      return build_identity<Scalar>(order);
    case TransformKind::DFT:
      if constexpr (is_complex_v<Scalar>) {
        return build_dft(order).template cast<Scalar>();
      } else {
        throw UnsupportedPatternError("the DFT is complex-valued; use a complex scalar type");
      }
  }
  throw ParameterError("unknown transform kind");
}

/// max |T T^H - I| over all entries.
template <typename Derived>
double orthonormality_defect(const Eigen::MatrixBase<Derived>& t) {
  using Scalar = typename Derived::Scalar;
  const MatrixX<Scalar> gram = t * t.adjoint();
  return (gram - MatrixX<Scalar>::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

template <typename Scalar>
double orthonormality_defect(const Transform<Scalar>& t) {
  return orthonormality_defect(t.matrix());
}

}  // namespace hgi
