#pragma once

// Bipolar/real hypervector algebra. Hypervectors are dense Eigen column vectors; the
// elementwise operations are templated on the Eigen expression type so they accept blocks,
// columns and maps without copying.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cmlhdc/error.hpp"
#include "cmlhdc/rng.hpp"

namespace cmlhdc {

using Real = double;

template <typename Scalar>
using HypervectorT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Hypervector = HypervectorT<Real>;
using Matrix = MatrixT<Real>;
using Index = Eigen::Index;

/// Default noise floor for cleanup at d = 1000.
inline constexpr Real kDefaultTheta = 0.1;
inline constexpr Index kDefaultDim = 1000;

/// Each element independently +1 or -1 with equal probability.
template <typename Scalar = Real>
HypervectorT<Scalar> random_bipolar(Index d, Rng& rng) {
  if (d < 1) throw Error(ErrorKind::invalid_dimension, "hypervector dimension must be >= 1");
  HypervectorT<Scalar> v(d);
  std::uint64_t bits = 0;
  for (Index i = 0; i < d; ++i) {
    if (i % 64 == 0) bits = rng();
    v[i] = (bits & 1U) ? Scalar(1) : Scalar(-1);
    bits >>= 1U;
  }
  return v;
}

template <typename Scalar = Real>
HypervectorT<Scalar> random_gaussian(Index d, Scalar sigma, Rng& rng) {
  if (d < 1) throw Error(ErrorKind::invalid_dimension, "hypervector dimension must be >= 1");
  std::normal_distribution<Scalar> normal(Scalar(0), sigma);
  HypervectorT<Scalar> v(d);
  for (Index i = 0; i < d; ++i) v[i] = normal(rng);
  return v;
}

template <typename Derived>
bool is_bipolar(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  return (x.array() == Scalar(1) || x.array() == Scalar(-1)).all();
}

template <typename DerivedX, typename DerivedY>
void require_same_dim(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedY>& y) {
  if (x.size() != y.size()) {
    throw Error(ErrorKind::invalid_argument, "hypervector dimension mismatch: " +
                                                 std::to_string(x.size()) + " vs " +
                                                 std::to_string(y.size()));
  }
}

/// Cosine similarity x.y / (|x||y|). Throws undefined_similarity on a zero-norm input.
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar cosine(const Eigen::MatrixBase<DerivedX>& x,
                                 const Eigen::MatrixBase<DerivedY>& y) {
  require_same_dim(x, y);
  const auto nx = x.norm();
  const auto ny = y.norm();
  if (nx == 0 || ny == 0) {
    throw Error(ErrorKind::undefined_similarity, "cosine similarity of a zero-norm hypervector");
  }
  auto c = x.dot(y) / (nx * ny);
  return std::clamp(c, decltype(c)(-1), decltype(c)(1));
}

/// Elementwise -1/0/+1; sign(0) stays 0.
template <typename Derived>
typename Derived::PlainObject sign(const Eigen::MatrixBase<Derived>& x) {
  return x.array().sign().matrix();
}

/// Elementwise product. Self-inverse on bipolar operands.
template <typename DerivedX, typename DerivedY>
typename DerivedX::PlainObject bind(const Eigen::MatrixBase<DerivedX>& x,
                                    const Eigen::MatrixBase<DerivedY>& y) {
  require_same_dim(x, y);
  return x.cwiseProduct(y);
}

/// Circular shift: element i moves to (i + k) mod d. Negative k shifts the other way.
template <typename Derived>
typename Derived::PlainObject permute(const Eigen::MatrixBase<Derived>& x, long long k) {
  const Index d = x.size();
  typename Derived::PlainObject out(d);
  if (d == 0) return out;
  const Index shift = static_cast<Index>(((k % d) + d) % d);
  out.tail(d - shift) = x.head(d - shift);
  out.head(shift) = x.tail(shift);
  return out;
}

/// sgn of the elementwise sum. An even number of summands gets a fresh random bipolar
/// tie-breaker appended, so bipolar inputs always give a bipolar result.
Hypervector bundle(const std::vector<Hypervector>& vs, Rng& rng);

/// Labelled hypervectors stored column-wise.
class Dictionary {
 public:
  Dictionary() = default;
  explicit Dictionary(Index dim) : vectors_(dim, 0) {}
  Dictionary(std::vector<std::string> labels, Matrix vectors);

  void add(const std::string& label, const Hypervector& v);

  [[nodiscard]] Index size() const noexcept { return vectors_.cols(); }
  [[nodiscard]] Index dim() const noexcept { return vectors_.rows(); }
  [[nodiscard]] bool empty() const noexcept { return size() == 0; }
  [[nodiscard]] const std::string& label(Index i) const { return labels_.at(static_cast<std::size_t>(i)); }
  [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }
  [[nodiscard]] auto vector(Index i) const { return vectors_.col(i); }
  [[nodiscard]] const Matrix& matrix() const noexcept { return vectors_; }

  [[nodiscard]] std::optional<Index> index_of(const std::string& label) const;
  /// Throws invalid_argument for an unknown label.
  [[nodiscard]] Hypervector at(const std::string& label) const;

 private:
  std::vector<std::string> labels_;
  Matrix vectors_;
};

/// Largest cosine between query and any column; the "is it a known state" test.
/// Zero-norm columns score 0. Returns 0 for a zero query.
Real max_similarity(const Eigen::Ref<const Hypervector>& query, const Eigen::Ref<const Matrix>& columns);

/// Index of the most similar column when that similarity is >= theta. Ties go to the lowest
/// index. A zero query recovers nothing.
std::optional<Index> recover_index(const Eigen::Ref<const Hypervector>& query,
                                   const Eigen::Ref<const Matrix>& columns, Real theta);

std::optional<std::string> recover(const Eigen::Ref<const Hypervector>& query, const Dictionary& dict,
                                   Real theta);

}  // namespace cmlhdc
