#include "cmlhdc/hdc.hpp"

#include <utility>

namespace cmlhdc {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::invalid_dimension: return "invalid-dimension";
    case ErrorKind::undefined_similarity: return "undefined-similarity";
    case ErrorKind::training_failure: return "training-failure";
    case ErrorKind::illegal_move: return "illegal-move";
    case ErrorKind::generation_failure: return "generation-failure";
    case ErrorKind::parse_error: return "parse-error";
    case ErrorKind::io_error: return "io-error";
    case ErrorKind::verification_failure: return "verification-failure";
    case ErrorKind::missing_model: return "missing-model";
  }
  return "unknown";
}

Hypervector bundle(const std::vector<Hypervector>& vs, Rng& rng) {
  if (vs.empty()) throw Error(ErrorKind::invalid_argument, "bundle of an empty list");
  Hypervector sum = vs.front();
  for (std::size_t i = 1; i < vs.size(); ++i) {
    require_same_dim(sum, vs[i]);
    sum += vs[i];
  }
  if (vs.size() % 2 == 0) sum += random_bipolar(sum.size(), rng);
  return sign(sum);
}

Dictionary::Dictionary(std::vector<std::string> labels, Matrix vectors)
    : labels_(std::move(labels)), vectors_(std::move(vectors)) {
  if (static_cast<Index>(labels_.size()) != vectors_.cols()) {
    throw Error(ErrorKind::invalid_argument, "dictionary label count does not match vector count");
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (labels_[i] == labels_[j]) throw Error(ErrorKind::invalid_argument, "duplicate dictionary label " + labels_[i]);
    }
  }
}

void Dictionary::add(const std::string& label, const Hypervector& v) {
  if (index_of(label)) throw Error(ErrorKind::invalid_argument, "duplicate dictionary label " + label);
  if (size() == 0 && dim() == 0) vectors_.resize(v.size(), 0);
  if (v.size() != dim()) throw Error(ErrorKind::invalid_argument, "dictionary entry dimension mismatch");
  vectors_.conservativeResize(Eigen::NoChange, size() + 1);
  vectors_.col(size() - 1) = v;
  labels_.push_back(label);
}

std::optional<Index> Dictionary::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return static_cast<Index>(i);
  }
  return std::nullopt;
}

Hypervector Dictionary::at(const std::string& label) const {
  auto i = index_of(label);
  if (!i) throw Error(ErrorKind::invalid_argument, "unknown label " + label);
  return vectors_.col(*i);
}

namespace {

// Cosine of query against every column; zero-norm columns score 0.
Eigen::VectorXd similarities(const Eigen::Ref<const Hypervector>& query, const Eigen::Ref<const Matrix>& columns) {
  if (query.size() != columns.rows()) {
    throw Error(ErrorKind::invalid_argument, "query dimension " + std::to_string(query.size()) +
                                                 " does not match dictionary dimension " +
                                                 std::to_string(columns.rows()));
  }
  const Real qn = query.norm();
  Eigen::VectorXd sims = Eigen::VectorXd::Zero(columns.cols());
  if (qn == 0) return sims;
  const Eigen::VectorXd dots = columns.transpose() * query;
  const Eigen::VectorXd norms = columns.colwise().norm().transpose();
  for (Index i = 0; i < columns.cols(); ++i) {
    if (norms[i] > 0) sims[i] = dots[i] / (norms[i] * qn);
  }
  return sims;
}

}  // namespace

Real max_similarity(const Eigen::Ref<const Hypervector>& query, const Eigen::Ref<const Matrix>& columns) {
  if (columns.cols() == 0) return 0;
  return similarities(query, columns).maxCoeff();
}

std::optional<Index> recover_index(const Eigen::Ref<const Hypervector>& query,
                                   const Eigen::Ref<const Matrix>& columns, Real theta) {
  if (columns.cols() == 0) throw Error(ErrorKind::invalid_argument, "recovery over an empty dictionary");
  if (query.norm() == 0) {
    if (query.size() != columns.rows()) throw Error(ErrorKind::invalid_argument, "query dimension mismatch");
    return std::nullopt;
  }
  const Eigen::VectorXd sims = similarities(query, columns);
  Index best = 0;
  for (Index i = 1; i < sims.size(); ++i) {
    if (sims[i] > sims[best]) best = i;
  }
  if (sims[best] < theta) return std::nullopt;
  return best;
}

std::optional<std::string> recover(const Eigen::Ref<const Hypervector>& query, const Dictionary& dict,
                                   Real theta) {
  auto i = recover_index(query, dict.matrix(), theta);
  if (!i) return std::nullopt;
  return dict.label(*i);
}

}  // namespace cmlhdc
