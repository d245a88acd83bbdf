#pragma once

// Cognitive map learner: node states S (d x n), edge actions A (d x e) and gating G (e x n)
// for a directed graph. Plans by pseudo-inverse utility and gated winner-take-all.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cmlhdc/hdc.hpp"

namespace cmlhdc {

struct DirectedEdge {
  Index from = 0;
  Index to = 0;

  friend bool operator==(const DirectedEdge&, const DirectedEdge&) = default;
};

class CmlGraph {
 public:
  CmlGraph() = default;
  /// Empty weights means every edge has weight 1. Rejects self-loops, duplicate edges and
  /// out-of-range node indices.
  CmlGraph(std::vector<std::string> node_labels, std::vector<DirectedEdge> edges,
           std::vector<Real> weights = {});

  /// Both directions of every listed pair, in listing order (forward edge first).
  static CmlGraph from_undirected(std::vector<std::string> node_labels,
                                  const std::vector<std::pair<std::string, std::string>>& pairs);

  [[nodiscard]] Index n() const noexcept { return static_cast<Index>(labels_.size()); }
  [[nodiscard]] Index e() const noexcept { return static_cast<Index>(edges_.size()); }
  [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }
  [[nodiscard]] const std::vector<DirectedEdge>& edges() const noexcept { return edges_; }
  [[nodiscard]] const std::vector<Real>& weights() const noexcept { return weights_; }
  [[nodiscard]] const std::string& label(Index i) const { return labels_.at(static_cast<std::size_t>(i)); }
  [[nodiscard]] std::optional<Index> index_of(const std::string& label) const;
  /// Throws invalid_argument for unknown labels.
  [[nodiscard]] Index require_index(const std::string& label) const;

  friend bool operator==(const CmlGraph&, const CmlGraph&) = default;

 private:
  std::vector<std::string> labels_;
  std::vector<DirectedEdge> edges_;
  std::vector<Real> weights_;
};

/// Breadth-first hop distance between nodes; -1 when unreachable. Edges whose gate is zero in
/// `gating` (if given) are skipped.
std::vector<std::vector<int>> bfs_distances(const CmlGraph& graph, const Matrix* gating = nullptr);

/// Moore-Penrose pseudo-inverse by SVD; singular values below rcond * sigma_max count as zero.
Matrix pseudo_inverse(const Eigen::Ref<const Matrix>& a, Real rcond = 1e-10);

/// Gated winner-take-all. Among indices with a nonzero gate, the one maximizing gate * utility,
/// negative maxima included. Ties go to the lowest index; an all-zero gate selects nothing.
std::optional<Index> select_action(const Eigen::Ref<const Eigen::VectorXd>& utility,
                                   const Eigen::Ref<const Eigen::VectorXd>& gate);

enum class StepStatus { ok, unknown_target, unknown_current, no_legal_action };

struct StepResult {
  Hypervector action;
  Hypervector predicted_next;
  std::optional<Index> chosen_edge;
  StepStatus status = StepStatus::ok;

  [[nodiscard]] bool ok() const noexcept { return status == StepStatus::ok; }
};

struct PlanOptions {
  Real phi = 0.8;
  Real theta = kDefaultTheta;
  /// 0 selects the default of 4 * n.
  int max_steps = 0;
};

struct TrainOptions {
  Real learning_rate = 0.05;
  /// Converged once the epoch error falls below tolerance_factor * sqrt(d).
  Real tolerance_factor = 1e-3;
  int max_epochs = 10000;
};

struct TrainStats {
  int epochs = 0;
  Real final_error = 0;
};

class Cml {
 public:
  Cml() = default;
  /// Gating is derived from the graph (1/w on each edge's source column).
  Cml(CmlGraph graph, Matrix states, Matrix actions);
  /// Explicit gating, used when restoring an edited model.
  Cml(CmlGraph graph, Matrix states, Matrix actions, Matrix gating);

  /// S ~ N(0, 0.1), A ~ N(0, 1).
  static Cml init_random(const CmlGraph& graph, Index d, Rng& rng);
  /// Random bipolar node states; the action of edge i->j is s_j - s_i so s_i + a = s_j exactly.
  static Cml init_calculated(const CmlGraph& graph, Index d, Rng& rng);

  [[nodiscard]] Index dim() const noexcept { return states_.rows(); }
  [[nodiscard]] const CmlGraph& graph() const noexcept { return graph_; }
  [[nodiscard]] const Matrix& states() const noexcept { return states_; }
  [[nodiscard]] const Matrix& actions() const noexcept { return actions_; }
  [[nodiscard]] const Matrix& gating() const noexcept { return gating_; }
  [[nodiscard]] const Matrix& actions_pinv() const noexcept { return actions_pinv_; }
  [[nodiscard]] Hypervector state(const std::string& label) const;
  [[nodiscard]] Dictionary state_dictionary() const;

  /// One batch delta-rule epoch over every edge; returns the mean prediction error measured
  /// before the update.
  Real train_epoch(Real learning_rate);
  /// Repeats train_epoch until converged. Throws training_failure at the epoch cap.
  TrainStats train(const TrainOptions& options = {});

  /// Mean over edges of |s_to - (s_from + a)|.
  [[nodiscard]] Real prediction_error() const;

  [[nodiscard]] Eigen::VectorXd utility(const Eigen::Ref<const Hypervector>& target,
                                        const Eigen::Ref<const Hypervector>& current) const;

  /// One planning step. Both inputs are cleaned up against S first; a target or current that is
  /// not a known state gives a zero result.
  [[nodiscard]] StepResult step(const Eigen::Ref<const Hypervector>& target,
                                const Eigen::Ref<const Hypervector>& current, Real theta = kDefaultTheta) const;

  /// Feeds predicted states back until the target is phi-similar. Returns the visited node labels
  /// including both ends, or nullopt on a zero result or when max_steps runs out.
  [[nodiscard]] std::optional<std::vector<std::string>> plan_path(const Eigen::Ref<const Hypervector>& target,
                                                                  const Eigen::Ref<const Hypervector>& start,
                                                                  const PlanOptions& options = {}) const;

  /// Zeroes every gate of edges entering or leaving the node. S, A and the pseudo-inverse stay.
  void disable_node(Index node);

 private:
  void refresh_pinv();

  CmlGraph graph_;
  Matrix states_;
  Matrix actions_;
  Matrix gating_;
  Matrix actions_pinv_;
};

/// The 8-object line-of-sight graph: home, key, treasure and five doors, 13 undirected edges.
CmlGraph object_layout_graph();

}  // namespace cmlhdc
