#include "cmlhdc/cml.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <deque>

namespace cmlhdc {

CmlGraph::CmlGraph(std::vector<std::string> node_labels, std::vector<DirectedEdge> edges,
                   std::vector<Real> weights)
    : labels_(std::move(node_labels)), edges_(std::move(edges)), weights_(std::move(weights)) {
  if (weights_.empty()) weights_.assign(edges_.size(), 1.0);
  if (weights_.size() != edges_.size()) {
    throw Error(ErrorKind::invalid_argument, "edge weight count does not match edge count");
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (labels_[i] == labels_[j]) throw Error(ErrorKind::invalid_argument, "duplicate node label " + labels_[i]);
    }
  }
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const auto& edge = edges_[k];
    if (edge.from < 0 || edge.to < 0 || edge.from >= n() || edge.to >= n()) {
      throw Error(ErrorKind::invalid_argument, "edge references a node index out of range");
    }
    if (edge.from == edge.to) throw Error(ErrorKind::invalid_argument, "self-loop on node " + label(edge.from));
    if (!(weights_[k] > 0)) throw Error(ErrorKind::invalid_argument, "edge weights must be positive");
    for (std::size_t j = 0; j < k; ++j) {
      if (edges_[j] == edge) {
        throw Error(ErrorKind::invalid_argument, "duplicate edge " + label(edge.from) + "->" + label(edge.to));
      }
    }
  }
}

CmlGraph CmlGraph::from_undirected(std::vector<std::string> node_labels,
                                   const std::vector<std::pair<std::string, std::string>>& pairs) {
  auto find = [&](const std::string& l) -> Index {
    for (std::size_t i = 0; i < node_labels.size(); ++i) {
      if (node_labels[i] == l) return static_cast<Index>(i);
    }
    throw Error(ErrorKind::invalid_argument, "unknown node label " + l);
  };
  std::vector<DirectedEdge> edges;
  edges.reserve(pairs.size() * 2);
  for (const auto& [a, b] : pairs) {
    edges.push_back({find(a), find(b)});
    edges.push_back({find(b), find(a)});
  }
  return CmlGraph(std::move(node_labels), std::move(edges));
}

std::optional<Index> CmlGraph::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return static_cast<Index>(i);
  }
  return std::nullopt;
}

Index CmlGraph::require_index(const std::string& label) const {
  auto i = index_of(label);
  if (!i) throw Error(ErrorKind::invalid_argument, "unknown node label " + label);
  return *i;
}

std::vector<std::vector<int>> bfs_distances(const CmlGraph& graph, const Matrix* gating) {
  const auto n = static_cast<std::size_t>(graph.n());
  std::vector<std::vector<std::size_t>> adjacency(n);
  for (std::size_t k = 0; k < graph.edges().size(); ++k) {
    const auto& edge = graph.edges()[k];
    if (gating && (*gating)(static_cast<Index>(k), edge.from) == 0) continue;
    adjacency[static_cast<std::size_t>(edge.from)].push_back(static_cast<std::size_t>(edge.to));
  }
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
  for (std::size_t src = 0; src < n; ++src) {
    std::deque<std::size_t> queue{src};
    dist[src][src] = 0;
    while (!queue.empty()) {
      const auto u = queue.front();
      queue.pop_front();
      for (auto v : adjacency[u]) {
        if (dist[src][v] < 0) {
          dist[src][v] = dist[src][u] + 1;
          queue.push_back(v);
        }
      }
    }
  }
  return dist;
}

Matrix pseudo_inverse(const Eigen::Ref<const Matrix>& a, Real rcond) {
  if (a.size() == 0) return Matrix(a.cols(), a.rows());
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  const Real cutoff = rcond * (sigma.size() ? sigma[0] : 0.0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sigma.size());
  for (Index i = 0; i < sigma.size(); ++i) {
    if (sigma[i] > cutoff) inv[i] = 1.0 / sigma[i];
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

std::optional<Index> select_action(const Eigen::Ref<const Eigen::VectorXd>& utility,
                                   const Eigen::Ref<const Eigen::VectorXd>& gate) {
  if (utility.size() != gate.size()) throw Error(ErrorKind::invalid_argument, "utility and gate sizes differ");
  std::optional<Index> best;
  Real best_score = 0;
  for (Index i = 0; i < gate.size(); ++i) {
    if (gate[i] == 0) continue;
    const Real score = gate[i] * utility[i];
    if (!best || score > best_score) {
      best = i;
      best_score = score;
    }
  }
  return best;
}

namespace {

Matrix gating_from_graph(const CmlGraph& graph) {
  Matrix g = Matrix::Zero(graph.e(), graph.n());
  for (Index k = 0; k < graph.e(); ++k) {
    const auto& edge = graph.edges()[static_cast<std::size_t>(k)];
    g(k, edge.from) = 1.0 / graph.weights()[static_cast<std::size_t>(k)];
  }
  return g;
}

}  // namespace

Cml::Cml(CmlGraph graph, Matrix states, Matrix actions)
    : Cml(graph, std::move(states), std::move(actions), gating_from_graph(graph)) {}

Cml::Cml(CmlGraph graph, Matrix states, Matrix actions, Matrix gating)
    : graph_(std::move(graph)), states_(std::move(states)), actions_(std::move(actions)), gating_(std::move(gating)) {
  if (states_.cols() != graph_.n() || actions_.cols() != graph_.e()) {
    throw Error(ErrorKind::invalid_argument, "state/action matrix shape does not match the graph");
  }
  if (states_.rows() != actions_.rows()) {
    throw Error(ErrorKind::invalid_argument, "state and action matrices differ in dimension");
  }
  if (gating_.rows() != graph_.e() || gating_.cols() != graph_.n()) {
    throw Error(ErrorKind::invalid_argument, "gating matrix shape does not match the graph");
  }
  refresh_pinv();
}

Cml Cml::init_random(const CmlGraph& graph, Index d, Rng& rng) {
  if (d < graph.e()) throw Error(ErrorKind::invalid_dimension, "d must be at least the edge count");
  std::normal_distribution<Real> state_dist(0.0, 0.1);
  std::normal_distribution<Real> action_dist(0.0, 1.0);
  Matrix s(d, graph.n());
  Matrix a(d, graph.e());
  for (Index j = 0; j < s.cols(); ++j)
    for (Index i = 0; i < d; ++i) s(i, j) = state_dist(rng);
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < d; ++i) a(i, j) = action_dist(rng);
  return Cml(graph, std::move(s), std::move(a));
}

Cml Cml::init_calculated(const CmlGraph& graph, Index d, Rng& rng) {
  if (d < graph.e()) throw Error(ErrorKind::invalid_dimension, "d must be at least the edge count");
  Matrix s(d, graph.n());
  for (Index j = 0; j < s.cols(); ++j) s.col(j) = random_bipolar(d, rng);
  Matrix a(d, graph.e());
  for (Index k = 0; k < graph.e(); ++k) {
    const auto& edge = graph.edges()[static_cast<std::size_t>(k)];
    a.col(k) = s.col(edge.to) - s.col(edge.from);
  }
  return Cml(graph, std::move(s), std::move(a));
}

Hypervector Cml::state(const std::string& label) const { return states_.col(graph_.require_index(label)); }

Dictionary Cml::state_dictionary() const { return Dictionary(graph_.labels(), states_); }

void Cml::refresh_pinv() { actions_pinv_ = pseudo_inverse(actions_); }

Real Cml::prediction_error() const {
  if (graph_.e() == 0) return 0;
  Real total = 0;
  for (Index k = 0; k < graph_.e(); ++k) {
    const auto& edge = graph_.edges()[static_cast<std::size_t>(k)];
    total += (states_.col(edge.to) - states_.col(edge.from) - actions_.col(k)).norm();
  }
  return total / static_cast<Real>(graph_.e());
}

Real Cml::train_epoch(Real learning_rate) {
  if (!(learning_rate >= 0)) throw Error(ErrorKind::invalid_argument, "learning rate must be non-negative");
  Matrix delta_s = Matrix::Zero(states_.rows(), states_.cols());
  Matrix delta_a = Matrix::Zero(actions_.rows(), actions_.cols());
  Real total = 0;
  for (Index k = 0; k < graph_.e(); ++k) {
    const auto& edge = graph_.edges()[static_cast<std::size_t>(k)];
    // residual = s_{t+1} - (s_t + a_t)
    const Hypervector residual = states_.col(edge.to) - states_.col(edge.from) - actions_.col(k);
    total += residual.norm();
    delta_a.col(k) += learning_rate * residual;
    // The observed next state moves toward the prediction.
    delta_s.col(edge.to) -= learning_rate * residual;
  }
  if (learning_rate > 0) {
    states_ += delta_s;
    actions_ += delta_a;
    refresh_pinv();
  }
  return graph_.e() ? total / static_cast<Real>(graph_.e()) : 0.0;
}

TrainStats Cml::train(const TrainOptions& options) {
  const Real tolerance = options.tolerance_factor * std::sqrt(static_cast<Real>(dim()));
  TrainStats stats;
  for (stats.epochs = 0; stats.epochs < options.max_epochs; ++stats.epochs) {
    stats.final_error = prediction_error();
    if (stats.final_error < tolerance) return stats;
    train_epoch(options.learning_rate);
  }
  stats.final_error = prediction_error();
  if (stats.final_error < tolerance) return stats;
  throw Error(ErrorKind::training_failure, "CML training did not converge within " +
                                               std::to_string(options.max_epochs) + " epochs");
}

Eigen::VectorXd Cml::utility(const Eigen::Ref<const Hypervector>& target,
                             const Eigen::Ref<const Hypervector>& current) const {
  require_same_dim(target, current);
  if (target.size() != dim()) throw Error(ErrorKind::invalid_argument, "state dimension mismatch");
  return actions_pinv_ * (target - current);
}

StepResult Cml::step(const Eigen::Ref<const Hypervector>& target, const Eigen::Ref<const Hypervector>& current,
                     Real theta) const {
  StepResult result{Hypervector::Zero(dim()), Hypervector::Zero(dim()), std::nullopt, StepStatus::ok};
  const auto target_idx = recover_index(target, states_, theta);
  if (!target_idx) {
    result.status = StepStatus::unknown_target;
    return result;
  }
  const auto current_idx = recover_index(current, states_, theta);
  if (!current_idx) {
    result.status = StepStatus::unknown_current;
    return result;
  }
  const auto u = utility(states_.col(*target_idx), states_.col(*current_idx));
  const auto edge = select_action(u, gating_.col(*current_idx));
  if (!edge) {
    result.status = StepStatus::no_legal_action;
    return result;
  }
  result.chosen_edge = edge;
  result.action = actions_.col(*edge);
  result.predicted_next = states_.col(*current_idx) + result.action;
  return result;
}

std::optional<std::vector<std::string>> Cml::plan_path(const Eigen::Ref<const Hypervector>& target,
                                                       const Eigen::Ref<const Hypervector>& start,
                                                       const PlanOptions& options) const {
  const int max_steps = options.max_steps > 0 ? options.max_steps : static_cast<int>(4 * graph_.n());
  const auto target_idx = recover_index(target, states_, options.theta);
  const auto start_idx = recover_index(start, states_, options.theta);
  if (!target_idx || !start_idx) return std::nullopt;

  const Hypervector goal = states_.col(*target_idx);
  Hypervector current = states_.col(*start_idx);
  std::vector<std::string> path{graph_.label(*start_idx)};
  for (int steps = 0; cosine(goal, current) < options.phi; ++steps) {
    if (steps == max_steps) return std::nullopt;
    const auto result = step(goal, current, options.theta);
    if (!result.ok()) return std::nullopt;
    current = result.predicted_next;
    const auto idx = recover_index(current, states_, options.theta);
    if (!idx) return std::nullopt;
    path.push_back(graph_.label(*idx));
  }
  return path;
}

void Cml::disable_node(Index node) {
  if (node < 0 || node >= graph_.n()) throw Error(ErrorKind::invalid_argument, "node index out of range");
  for (Index k = 0; k < graph_.e(); ++k) {
    const auto& edge = graph_.edges()[static_cast<std::size_t>(k)];
    if (edge.from == node || edge.to == node) gating_.row(k).setZero();
  }
}

CmlGraph object_layout_graph() {
  return CmlGraph::from_undirected({"h", "k", "t", "a", "b", "c", "d", "e"},
                                   {{"h", "k"}, {"h", "a"}, {"h", "b"}, {"k", "a"}, {"k", "b"},
                                    {"a", "e"}, {"b", "d"}, {"d", "t"}, {"e", "t"},
                                    {"a", "c"}, {"b", "c"}, {"c", "d"}, {"c", "e"}});
}

}  // namespace cmlhdc
