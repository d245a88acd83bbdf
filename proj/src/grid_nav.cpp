#include "cmlhdc/grid_nav.hpp"

#include <cmath>
#include <cstdlib>

namespace cmlhdc {

char direction_char(Direction dir) noexcept {
  switch (dir) {
    case Direction::east: return 'E';
    case Direction::south: return 'S';
    case Direction::north: return 'N';
    case Direction::west: return 'W';
  }
  return '?';
}

Direction opposite(Direction dir) noexcept {
  switch (dir) {
    case Direction::east: return Direction::west;
    case Direction::south: return Direction::north;
    case Direction::north: return Direction::south;
    case Direction::west: return Direction::east;
  }
  return dir;
}

Cell neighbor(Cell cell, Direction dir) noexcept {
  switch (dir) {
    case Direction::east: return {cell.row, cell.col + 1};
    case Direction::south: return {cell.row + 1, cell.col};
    case Direction::north: return {cell.row - 1, cell.col};
    case Direction::west: return {cell.row, cell.col - 1};
  }
  return cell;
}

int manhattan(Cell a, Cell b) noexcept { return std::abs(a.row - b.row) + std::abs(a.col - b.col); }

bool TouchSensors::open(Direction dir) const noexcept {
  switch (dir) {
    case Direction::east: return e != 0;
    case Direction::south: return s != 0;
    case Direction::north: return n != 0;
    case Direction::west: return w != 0;
  }
  return false;
}

Matrix build_actions(Index d, Rng& rng, ActionInit init) {
  if (d < 4) throw Error(ErrorKind::invalid_dimension, "grid actions need d >= 4");
  Matrix a(d, 4);
  const Hypervector east = init == ActionInit::bipolar ? random_bipolar(d, rng) : random_gaussian(d, 1.0, rng);
  const Hypervector south = init == ActionInit::bipolar ? random_bipolar(d, rng) : random_gaussian(d, 1.0, rng);
  a.col(static_cast<Index>(Direction::east)) = east;
  a.col(static_cast<Index>(Direction::south)) = south;
  a.col(static_cast<Index>(Direction::north)) = -south;
  a.col(static_cast<Index>(Direction::west)) = -east;
  return a;
}

GridCml::GridCml(int width, int height, Matrix states, Matrix actions)
    : width_(width), height_(height), states_(std::move(states)), actions_(std::move(actions)) {
  if (width < 1 || height < 1) throw Error(ErrorKind::invalid_argument, "grid dimensions must be positive");
  if (states_.cols() != Index(width) * height) {
    throw Error(ErrorKind::invalid_argument, "grid state matrix needs one column per cell");
  }
  if (actions_.cols() != 4 || actions_.rows() != states_.rows()) {
    throw Error(ErrorKind::invalid_argument, "grid action matrix must be d x 4");
  }
}

bool GridCml::contains(Cell c) const noexcept {
  return c.row >= 0 && c.col >= 0 && c.row < height_ && c.col < width_;
}

Index GridCml::index(Cell c) const {
  if (!contains(c)) throw Error(ErrorKind::invalid_argument, "cell outside the grid");
  return Index(c.row) * width_ + c.col;
}

Cell GridCml::cell(Index i) const {
  if (i < 0 || i >= states_.cols()) throw Error(ErrorKind::invalid_argument, "grid state index out of range");
  return {static_cast<int>(i / width_), static_cast<int>(i % width_)};
}

std::vector<GridEdge> grid_edges(int width, int height) {
  std::vector<GridEdge> edges;
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      for (auto dir : kDirections) {
        const Cell to = neighbor({r, c}, dir);
        if (to.row >= 0 && to.col >= 0 && to.row < height && to.col < width) edges.push_back({{r, c}, to, dir});
      }
    }
  }
  return edges;
}

Real GridCml::prediction_error() const {
  const auto edges = grid_edges(width_, height_);
  if (edges.empty()) return 0;
  Real total = 0;
  for (const auto& edge : edges) {
    total += (state(edge.to) - state(edge.from) - action(edge.dir)).norm();
  }
  return total / static_cast<Real>(edges.size());
}

GridCml train_grid(int width, int height, const Matrix& actions, const GridTrainOptions& options,
                   GridTrainStats* stats) {
  if (width < 1 || height < 1 || width * height < 2) {
    throw Error(ErrorKind::invalid_argument, "grid needs at least two cells");
  }
  const Index d = actions.rows();
  const auto edges = grid_edges(width, height);
  const Real tolerance = options.tolerance_factor * std::sqrt(static_cast<Real>(d));
  auto col = [width](Cell c) { return Index(c.row) * width + c.col; };

  Matrix p = Matrix::Zero(d, Index(width) * height);
  Matrix delta(d, p.cols());
  Hypervector residual(d);
  GridTrainStats local;
  for (local.epochs = 0;; ++local.epochs) {
    delta.setZero();
    Real total = 0;
    for (const auto& edge : edges) {
      const Index from = col(edge.from);
      const Index to = col(edge.to);
      residual.noalias() = p.col(to) - p.col(from) - actions.col(static_cast<Index>(edge.dir));
      total += residual.norm();
      delta.col(to).noalias() -= options.learning_rate * residual;
    }
    local.final_error = total / static_cast<Real>(edges.size());
    if (local.final_error < tolerance) break;
    if (local.epochs >= options.max_epochs) {
      if (stats) *stats = local;
      throw Error(ErrorKind::training_failure, "grid CML training did not converge within " +
                                                   std::to_string(options.max_epochs) + " epochs");
    }
    p += delta;
  }
  if (stats) *stats = local;
  return GridCml(width, height, std::move(p), actions);
}

Eigen::Vector4d grid_utility(const GridCml& grid, const Eigen::Ref<const Hypervector>& target,
                             const Eigen::Ref<const Hypervector>& current) {
  require_same_dim(target, current);
  if (target.size() != grid.dim()) throw Error(ErrorKind::invalid_argument, "grid state dimension mismatch");
  return grid.actions().transpose() * (target - current);
}

GridStep grid_step(const GridCml& grid, const Eigen::Ref<const Hypervector>& target, Cell current,
                   const TouchSensors& sensors) {
  if (!sensors.any()) throw Error(ErrorKind::illegal_move, "no legal move: every touch sensor reads 0");
  const Eigen::Vector4d u = grid_utility(grid, target, grid.state(current));
  const auto choice = select_action(u, sensors.gate());
  const auto dir = static_cast<Direction>(*choice);
  return {dir, neighbor(current, dir)};
}

bool is_dithering(const std::vector<Cell>& path, int cycles) {
  if (cycles < 1) return false;
  const std::size_t span = 2 * static_cast<std::size_t>(cycles) + 1;
  if (path.size() < span) return false;
  const std::size_t start = path.size() - span;
  const Cell a = path[start];
  const Cell b = path[start + 1];
  if (a == b) return false;
  for (std::size_t i = start; i < path.size(); ++i) {
    if (path[i] != ((i - start) % 2 == 0 ? a : b)) return false;
  }
  return true;
}

OpenGrid::OpenGrid(int width, int height, Cell start) : width_(width), height_(height), robot_(start) {
  if (width < 1 || height < 1) throw Error(ErrorKind::invalid_argument, "grid dimensions must be positive");
  if (!inside(start)) throw Error(ErrorKind::invalid_argument, "start cell outside the grid");
}

bool OpenGrid::inside(Cell c) const noexcept { return c.row >= 0 && c.col >= 0 && c.row < height_ && c.col < width_; }

TouchSensors OpenGrid::sense(Cell c) const {
  auto open = [&](Direction dir) { return inside(neighbor(c, dir)) ? 1 : 0; };
  return {open(Direction::east), open(Direction::south), open(Direction::north), open(Direction::west)};
}

void OpenGrid::move_robot(Direction dir) {
  const Cell next = neighbor(robot_, dir);
  if (!inside(next)) throw Error(ErrorKind::illegal_move, "move off the grid");
  robot_ = next;
}

}  // namespace cmlhdc
