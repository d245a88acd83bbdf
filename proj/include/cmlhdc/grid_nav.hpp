#pragma once

// Grid-position CML: one trained state per cell, four shared cardinal actions, transpose
// utility, and touch sensors standing in for the gating matrix.

#include <array>
#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "cmlhdc/cml.hpp"
#include "cmlhdc/hdc.hpp"

namespace cmlhdc {

/// Column order of the action matrix and of the sensor gate.
enum class Direction : int { east = 0, south = 1, north = 2, west = 3 };

inline constexpr std::array<Direction, 4> kDirections{Direction::east, Direction::south, Direction::north,
                                                      Direction::west};

char direction_char(Direction dir) noexcept;
Direction opposite(Direction dir) noexcept;

/// Row-major grid coordinate; (0, 0) is the northwest corner, south increases row.
struct Cell {
  int row = 0;
  int col = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

Cell neighbor(Cell cell, Direction dir) noexcept;
int manhattan(Cell a, Cell b) noexcept;

/// 0 means the robot touches a wall in that direction.
struct TouchSensors {
  int e = 1;
  int s = 1;
  int n = 1;
  int w = 1;

  [[nodiscard]] Eigen::Vector4d gate() const { return {double(e), double(s), double(n), double(w)}; }
  [[nodiscard]] bool open(Direction dir) const noexcept;
  [[nodiscard]] bool any() const noexcept { return e || s || n || w; }

  friend bool operator==(const TouchSensors&, const TouchSensors&) = default;
};

enum class ActionInit {
  gaussian,  // N(0, 1) elements
  bipolar,   // +-1 elements
};

/// East and south drawn at random; west = -east and north = -south exactly.
Matrix build_actions(Index d, Rng& rng, ActionInit init = ActionInit::gaussian);

struct GridTrainOptions {
  Real learning_rate = 0.05;
  /// Converged once the mean edge residual falls below tolerance_factor * sqrt(d).
  Real tolerance_factor = 1e-2;
  int max_epochs = 20000;
};

class GridCml {
 public:
  GridCml() = default;
  GridCml(int width, int height, Matrix states, Matrix actions);

  [[nodiscard]] int width() const noexcept { return width_; }
  [[nodiscard]] int height() const noexcept { return height_; }
  [[nodiscard]] Index dim() const noexcept { return states_.rows(); }
  [[nodiscard]] const Matrix& states() const noexcept { return states_; }
  [[nodiscard]] const Matrix& actions() const noexcept { return actions_; }

  [[nodiscard]] bool contains(Cell cell) const noexcept;
  [[nodiscard]] Index index(Cell cell) const;
  [[nodiscard]] Cell cell(Index index) const;
  [[nodiscard]] auto state(Cell c) const { return states_.col(index(c)); }
  [[nodiscard]] auto action(Direction dir) const { return actions_.col(static_cast<Index>(dir)); }

  /// Mean over all directed grid edges of |p_to - (p_from + a)|.
  [[nodiscard]] Real prediction_error() const;

 private:
  int width_ = 0;
  int height_ = 0;
  Matrix states_;
  Matrix actions_;
};

/// Every directed 4-neighbour move inside a width x height grid.
struct GridEdge {
  Cell from;
  Cell to;
  Direction dir;
};
std::vector<GridEdge> grid_edges(int width, int height);

struct GridTrainStats {
  int epochs = 0;
  Real final_error = 0;
};

/// Zero-initialized states trained with the batch delta rule while the actions stay fixed.
/// Throws training_failure at the epoch cap.
GridCml train_grid(int width, int height, const Matrix& actions, const GridTrainOptions& options = {},
                   GridTrainStats* stats = nullptr);

/// u = A^T (target - current).
Eigen::Vector4d grid_utility(const GridCml& grid, const Eigen::Ref<const Hypervector>& target,
                             const Eigen::Ref<const Hypervector>& current);

struct GridStep {
  Direction dir;
  Cell next;
};

/// Best sensor-permitted direction toward the target state. Throws illegal_move when every
/// sensor reads 0.
GridStep grid_step(const GridCml& grid, const Eigen::Ref<const Hypervector>& target, Cell current,
                   const TouchSensors& sensors);

enum class LegOutcome { arrived, dither_abort, step_cap };

struct LegLimits {
  Real phi = 0.999;
  /// 0 selects 4 * (width + height).
  int max_steps = 0;
  /// Abort after this many back-and-forth cycles between the same two cells.
  int dither_cycles = 3;
};

struct LegResult {
  LegOutcome outcome = LegOutcome::arrived;
  /// Cells visited including the start.
  std::vector<Cell> path;

  [[nodiscard]] int steps() const noexcept { return path.empty() ? 0 : static_cast<int>(path.size()) - 1; }
};

/// True when the tail of the path alternates between two cells for `cycles` full round trips.
bool is_dithering(const std::vector<Cell>& path, int cycles);

/// Wall-free W x H grid; only the border blocks movement.
class OpenGrid {
 public:
  OpenGrid(int width, int height, Cell start);

  [[nodiscard]] Cell robot() const noexcept { return robot_; }
  [[nodiscard]] TouchSensors sense(Cell c) const;
  /// Throws illegal_move across the border.
  void move_robot(Direction dir);

 private:
  [[nodiscard]] bool inside(Cell c) const noexcept;

  int width_;
  int height_;
  Cell robot_;
};

/// Drives an environment (anything with robot(), sense(Cell) and move_robot(Direction)) to
/// the target cell. Arrival needs the state similarity to reach phi and the environment to
/// report the target coordinates, since distinct cells can share near-parallel states.
template <typename Env>
LegResult run_grid_leg(const GridCml& grid, Env& env, Cell target, const LegLimits& limits = {}) {
  const int max_steps = limits.max_steps > 0 ? limits.max_steps : 4 * (grid.width() + grid.height());
  const Hypervector goal = grid.state(target);
  LegResult result;
  result.path.push_back(env.robot());
  while (true) {
    const Cell here = env.robot();
    if (here == target && cosine(goal, grid.state(here)) >= limits.phi) {
      result.outcome = LegOutcome::arrived;
      return result;
    }
    if (result.steps() >= max_steps) {
      result.outcome = LegOutcome::step_cap;
      return result;
    }
    const auto step = grid_step(grid, goal, here, env.sense(here));
    env.move_robot(step.dir);
    result.path.push_back(env.robot());
    if (is_dithering(result.path, limits.dither_cycles)) {
      result.outcome = LegOutcome::dither_abort;
      return result;
    }
  }
}

}  // namespace cmlhdc
