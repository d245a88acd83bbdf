#pragma once

// Maze environment: blocked cells, labelled objects, one robot with four touch sensors.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cmlhdc/grid_nav.hpp"
#include "cmlhdc/rng.hpp"

namespace cmlhdc {

inline constexpr int kMazeWidth = 20;
inline constexpr int kMazeHeight = 10;

/// Objects in map order: five doors, then key, treasure and home.
inline const std::vector<std::string> kObjectLabels{"a", "b", "c", "d", "e", "k", "t", "h"};
inline const std::vector<std::string> kDoorLabels{"a", "b", "c", "d", "e"};

bool is_door(std::string_view label) noexcept;

class Maze {
 public:
  Maze() = default;
  /// All cells open, no objects, robot at (0, 0).
  Maze(int width, int height);

  [[nodiscard]] int width() const noexcept { return width_; }
  [[nodiscard]] int height() const noexcept { return height_; }
  [[nodiscard]] bool in_bounds(Cell c) const noexcept;
  /// Off-grid cells count as blocked.
  [[nodiscard]] bool blocked(Cell c) const noexcept;
  void set_blocked(Cell c, bool value);

  /// Labels are single lowercase letters other than 'r'.
  void place(const std::string& label, Cell c);
  [[nodiscard]] const std::map<std::string, Cell>& placements() const noexcept { return placements_; }
  [[nodiscard]] std::optional<Cell> cell_of(const std::string& label) const;
  [[nodiscard]] Cell require_cell(const std::string& label) const;
  [[nodiscard]] std::optional<std::string> object_at(Cell c) const;

  [[nodiscard]] Cell robot() const noexcept { return robot_; }
  void set_robot(Cell c);

  /// Throws invalid_argument for a blocked query cell.
  [[nodiscard]] TouchSensors sense(Cell c) const;
  [[nodiscard]] TouchSensors sense() const { return sense(robot_); }
  /// Throws illegal_move (robot unchanged) when the move runs into a wall or the border.
  void move_robot(Direction dir);

  /// Blocks a door cell permanently and drops its placement.
  void close_door(const std::string& door);

  /// Every open cell reachable from `from` through open cells.
  [[nodiscard]] bool connected_from(Cell from) const;

  /// "W H" header then one line per row: '#' wall, '.' open, object letters, 'r' robot on an empty
  /// cell, uppercase letter for an object cell the robot stands on.
  [[nodiscard]] std::string to_text() const;
  static Maze from_text(std::string_view text);

  friend bool operator==(const Maze&, const Maze&) = default;

 private:
  [[nodiscard]] std::size_t offset(Cell c) const { return std::size_t(c.row) * std::size_t(width_) + std::size_t(c.col); }

  int width_ = 0;
  int height_ = 0;
  std::vector<char> blocked_;
  std::map<std::string, Cell> placements_;
  Cell robot_{};
};

/// Three rooms split by two full-height walls, each wall with two door gaps, and a horizontal
/// wall across the middle room carrying door c. Home and key in the left room, treasure in the
/// right room, robot at home. Throws generation_failure after 1000 rejected attempts.
Maze generate_maze(Rng& rng);

}  // namespace cmlhdc
