#include "cmlhdc/maze.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <sstream>

namespace cmlhdc {

bool is_door(std::string_view label) noexcept {
  return std::any_of(kDoorLabels.begin(), kDoorLabels.end(), [&](const std::string& d) { return d == label; });
}

Maze::Maze(int width, int height)
    : width_(width), height_(height), blocked_(std::size_t(std::max(width, 0)) * std::size_t(std::max(height, 0)), 0) {
  if (width < 1 || height < 1) throw Error(ErrorKind::invalid_argument, "maze dimensions must be positive");
}

bool Maze::in_bounds(Cell c) const noexcept {
  return c.row >= 0 && c.col >= 0 && c.row < height_ && c.col < width_;
}

bool Maze::blocked(Cell c) const noexcept { return !in_bounds(c) || blocked_[offset(c)] != 0; }

void Maze::set_blocked(Cell c, bool value) {
  if (!in_bounds(c)) throw Error(ErrorKind::invalid_argument, "cell outside the maze");
  if (value && (object_at(c) || robot_ == c)) {
    throw Error(ErrorKind::invalid_argument, "cannot block a cell holding an object or the robot");
  }
  blocked_[offset(c)] = value ? 1 : 0;
}

void Maze::place(const std::string& label, Cell c) {
  if (label.size() != 1 || !std::islower(static_cast<unsigned char>(label[0])) || label == "r") {
    throw Error(ErrorKind::invalid_argument, "object labels are single lowercase letters other than 'r'");
  }
  if (blocked(c)) throw Error(ErrorKind::invalid_argument, "cannot place object " + label + " on a blocked cell");
  if (auto other = object_at(c); other && *other != label) {
    throw Error(ErrorKind::invalid_argument, "cell already holds object " + *other);
  }
  placements_[label] = c;
}

std::optional<Cell> Maze::cell_of(const std::string& label) const {
  auto it = placements_.find(label);
  if (it == placements_.end()) return std::nullopt;
  return it->second;
}

Cell Maze::require_cell(const std::string& label) const {
  auto c = cell_of(label);
  if (!c) throw Error(ErrorKind::invalid_argument, "object " + label + " is not placed");
  return *c;
}

std::optional<std::string> Maze::object_at(Cell c) const {
  for (const auto& [label, cell] : placements_) {
    if (cell == c) return label;
  }
  return std::nullopt;
}

void Maze::set_robot(Cell c) {
  if (blocked(c)) throw Error(ErrorKind::invalid_argument, "robot cannot stand on a blocked cell");
  robot_ = c;
}

TouchSensors Maze::sense(Cell c) const {
  if (blocked(c)) throw Error(ErrorKind::invalid_argument, "sensing from a blocked cell");
  auto open = [&](Direction dir) { return blocked(neighbor(c, dir)) ? 0 : 1; };
  return {open(Direction::east), open(Direction::south), open(Direction::north), open(Direction::west)};
}

void Maze::move_robot(Direction dir) {
  const Cell next = neighbor(robot_, dir);
  if (blocked(next)) {
    throw Error(ErrorKind::illegal_move, std::string("illegal move ") + direction_char(dir) + " from (" +
                                             std::to_string(robot_.row) + "," + std::to_string(robot_.col) + ")");
  }
  robot_ = next;
}

void Maze::close_door(const std::string& door) {
  if (!is_door(door)) throw Error(ErrorKind::invalid_argument, door + " is not a door");
  const Cell c = require_cell(door);
  if (robot_ == c) throw Error(ErrorKind::invalid_argument, "cannot close a door the robot stands in");
  placements_.erase(door);
  blocked_[offset(c)] = 1;
}

bool Maze::connected_from(Cell from) const {
  if (blocked(from)) return false;
  std::vector<char> seen(blocked_.size(), 0);
  std::deque<Cell> queue{from};
  seen[offset(from)] = 1;
  std::size_t reached = 1;
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    for (auto dir : kDirections) {
      const Cell n = neighbor(c, dir);
      if (blocked(n) || seen[offset(n)]) continue;
      seen[offset(n)] = 1;
      ++reached;
      queue.push_back(n);
    }
  }
  const auto open = static_cast<std::size_t>(std::count(blocked_.begin(), blocked_.end(), 0));
  return reached == open;
}

std::string Maze::to_text() const {
  std::string out = std::to_string(width_) + " " + std::to_string(height_) + "\n";
  std::vector<std::string> rows(std::size_t(height_), std::string(std::size_t(width_), '.'));
  for (int r = 0; r < height_; ++r)
    for (int c = 0; c < width_; ++c)
      if (blocked({r, c})) rows[std::size_t(r)][std::size_t(c)] = '#';
  for (const auto& [label, cell] : placements_) rows[std::size_t(cell.row)][std::size_t(cell.col)] = label[0];
  char& robot_char = rows[std::size_t(robot_.row)][std::size_t(robot_.col)];
  robot_char = robot_char == '.' ? 'r' : static_cast<char>(std::toupper(static_cast<unsigned char>(robot_char)));
  for (const auto& row : rows) out += row + "\n";
  return out;
}

Maze Maze::from_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string header;
  if (!std::getline(in, header)) throw Error(ErrorKind::parse_error, "line 1: missing \"W H\" header");
  int width = 0;
  int height = 0;
  {
    std::istringstream hs(header);
    std::string extra;
    if (!(hs >> width >> height) || (hs >> extra) || width < 1 || height < 1) {
      throw Error(ErrorKind::parse_error, "line 1: malformed header \"" + header + "\"");
    }
  }
  Maze maze(width, height);
  bool robot_seen = false;
  std::vector<std::pair<std::string, Cell>> objects;
  for (int r = 0; r < height; ++r) {
    std::string line;
    const std::string where = "line " + std::to_string(r + 2) + ": ";
    if (!std::getline(in, line)) throw Error(ErrorKind::parse_error, where + "missing maze row");
    if (static_cast<int>(line.size()) != width) {
      throw Error(ErrorKind::parse_error, where + "expected " + std::to_string(width) + " cells, got " +
                                              std::to_string(line.size()));
    }
    for (int c = 0; c < width; ++c) {
      const char ch = line[std::size_t(c)];
      const Cell cell{r, c};
      auto mark_robot = [&] {
        if (robot_seen) throw Error(ErrorKind::parse_error, where + "more than one robot");
        robot_seen = true;
        maze.robot_ = cell;
      };
      if (ch == '#') {
        maze.blocked_[maze.offset(cell)] = 1;
      } else if (ch == '.') {
      } else if (ch == 'r') {
        mark_robot();
      } else if (std::islower(static_cast<unsigned char>(ch))) {
        objects.emplace_back(std::string(1, ch), cell);
      } else if (std::isupper(static_cast<unsigned char>(ch)) && ch != 'R') {
        objects.emplace_back(std::string(1, static_cast<char>(std::tolower(static_cast<unsigned char>(ch)))), cell);
        mark_robot();
      } else {
        throw Error(ErrorKind::parse_error, where + "unexpected character '" + std::string(1, ch) + "'");
      }
    }
  }
  std::string rest;
  while (std::getline(in, rest)) {
    if (!rest.empty()) throw Error(ErrorKind::parse_error, "trailing content after maze rows");
  }
  if (!robot_seen) throw Error(ErrorKind::parse_error, "maze has no robot");
  for (const auto& [label, cell] : objects) {
    if (maze.placements_.count(label)) throw Error(ErrorKind::parse_error, "object " + label + " appears twice");
    maze.placements_[label] = cell;
  }
  return maze;
}

namespace {

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Cell random_open_cell(const Maze& maze, Rng& rng, int col_lo, int col_hi) {
  std::vector<Cell> candidates;
  for (int r = 0; r < maze.height(); ++r)
    for (int c = col_lo; c <= col_hi; ++c)
      if (!maze.blocked({r, c}) && !maze.object_at({r, c})) candidates.push_back({r, c});
  if (candidates.empty()) throw Error(ErrorKind::generation_failure, "room has no free cell");
  return candidates[std::size_t(uniform(rng, 0, static_cast<int>(candidates.size()) - 1))];
}

std::optional<Maze> try_generate(Rng& rng) {
  constexpr int W = kMazeWidth;
  constexpr int H = kMazeHeight;
  constexpr int kUpperLast = H / 2 - 1;  // rows 0..4 form the upper half
  Maze maze(W, H);

  const int wall1 = uniform(rng, 2, W / 3);          // 2..6
  const int wall2 = uniform(rng, 2 * W / 3 + 1, W - 3);  // 14..17
  const int divider = uniform(rng, 3, H - 4);        // 3..6

  const int row_a = uniform(rng, 0, std::min(divider - 1, kUpperLast));
  const int row_b = uniform(rng, std::max(divider + 1, kUpperLast + 1), H - 1);
  const int row_e = uniform(rng, 0, std::min(divider - 1, kUpperLast));
  const int row_d = uniform(rng, std::max(divider + 1, kUpperLast + 1), H - 1);
  const int col_c = uniform(rng, wall1 + 1, wall2 - 1);

  for (int r = 0; r < H; ++r) {
    if (r != row_a && r != row_b) maze.set_blocked({r, wall1}, true);
    if (r != row_e && r != row_d) maze.set_blocked({r, wall2}, true);
  }
  for (int c = wall1 + 1; c < wall2; ++c) {
    if (c != col_c) maze.set_blocked({divider, c}, true);
  }
  maze.place("a", {row_a, wall1});
  maze.place("b", {row_b, wall1});
  maze.place("c", {divider, col_c});
  maze.place("d", {row_d, wall2});
  maze.place("e", {row_e, wall2});
  maze.place("h", random_open_cell(maze, rng, 0, wall1 - 1));
  maze.place("k", random_open_cell(maze, rng, 0, wall1 - 1));
  maze.place("t", random_open_cell(maze, rng, wall2 + 1, W - 1));
  maze.set_robot(maze.require_cell("h"));
  if (!maze.connected_from(maze.robot())) return std::nullopt;
  return maze;
}

}  // namespace

Maze generate_maze(Rng& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    if (auto maze = try_generate(rng)) return *std::move(maze);
  }
  throw Error(ErrorKind::generation_failure, "maze generation failed after 1000 attempts");
}

}  // namespace cmlhdc
