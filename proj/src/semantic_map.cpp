#include "cmlhdc/semantic_map.hpp"

#include <charconv>

namespace cmlhdc {

std::string cell_label(Cell c) { return std::to_string(c.row) + "," + std::to_string(c.col); }

Cell parse_cell_label(const std::string& label) {
  const auto comma = label.find(',');
  Cell c;
  if (comma == std::string::npos) throw Error(ErrorKind::parse_error, "malformed cell label " + label);
  const char* begin = label.data();
  const char* mid = begin + comma;
  const char* end = begin + label.size();
  auto r1 = std::from_chars(begin, mid, c.row);
  auto r2 = std::from_chars(mid + 1, end, c.col);
  if (r1.ec != std::errc() || r1.ptr != mid || r2.ec != std::errc() || r2.ptr != end) {
    throw Error(ErrorKind::parse_error, "malformed cell label " + label);
  }
  return c;
}

MapMemory assemble_map(const Dictionary& objects, const Dictionary& positions, const Hypervector& eta,
                       std::map<std::string, Cell> cell_of) {
  if (objects.size() != positions.size() || objects.empty()) {
    throw Error(ErrorKind::invalid_argument, "map needs one position per object");
  }
  if (objects.dim() != positions.dim() || eta.size() != objects.dim()) {
    throw Error(ErrorKind::invalid_argument, "map hypervector dimensions differ");
  }
  Hypervector sum = eta;
  for (Index i = 0; i < objects.size(); ++i) {
    sum += sign(bind(objects.vector(i), positions.vector(i)));
  }
  return {sign(sum), objects, positions, std::move(cell_of)};
}

MapMemory build_map(const Dictionary& objects, const Maze& maze, const GridCml& grid, Rng& rng) {
  if (maze.width() != grid.width() || maze.height() != grid.height()) {
    throw Error(ErrorKind::invalid_argument, "grid CML was trained for a different maze size");
  }
  Dictionary positions(objects.dim());
  std::map<std::string, Cell> cell_of;
  for (const auto& label : objects.labels()) {
    const Cell c = maze.require_cell(label);
    positions.add(cell_label(c), sign(grid.state(c)));
    cell_of[label] = c;
  }
  const Hypervector eta = random_bipolar(objects.dim(), rng);
  return assemble_map(objects, positions, eta, std::move(cell_of));
}

std::optional<std::string> query_position(const MapMemory& mm, const Eigen::Ref<const Hypervector>& object_hv,
                                          Real theta) {
  return recover(bind(mm.map_hv, object_hv), mm.positions, theta);
}

std::optional<std::string> query_object(const MapMemory& mm, const Eigen::Ref<const Hypervector>& position_hv,
                                        Real theta) {
  return recover(bind(mm.map_hv, sign(position_hv)), mm.objects, theta);
}

bool check_viability(const MapMemory& mm, Real theta) { return check_viability(mm, mm.objects.labels(), theta); }

bool check_viability(const MapMemory& mm, const std::vector<std::string>& reverse_checked, Real theta) {
  for (Index i = 0; i < mm.objects.size(); ++i) {
    const auto position = query_position(mm, mm.objects.vector(i), theta);
    if (!position || *position != mm.positions.label(i)) return false;
  }
  for (const auto& label : reverse_checked) {
    const Index i = mm.objects.index_of(label).value_or(-1);
    if (i < 0) throw Error(ErrorKind::invalid_argument, "unknown object " + label);
    const auto object = query_object(mm, mm.positions.vector(i), theta);
    if (!object || *object != label) return false;
  }
  return true;
}

Policy encode_policy(const std::vector<std::string>& goals, const Dictionary& objects, Rng& rng) {
  if (goals.empty()) throw Error(ErrorKind::invalid_argument, "policy needs at least one goal");
  std::vector<Hypervector> terms;
  terms.reserve(goals.size());
  for (std::size_t i = 0; i < goals.size(); ++i) {
    terms.push_back(permute(objects.at(goals[i]), static_cast<long long>(i + 1)));
  }
  return {bundle(terms, rng), static_cast<int>(goals.size())};
}

std::pair<std::optional<std::string>, Policy> next_goal(const Policy& policy, const Dictionary& objects,
                                                        Real theta) {
  if (policy.remaining <= 0) return {std::nullopt, policy};
  Policy next{permute(policy.policy_hv, -1), policy.remaining - 1};
  auto goal = recover(next.policy_hv, objects, theta);
  if (!goal) next.remaining = 0;
  return {std::move(goal), std::move(next)};
}

}  // namespace cmlhdc
