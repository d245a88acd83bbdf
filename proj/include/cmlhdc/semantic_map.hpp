#pragma once

// Object-position map hypervector, its queries, and the permutation-encoded goal policy.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cmlhdc/grid_nav.hpp"
#include "cmlhdc/hdc.hpp"
#include "cmlhdc/maze.hpp"

namespace cmlhdc {

/// "row,col"; the position dictionary uses these as labels.
std::string cell_label(Cell c);
/// Throws parse_error on malformed input.
Cell parse_cell_label(const std::string& label);

struct MapMemory {
  Hypervector map_hv;
  /// Object hypervectors (the object CML's node states).
  Dictionary objects;
  /// One position key per object, in the same order as `objects`. build_map stores sgn(p), the
  /// vectors actually bound into the map.
  Dictionary positions;
  std::map<std::string, Cell> cell_of;
};

/// map = sgn(sum_i sgn(o_i * p_i) + eta). positions.vector(i) belongs to objects.vector(i).
MapMemory assemble_map(const Dictionary& objects, const Dictionary& positions, const Hypervector& eta,
                       std::map<std::string, Cell> cell_of = {});

/// Builds the map for the objects placed in the maze, keyed by the sign of each grid CML state.
/// Draws eta from rng.
MapMemory build_map(const Dictionary& objects, const Maze& maze, const GridCml& grid, Rng& rng);

/// Position label recovered for an object vector: rec(map * o, positions, theta).
std::optional<std::string> query_position(const MapMemory& mm, const Eigen::Ref<const Hypervector>& object_hv,
                                          Real theta = kDefaultTheta);

/// Object label recovered at a position. The map stores sgn(o * p) = o * sgn(p), so the position is
/// unbound through its sign: rec(map * sgn(p), objects, theta).
std::optional<std::string> query_object(const MapMemory& mm, const Eigen::Ref<const Hypervector>& position_hv,
                                        Real theta = kDefaultTheta);

/// Every object recovers its own position and every stored position recovers its own object.
bool check_viability(const MapMemory& mm, Real theta = kDefaultTheta);
/// Every object recovers its own position; only the listed objects are checked in reverse.
bool check_viability(const MapMemory& mm, const std::vector<std::string>& reverse_checked,
                     Real theta = kDefaultTheta);

struct Policy {
  Hypervector policy_hv;
  /// Goals not yet revealed.
  int remaining = 0;
};

/// bundle(permute(o_1, 1), ..., permute(o_n, n)). Throws invalid_argument for an empty list or
/// unknown labels.
Policy encode_policy(const std::vector<std::string>& goals, const Dictionary& objects, Rng& rng);

/// Unpermutes once and cleans up against the objects. Returns nullopt once the policy is
/// exhausted or nothing clears theta.
std::pair<std::optional<std::string>, Policy> next_goal(const Policy& policy, const Dictionary& objects,
                                                        Real theta = kDefaultTheta);

}  // namespace cmlhdc
