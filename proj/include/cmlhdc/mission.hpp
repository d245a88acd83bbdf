#pragma once

// Hierarchical sequential-goal executor: policy -> object CML subgoal -> map position ->
// grid CML navigation under touch-sensor gating.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cmlhdc/cml.hpp"
#include "cmlhdc/grid_nav.hpp"
#include "cmlhdc/maze.hpp"
#include "cmlhdc/semantic_map.hpp"

namespace cmlhdc {

enum class FailureReason { none, dither_abort, step_cap, unrecoverable_state, unreachable };

std::string_view to_string(FailureReason reason) noexcept;
/// Throws parse_error for an unknown name.
FailureReason failure_reason_from_string(std::string_view name);

struct GoalOutcome {
  std::string goal;
  bool reached = false;
  /// Objects passed through, starting with the object the robot stood at.
  std::vector<std::string> object_path;
  /// Cells visited, starting with the robot's cell when the goal was revealed.
  std::vector<Cell> grid_path;
  int steps = 0;
};

struct TrialResult {
  bool success = false;
  std::vector<GoalOutcome> goal_outcomes;
  FailureReason failure_reason = FailureReason::none;
};

struct Thresholds {
  Real theta = kDefaultTheta;    // cleanup noise floor
  Real theta_o = kDefaultTheta;  // policy still holds a goal
  Real phi_o = 0.8;              // current object matches the goal
  Real phi_g = 0.999;            // current grid state matches the target position
};

/// Zero selects the default for each cap.
struct StepCaps {
  int grid_leg = 0;       // 4 * (W + H)
  int object_hops = 0;    // 2 * n per goal
  int mission_cells = 0;  // 10 * W * H
};

struct MissionContext {
  const Cml& object_cml;
  const GridCml& grid_cml;
  const MapMemory& map;
  Maze maze;
  Policy policy;
  Thresholds thresholds{};
  StepCaps caps{};
  /// Object the robot starts on.
  std::string start_object = "h";
};

/// Runs the whole policy. Never throws for navigation trouble; the result carries the reason.
TrialResult run_mission(MissionContext ctx);

/// Copy of the object CML with every edge to or from the door gated off.
Cml remove_door(const Cml& object_cml, const std::string& door);

/// Grid CML and touch sensors only, from one object's cell to another's.
TrialResult run_grid_only(const GridCml& grid_cml, Maze maze, const std::string& from, const std::string& to,
                          const Thresholds& thresholds = {}, const StepCaps& caps = {});

}  // namespace cmlhdc
