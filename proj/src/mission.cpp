#include "cmlhdc/mission.hpp"

#include <algorithm>

namespace cmlhdc {

std::string_view to_string(FailureReason reason) noexcept {
  switch (reason) {
    case FailureReason::none: return "none";
    case FailureReason::dither_abort: return "dither_abort";
    case FailureReason::step_cap: return "step_cap";
    case FailureReason::unrecoverable_state: return "unrecoverable_state";
    case FailureReason::unreachable: return "unreachable";
  }
  return "none";
}

FailureReason failure_reason_from_string(std::string_view name) {
  for (auto r : {FailureReason::none, FailureReason::dither_abort, FailureReason::step_cap,
                 FailureReason::unrecoverable_state, FailureReason::unreachable}) {
    if (to_string(r) == name) return r;
  }
  throw Error(ErrorKind::parse_error, "unknown failure reason " + std::string(name));
}

namespace {

FailureReason leg_failure(LegOutcome outcome) {
  return outcome == LegOutcome::dither_abort ? FailureReason::dither_abort : FailureReason::step_cap;
}

void append_leg(GoalOutcome& outcome, const LegResult& leg) {
  if (leg.path.size() > 1) outcome.grid_path.insert(outcome.grid_path.end(), leg.path.begin() + 1, leg.path.end());
  outcome.steps += leg.steps();
}

}  // namespace

TrialResult run_mission(MissionContext ctx) {
  const Dictionary& objects = ctx.map.objects;
  const auto& th = ctx.thresholds;
  const int width = ctx.grid_cml.width();
  const int height = ctx.grid_cml.height();
  const int hop_cap = ctx.caps.object_hops > 0 ? ctx.caps.object_hops : 2 * static_cast<int>(objects.size());
  const int cell_cap = ctx.caps.mission_cells > 0 ? ctx.caps.mission_cells : 10 * width * height;
  const LegLimits limits{th.phi_g, ctx.caps.grid_leg > 0 ? ctx.caps.grid_leg : 4 * (width + height), 3};

  TrialResult result;
  auto finish = [&](GoalOutcome&& outcome, FailureReason reason) {
    result.goal_outcomes.push_back(std::move(outcome));
    result.failure_reason = reason;
    result.success = false;
    return result;
  };

  Hypervector current = objects.at(ctx.start_object);
  Policy policy = ctx.policy;
  int cells_visited = 0;
  while (true) {
    auto [goal, rest] = next_goal(policy, objects, th.theta_o);
    policy = std::move(rest);
    if (!goal) break;

    GoalOutcome outcome;
    outcome.goal = *goal;
    if (auto here = recover(current, objects, th.theta)) outcome.object_path.push_back(*here);
    outcome.grid_path.push_back(ctx.maze.robot());
    const Hypervector target = objects.at(*goal);

    for (int hops = 0; cosine(target, current) < th.phi_o; ++hops) {
      if (hops == hop_cap) return finish(std::move(outcome), FailureReason::step_cap);
      const StepResult step = ctx.object_cml.step(target, current, th.theta);
      if (!step.ok()) {
        return finish(std::move(outcome), step.status == StepStatus::no_legal_action
                                              ? FailureReason::unreachable
                                              : FailureReason::unrecoverable_state);
      }
      const auto position = query_position(ctx.map, step.predicted_next, th.theta);
      if (!position) return finish(std::move(outcome), FailureReason::unrecoverable_state);

      const LegResult leg = run_grid_leg(ctx.grid_cml, ctx.maze, parse_cell_label(*position), limits);
      append_leg(outcome, leg);
      cells_visited += leg.steps();
      if (leg.outcome != LegOutcome::arrived) return finish(std::move(outcome), leg_failure(leg.outcome));
      if (cells_visited > cell_cap) return finish(std::move(outcome), FailureReason::step_cap);

      current = step.predicted_next;
      if (auto here = recover(current, objects, th.theta)) outcome.object_path.push_back(*here);
    }
    if (ctx.maze.cell_of(*goal) != ctx.maze.robot()) {
      return finish(std::move(outcome), FailureReason::unrecoverable_state);
    }
    outcome.reached = true;
    result.goal_outcomes.push_back(std::move(outcome));

    // The map, not the plan, says which object the robot ended up at.
    if (auto found = query_object(ctx.map, ctx.grid_cml.state(ctx.maze.robot()), th.theta)) {
      current = objects.at(*found);
    }
  }
  result.success = !result.goal_outcomes.empty() &&
                   std::all_of(result.goal_outcomes.begin(), result.goal_outcomes.end(),
                               [](const GoalOutcome& g) { return g.reached; });
  result.failure_reason = result.success ? FailureReason::none : FailureReason::unrecoverable_state;
  return result;
}

Cml remove_door(const Cml& object_cml, const std::string& door) {
  if (!is_door(door)) throw Error(ErrorKind::invalid_argument, door + " is not a door");
  Cml edited = object_cml;
  edited.disable_node(edited.graph().require_index(door));
  return edited;
}

TrialResult run_grid_only(const GridCml& grid_cml, Maze maze, const std::string& from, const std::string& to,
                          const Thresholds& thresholds, const StepCaps& caps) {
  maze.set_robot(maze.require_cell(from));
  const Cell target = maze.require_cell(to);
  const LegLimits limits{thresholds.phi_g,
                         caps.grid_leg > 0 ? caps.grid_leg : 4 * (grid_cml.width() + grid_cml.height()), 3};
  const LegResult leg = run_grid_leg(grid_cml, maze, target, limits);

  GoalOutcome outcome;
  outcome.goal = to;
  outcome.object_path.push_back(from);
  outcome.grid_path = leg.path;
  outcome.steps = leg.steps();
  outcome.reached = leg.outcome == LegOutcome::arrived;
  if (outcome.reached) outcome.object_path.push_back(to);

  TrialResult result;
  result.success = outcome.reached;
  result.failure_reason = outcome.reached ? FailureReason::none : leg_failure(leg.outcome);
  result.goal_outcomes.push_back(std::move(outcome));
  return result;
}

}  // namespace cmlhdc
