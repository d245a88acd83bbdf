#pragma once

// Draws a trial trace (one trial record of a report) as annotated maze text or as SVG.
// Leg k of the robot's path is marked with the digit k; the cells of a final dithering
// 2-cycle are marked '*'.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "cmlhdc/maze.hpp"

namespace cmlhdc {

struct TraceLeg {
  std::string goal;
  bool reached = false;
  std::vector<Cell> path;
};

struct Trace {
  Maze maze{1, 1};
  std::vector<TraceLeg> legs;
  bool success = false;
  std::string failure_reason;
};

/// Throws parse_error when fields are missing or malformed.
Trace trace_from_json(const nlohmann::json& record);

/// Reads a report or a file of trial records and returns the trial with the given index
/// (the first trial when index < 0). Parse errors name the line.
Trace load_trace(const std::filesystem::path& path, int index = -1);

/// Cells of the 2-cycle a dither-aborted trace ended in; empty otherwise.
std::vector<Cell> dither_cells(const Trace& trace);

std::string render_text(const Trace& trace);
std::string render_svg(const Trace& trace);

}  // namespace cmlhdc
