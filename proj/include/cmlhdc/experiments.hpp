#pragma once

// Seeded experiment suites behind the CLI verbs. Trial i of an experiment draws everything
// from make_rng(seed, experiment, i), so results do not depend on the worker count.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cmlhdc/config.hpp"
#include "cmlhdc/model_io.hpp"
#include "cmlhdc/report.hpp"

namespace cmlhdc {

struct Models {
  Cml object;
  GridCml grid;
};

std::filesystem::path object_model_path(const ExperimentConfig& config);
std::filesystem::path grid_model_path(const ExperimentConfig& config);

/// Throws missing_model naming the train command when either file is absent.
Models load_models(const ExperimentConfig& config);

Cml make_object_cml(const ExperimentConfig& config, Rng& rng, TrainStats* stats = nullptr);
GridCml make_grid_cml(const ExperimentConfig& config, Rng& rng, GridTrainStats* stats = nullptr);

struct PathCheck {
  std::string from;
  std::string to;
  int length = -1;  // -1 when no path was produced
  int oracle = -1;
  bool ok = false;
};

/// Every ordered node pair planned and compared with the BFS hop count.
std::vector<PathCheck> verify_object_cml(const Cml& cml, const Thresholds& thresholds = {});
/// Random distinct start/target pairs on the wall-free grid, compared with the Manhattan distance.
std::vector<PathCheck> verify_grid_cml(const GridCml& grid, int pairs, Rng& rng, const Thresholds& thresholds = {});

inline bool all_ok(const std::vector<PathCheck>& checks) {
  for (const auto& c : checks)
    if (!c.ok) return false;
  return !checks.empty();
}

/// Calls fn(i) for i in [0, n) on up to `workers` threads. The first exception is rethrown.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

struct ViableMaze {
  Maze maze;
  MapMemory map;
  int rejections = 0;
};

/// Generates mazes until the map is viable for the goals. Throws generation_failure after
/// max_regenerations rejections.
ViableMaze generate_viable_maze(const Dictionary& objects, const GridCml& grid, const std::vector<std::string>& goals,
                                Real theta, int max_regenerations, Rng& rng);

nlohmann::json hdc_stats_trial(const ExperimentConfig& config, std::uint64_t seed, int index);
nlohmann::json mission_trial(const Models& models, const ExperimentConfig& config, std::uint64_t seed, int index,
                             bool remove_random_door);
nlohmann::json grid_only_trial(const Models& models, const ExperimentConfig& config, std::uint64_t seed, int index);
nlohmann::json viability_trial(const Models& models, const ExperimentConfig& config, std::uint64_t seed, int index);

inline const std::vector<std::string> kExperiments{"mission", "door_removal", "grid_only", "viability"};

ExperimentReport run_hdc_stats(const ExperimentConfig& config);

struct TrainOutcome {
  ExperimentReport report;
  bool verified = false;
  std::vector<std::filesystem::path> written;
};

/// which: "object", "grid" or "both". Models are only written when every check passes.
TrainOutcome run_train(const ExperimentConfig& config, const std::string& which);

/// Loads one model file and re-runs its verification.
ExperimentReport run_verify(const ExperimentConfig& config, const std::filesystem::path& model);

ExperimentReport run_experiment(const ExperimentConfig& config, const std::string& name, const Models& models);

}  // namespace cmlhdc
