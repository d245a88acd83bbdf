#pragma once

// Experiment configuration: flat "key = value" files, typed parsing, CLI overrides and an
// ordered echo for reports.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cmlhdc/mission.hpp"

namespace cmlhdc {

struct ExperimentConfig {
  Index d = kDefaultDim;
  Thresholds thresholds{};

  std::string object_init = "calculated";  // or "learned"
  Real object_learning_rate = 0.05;
  int object_max_epochs = 10000;
  Real grid_learning_rate = 0.05;
  int grid_max_epochs = 20000;
  std::string grid_actions = "gaussian";  // or "bipolar"

  StepCaps caps{};

  int hdc_pairs = 1000;
  int mission_trials = 50;
  int door_trials = 50;
  int grid_only_trials = 100;
  int viability_mazes = 2000;
  int verify_grid_pairs = 50;
  int max_regenerations = 10000;
  std::vector<std::string> policy{"k", "t", "h"};

  std::optional<std::uint64_t> seed;
  int workers = 0;  // 0 = hardware concurrency
  std::filesystem::path model_dir = "models";
  std::filesystem::path out_dir = "out";

  /// Sets one field from its textual form. Throws invalid_argument for unknown keys or values
  /// that do not parse.
  void set(const std::string& key, const std::string& value);

  /// Throws invalid_argument when a value is out of range.
  void validate() const;

  /// Every key with its current value, in a fixed order. Parsing the echo reproduces the config.
  [[nodiscard]] std::vector<std::pair<std::string, std::string>> echo() const;

  [[nodiscard]] std::uint64_t require_seed() const;
  [[nodiscard]] int worker_count() const;
};

/// Reads "key = value" lines; '#' starts a comment. Errors carry the line number.
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});
ExperimentConfig parse_config(const std::string& text, ExperimentConfig base = {},
                              const std::string& source = "<config>");

/// "key=value" override from the command line.
void apply_override(ExperimentConfig& config, const std::string& assignment);

}  // namespace cmlhdc
