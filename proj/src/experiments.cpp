#include "cmlhdc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <thread>

namespace cmlhdc {

using nlohmann::json;

std::filesystem::path object_model_path(const ExperimentConfig& config) { return config.model_dir / "object.cml"; }
std::filesystem::path grid_model_path(const ExperimentConfig& config) { return config.model_dir / "grid.cml"; }

Models load_models(const ExperimentConfig& config) {
  Models m{load_cml(object_model_path(config)), load_grid(grid_model_path(config))};
  if (m.object.dim() != m.grid.dim()) {
    throw Error(ErrorKind::invalid_dimension, "object and grid models were trained with different d");
  }
  if (m.grid.width() != kMazeWidth || m.grid.height() != kMazeHeight) {
    throw Error(ErrorKind::invalid_argument, "grid model does not cover the 20 x 10 maze");
  }
  return m;
}

Cml make_object_cml(const ExperimentConfig& config, Rng& rng, TrainStats* stats) {
  const CmlGraph graph = object_layout_graph();
  if (config.object_init == "calculated") {
    Cml cml = Cml::init_calculated(graph, config.d, rng);
    if (stats) *stats = {0, cml.prediction_error()};
    return cml;
  }
  Cml cml = Cml::init_random(graph, config.d, rng);
  const TrainStats s = cml.train({config.object_learning_rate, TrainOptions{}.tolerance_factor, config.object_max_epochs});
  if (stats) *stats = s;
  return cml;
}

GridCml make_grid_cml(const ExperimentConfig& config, Rng& rng, GridTrainStats* stats) {
  const ActionInit init = config.grid_actions == "bipolar" ? ActionInit::bipolar : ActionInit::gaussian;
  const Matrix actions = build_actions(config.d, rng, init);
  GridTrainOptions options;
  options.learning_rate = config.grid_learning_rate;
  options.max_epochs = config.grid_max_epochs;
  return train_grid(kMazeWidth, kMazeHeight, actions, options, stats);
}

std::vector<PathCheck> verify_object_cml(const Cml& cml, const Thresholds& thresholds) {
  const CmlGraph& g = cml.graph();
  const auto dist = bfs_distances(g, &cml.gating());
  const PlanOptions options{thresholds.phi_o, thresholds.theta, 0};
  std::vector<PathCheck> checks;
  for (Index i = 0; i < g.n(); ++i) {
    for (Index j = 0; j < g.n(); ++j) {
      if (i == j) continue;
      PathCheck c{g.label(i), g.label(j)};
      c.oracle = dist[std::size_t(i)][std::size_t(j)];
      const auto path = cml.plan_path(cml.states().col(j), cml.states().col(i), options);
      if (path) c.length = static_cast<int>(path->size()) - 1;
      c.ok = c.oracle < 0 ? !path : c.length == c.oracle;
      checks.push_back(std::move(c));
    }
  }
  return checks;
}

std::vector<PathCheck> verify_grid_cml(const GridCml& grid, int pairs, Rng& rng, const Thresholds& thresholds) {
  std::uniform_int_distribution<int> row(0, grid.height() - 1);
  std::uniform_int_distribution<int> col(0, grid.width() - 1);
  std::vector<PathCheck> checks;
  while (static_cast<int>(checks.size()) < pairs) {
    const Cell from{row(rng), col(rng)};
    const Cell to{row(rng), col(rng)};
    if (from == to) continue;
    OpenGrid env(grid.width(), grid.height(), from);
    const LegResult leg = run_grid_leg(grid, env, to, {thresholds.phi_g, 0, 3});
    PathCheck c{cell_label(from), cell_label(to)};
    c.oracle = manhattan(from, to);
    if (leg.outcome == LegOutcome::arrived) c.length = leg.steps();
    c.ok = c.length == c.oracle;
    checks.push_back(std::move(c));
  }
  return checks;
}

void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
  workers = std::max(1, std::min(workers, n));
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

ViableMaze generate_viable_maze(const Dictionary& objects, const GridCml& grid, const std::vector<std::string>& goals,
                                Real theta, int max_regenerations, Rng& rng) {
  for (int rejected = 0; rejected <= max_regenerations; ++rejected) {
    Maze maze = generate_maze(rng);
    MapMemory map = build_map(objects, maze, grid, rng);
    if (check_viability(map, goals, theta)) return {std::move(maze), std::move(map), rejected};
  }
  throw Error(ErrorKind::generation_failure,
              "no viable maze after " + std::to_string(max_regenerations) + " regenerations");
}

namespace {

json cells_json(const std::vector<Cell>& cells) {
  json out = json::array();
  for (const auto& c : cells) out.push_back({c.row, c.col});
  return out;
}

std::string joined(const std::vector<std::string>& labels) {
  std::string out;
  for (const auto& l : labels) out += l;
  return out;
}

json result_json(const TrialResult& result) {
  json goals = json::array();
  int steps = 0;
  for (const auto& g : result.goal_outcomes) {
    goals.push_back({{"goal", g.goal},
                     {"reached", g.reached},
                     {"object_path", joined(g.object_path)},
                     {"steps", g.steps},
                     {"grid_path", cells_json(g.grid_path)}});
    steps += g.steps;
  }
  return {{"success", result.success},
          {"failure_reason", std::string(to_string(result.failure_reason))},
          {"steps", steps},
          {"goals", goals}};
}

std::vector<json> run_trials(int n, int workers, const std::function<json(int)>& trial) {
  std::vector<json> records(static_cast<std::size_t>(n));
  parallel_for(n, workers, [&](int i) { records[std::size_t(i)] = trial(i); });
  return records;
}

ExperimentReport finish_report(std::string name, const ExperimentConfig& config, std::vector<json> trials,
                               std::chrono::steady_clock::time_point start) {
  ExperimentReport report;
  report.experiment = std::move(name);
  report.config = config.echo();
  report.trials = std::move(trials);
  report.aggregates = compute_aggregates(report.experiment, report.trials);
  report.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

json check_json(const std::string& model, const PathCheck& c) {
  return {{"model", model}, {"from", c.from}, {"to", c.to}, {"length", c.length}, {"oracle", c.oracle}, {"ok", c.ok}};
}

}  // namespace

json hdc_stats_trial(const ExperimentConfig& config, std::uint64_t seed, int index) {
  Rng rng = make_rng(seed, "hdc_stats", std::uint64_t(index));
  const Hypervector x = random_bipolar(config.d, rng);
  const Hypervector y = random_bipolar(config.d, rng);
  return {{"index", index}, {"similarity", cosine(x, y)}};
}

json mission_trial(const Models& models, const ExperimentConfig& config, std::uint64_t seed, int index,
                   bool remove_random_door) {
  const std::string stream = remove_random_door ? "door_removal" : "mission";
  Rng rng = make_rng(seed, stream, std::uint64_t(index));
  const Dictionary objects = models.object.state_dictionary();
  ViableMaze vm = generate_viable_maze(objects, models.grid, config.policy, config.thresholds.theta,
                                       config.max_regenerations, rng);
  const Policy policy = encode_policy(config.policy, objects, rng);

  json record = {{"index", index}, {"seed", derive_seed(seed, stream, std::uint64_t(index))},
                 {"rejections", vm.rejections}};
  Cml cml = models.object;
  std::optional<Cell> door_cell;
  if (remove_random_door) {
    std::uniform_int_distribution<std::size_t> pick(0, kDoorLabels.size() - 1);
    const std::string& door = kDoorLabels[pick(rng)];
    door_cell = vm.maze.require_cell(door);
    vm.maze.close_door(door);
    cml = remove_door(cml, door);
    record["door"] = door;
  }
  record["maze"] = vm.maze.to_text();

  const TrialResult result = run_mission({cml, models.grid, vm.map, vm.maze, policy, config.thresholds, config.caps});
  record.update(result_json(result));
  if (door_cell) {
    bool visited = false;
    bool planned = false;
    for (const auto& g : result.goal_outcomes) {
      visited |= std::find(g.grid_path.begin(), g.grid_path.end(), *door_cell) != g.grid_path.end();
      planned |= std::find(g.object_path.begin(), g.object_path.end(), record["door"].get<std::string>()) !=
                 g.object_path.end();
    }
    record["door_visited"] = visited;
    record["door_planned"] = planned;
  }
  return record;
}

json grid_only_trial(const Models& models, const ExperimentConfig& config, std::uint64_t seed, int index) {
  Rng rng = make_rng(seed, "grid_only", std::uint64_t(index));
  Maze maze = generate_maze(rng);
  maze.set_robot(maze.require_cell("k"));
  const TrialResult result = run_grid_only(models.grid, maze, "k", "t", config.thresholds, config.caps);
  json record = {{"index", index},
                 {"seed", derive_seed(seed, "grid_only", std::uint64_t(index))},
                 {"start", "k"},
                 {"target", "t"},
                 {"maze", maze.to_text()}};
  record.update(result_json(result));
  return record;
}

json viability_trial(const Models& models, const ExperimentConfig& config, std::uint64_t seed, int index) {
  Rng rng = make_rng(seed, "viability", std::uint64_t(index));
  const Maze maze = generate_maze(rng);
  const MapMemory map = build_map(models.object.state_dictionary(), maze, models.grid, rng);
  const Real theta = config.thresholds.theta;
  return {{"index", index},
          {"seed", derive_seed(seed, "viability", std::uint64_t(index))},
          {"viable", check_viability(map, config.policy, theta)},
          {"forward_viable", check_viability(map, std::vector<std::string>{}, theta)},
          {"round_trip_viable", check_viability(map, theta)}};
}

ExperimentReport run_hdc_stats(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t seed = config.require_seed();
  auto trials = run_trials(config.hdc_pairs, config.worker_count(),
                           [&](int i) { return hdc_stats_trial(config, seed, i); });
  return finish_report("hdc_stats", config, std::move(trials), start);
}

TrainOutcome run_train(const ExperimentConfig& config, const std::string& which) {
  if (which != "object" && which != "grid" && which != "both") {
    throw Error(ErrorKind::invalid_argument, "train target must be object, grid or both");
  }
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t seed = config.require_seed();
  std::vector<json> records;
  bool verified = true;
  std::optional<Cml> object;
  std::optional<GridCml> grid;

  if (which != "grid") {
    Rng rng = make_rng(seed, "object_cml");
    TrainStats stats;
    object = make_object_cml(config, rng, &stats);
    records.push_back({{"model", "object"}, {"epochs", stats.epochs}, {"final_error", stats.final_error}, {"ok", true}});
    for (const auto& c : verify_object_cml(*object, config.thresholds)) {
      verified &= c.ok;
      records.push_back(check_json("object", c));
    }
  }
  if (which != "object") {
    Rng rng = make_rng(seed, "grid_cml");
    GridTrainStats stats;
    grid = make_grid_cml(config, rng, &stats);
    records.push_back({{"model", "grid"}, {"epochs", stats.epochs}, {"final_error", stats.final_error}, {"ok", true}});
    Rng pairs = make_rng(seed, "grid_verify");
    for (const auto& c : verify_grid_cml(*grid, config.verify_grid_pairs, pairs, config.thresholds)) {
      verified &= c.ok;
      records.push_back(check_json("grid", c));
    }
  }

  TrainOutcome out{finish_report("train", config, std::move(records), start), verified, {}};
  if (!verified) return out;
  if (object) {
    save_cml(object_model_path(config), *object);
    out.written.push_back(object_model_path(config));
  }
  if (grid) {
    save_grid(grid_model_path(config), *grid);
    out.written.push_back(grid_model_path(config));
  }
  return out;
}

ExperimentReport run_verify(const ExperimentConfig& config, const std::filesystem::path& model) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<json> records;
  if (peek_model_kind(model) == ModelKind::object) {
    const Cml cml = load_cml(model);
    for (const auto& c : verify_object_cml(cml, config.thresholds)) records.push_back(check_json("object", c));
  } else {
    const GridCml grid = load_grid(model);
    Rng pairs = make_rng(config.seed.value_or(0), "grid_verify");
    for (const auto& c : verify_grid_cml(grid, config.verify_grid_pairs, pairs, config.thresholds)) {
      records.push_back(check_json("grid", c));
    }
  }
  return finish_report("verify", config, std::move(records), start);
}

ExperimentReport run_experiment(const ExperimentConfig& config, const std::string& name, const Models& models) {
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t seed = config.require_seed();
  const int workers = config.worker_count();
  std::vector<json> trials;
  if (name == "mission") {
    trials = run_trials(config.mission_trials, workers, [&](int i) { return mission_trial(models, config, seed, i, false); });
  } else if (name == "door_removal") {
    trials = run_trials(config.door_trials, workers, [&](int i) { return mission_trial(models, config, seed, i, true); });
  } else if (name == "grid_only") {
    trials = run_trials(config.grid_only_trials, workers, [&](int i) { return grid_only_trial(models, config, seed, i); });
  } else if (name == "viability") {
    trials = run_trials(config.viability_mazes, workers, [&](int i) { return viability_trial(models, config, seed, i); });
  } else {
    throw Error(ErrorKind::invalid_argument, "unknown experiment '" + name + "'");
  }
  return finish_report(name, config, std::move(trials), start);
}

}  // namespace cmlhdc
