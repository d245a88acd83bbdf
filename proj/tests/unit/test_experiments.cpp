#include <gtest/gtest.h>

#include <atomic>
#include <random>
#include <set>

#include "cmlhdc/experiments.hpp"
#include "support.hpp"

using namespace cmlhdc;
using nlohmann::json;
using testing_support::kind_of;

namespace fs = std::filesystem;

namespace {

ExperimentConfig base_config() {
  static const fs::path dir =
      fs::temp_directory_path() / ("cmlhdc-experiments-" + std::to_string(std::random_device{}()));
  ExperimentConfig c;
  c.seed = 2024;
  c.model_dir = dir / "models";
  c.out_dir = dir / "out";
  c.mission_trials = 4;
  c.door_trials = 5;
  c.grid_only_trials = 12;
  c.viability_mazes = 40;
  c.verify_grid_pairs = 30;
  return c;
}

// Trains once per test binary; every test shares the saved models.
const Models& models() {
  static const Models m = [] {
    const TrainOutcome out = run_train(base_config(), "both");
    if (!out.verified) throw std::runtime_error("training did not verify");
    return load_models(base_config());
  }();
  return m;
}

ExperimentConfig with_workers(int workers) {
  ExperimentConfig c = base_config();
  c.workers = workers;
  return c;
}

class Environment : public ::testing::Environment {
 public:
  void TearDown() override { fs::remove_all(base_config().model_dir.parent_path()); }
};

const auto* const kEnvironment = ::testing::AddGlobalTestEnvironment(new Environment);

}  // namespace

TEST(ParallelFor, VisitsEveryIndexOnce) {
  for (int workers : {1, 3, 16}) {
    std::vector<std::atomic<int>> hits(50);
    parallel_for(50, workers, [&](int i) { ++hits[std::size_t(i)]; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
  parallel_for(0, 4, [](int) { FAIL(); });
}

TEST(ParallelFor, RethrowsTheFirstError) {
  EXPECT_EQ(kind_of([] {
              parallel_for(20, 4, [](int i) {
                if (i == 7) throw Error(ErrorKind::illegal_move, "boom");
              });
            }),
            ErrorKind::illegal_move);
}

TEST(Train, WritesVerifiedModels) {
  (void)models();
  EXPECT_TRUE(fs::exists(object_model_path(base_config())));
  EXPECT_TRUE(fs::exists(grid_model_path(base_config())));
  EXPECT_EQ(models().object.dim(), 1000);
  EXPECT_EQ(models().grid.width(), kMazeWidth);
}

TEST(Train, ObjectOnlyReportCountsEveryOrderedPair) {
  ExperimentConfig c = base_config();
  c.model_dir = c.model_dir.parent_path() / "object-only";
  const TrainOutcome out = run_train(c, "object");
  EXPECT_TRUE(out.verified);
  ASSERT_EQ(out.written.size(), 1u);
  EXPECT_EQ(out.written[0], object_model_path(c));
  EXPECT_EQ(out.report.aggregates["checks"], 1 + 56);
  EXPECT_EQ(out.report.aggregates["passed"], 1 + 56);
  EXPECT_FALSE(fs::exists(grid_model_path(c)));
  EXPECT_EQ(kind_of([&] { (void)run_train(c, "everything"); }), ErrorKind::invalid_argument);
}

TEST(Verify, SavedModelsPassAndTamperedOnesFail) {
  (void)models();
  const ExperimentConfig c = base_config();
  for (const auto& path : {object_model_path(c), grid_model_path(c)}) {
    const ExperimentReport r = run_verify(c, path);
    EXPECT_GT(r.aggregates["checks"].get<int>(), 0);
    EXPECT_EQ(r.aggregates["passed"], r.aggregates["checks"]) << path;
  }

  // Swap two node states: plans no longer match the graph.
  const Cml& good = models().object;
  Matrix s = good.states();
  s.col(0).swap(s.col(2));
  const fs::path bad = c.model_dir.parent_path() / "tampered.cml";
  save_cml(bad, Cml(good.graph(), s, good.actions(), good.gating()));
  const ExperimentReport r = run_verify(c, bad);
  EXPECT_LT(r.aggregates["passed"].get<int>(), r.aggregates["checks"].get<int>());
}

TEST(LoadModels, MissingFilesPointToTrain) {
  ExperimentConfig c = base_config();
  c.model_dir = c.model_dir.parent_path() / "empty";
  EXPECT_EQ(kind_of([&] { (void)load_models(c); }), ErrorKind::missing_model);
}

TEST(Experiments, TrialsDoNotDependOnWorkerCount) {
  for (const auto& name : kExperiments) {
    const auto one = run_experiment(with_workers(1), name, models());
    const auto many = run_experiment(with_workers(4), name, models());
    EXPECT_EQ(trial_lines(one), trial_lines(many)) << name;
    EXPECT_EQ(one.aggregates, many.aggregates) << name;
    EXPECT_NO_THROW(validate_report(one));
  }
}

TEST(Experiments, SeedChangesTheTrials) {
  ExperimentConfig other = base_config();
  other.seed = 2025;
  EXPECT_NE(trial_lines(run_experiment(base_config(), "grid_only", models())),
            trial_lines(run_experiment(other, "grid_only", models())));
}

TEST(Experiments, MissionRecordsFollowTheShortRoutes) {
  const auto report = run_experiment(base_config(), "mission", models());
  const std::set<std::string> out{"kaet", "kbdt"};
  const std::set<std::string> back{"teah", "tdbh"};
  for (const auto& t : report.trials) {
    ASSERT_TRUE(t["success"].get<bool>()) << t.dump();
    EXPECT_EQ(t["seed"], derive_seed(2024, "mission", t["index"].get<std::uint64_t>()));
    ASSERT_EQ(t["goals"].size(), 3u);
    EXPECT_EQ(t["goals"][0]["object_path"], "hk");
    EXPECT_TRUE(out.count(t["goals"][1]["object_path"].get<std::string>()));
    EXPECT_TRUE(back.count(t["goals"][2]["object_path"].get<std::string>()));
    const Maze maze = Maze::from_text(t["maze"].get<std::string>());
    EXPECT_EQ(maze.robot(), maze.require_cell("h"));
  }
  EXPECT_EQ(report.aggregates["successes"], 4);
}

TEST(Experiments, DoorRemovalAvoidsTheDoor) {
  const auto report = run_experiment(base_config(), "door_removal", models());
  for (const auto& t : report.trials) {
    ASSERT_TRUE(t.contains("door"));
    EXPECT_TRUE(is_door(t["door"].get<std::string>()));
    EXPECT_FALSE(t["door_visited"].get<bool>());
    EXPECT_FALSE(t["door_planned"].get<bool>());
    const Maze maze = Maze::from_text(t["maze"].get<std::string>());
    EXPECT_FALSE(maze.cell_of(t["door"].get<std::string>()));
  }
  EXPECT_EQ(report.aggregates["door_visits"], 0);
}

TEST(Experiments, GridOnlyStartsAtTheKey) {
  const auto report = run_experiment(base_config(), "grid_only", models());
  for (const auto& t : report.trials) {
    const Maze maze = Maze::from_text(t["maze"].get<std::string>());
    EXPECT_EQ(maze.robot(), maze.require_cell("k"));
    const auto& path = t["goals"][0]["grid_path"];
    EXPECT_EQ(path[0][0].get<int>(), maze.require_cell("k").row);
    EXPECT_EQ(path[0][1].get<int>(), maze.require_cell("k").col);
  }
}

TEST(Experiments, ViabilityRecordsAreConsistent) {
  const auto report = run_experiment(base_config(), "viability", models());
  for (const auto& t : report.trials) {
    // Full round trip implies policy-aware viability, which implies forward viability.
    if (t["round_trip_viable"].get<bool>()) EXPECT_TRUE(t["viable"].get<bool>());
    if (t["viable"].get<bool>()) EXPECT_TRUE(t["forward_viable"].get<bool>());
  }
  EXPECT_EQ(report.aggregates["mazes"], 40);
}

TEST(Experiments, UnknownNameAndMissingSeedRejected) {
  EXPECT_EQ(kind_of([] { (void)run_experiment(base_config(), "bogus", models()); }), ErrorKind::invalid_argument);
  ExperimentConfig c = base_config();
  c.seed.reset();
  EXPECT_EQ(kind_of([&] { (void)run_experiment(c, "mission", models()); }), ErrorKind::invalid_argument);
}

TEST(HdcStats, RandomPairsArePseudoOrthogonal) {
  const ExperimentReport r = run_hdc_stats(base_config());
  EXPECT_EQ(r.aggregates["pairs"], 1000);
  EXPECT_LT(std::abs(r.aggregates["mean"].get<double>()), 0.005);
  EXPECT_NEAR(r.aggregates["std"].get<double>(), 1 / std::sqrt(1000.0), 0.003);
  EXPECT_LT(r.aggregates["max_abs"].get<double>(), 0.15);
}

TEST(ViableMazes, CountsRejectionsAndGivesUp) {
  const Dictionary objects = models().object.state_dictionary();
  Rng a(77);
  const ViableMaze vm = generate_viable_maze(objects, models().grid, {"k", "t", "h"}, 0.1, 10000, a);

  // Replay the generator by hand and count the rejected mazes.
  Rng b(77);
  int rejected = 0;
  while (true) {
    const Maze maze = generate_maze(b);
    const MapMemory map = build_map(objects, maze, models().grid, b);
    if (check_viability(map, {"k", "t", "h"}, 0.1)) break;
    ++rejected;
  }
  EXPECT_EQ(vm.rejections, rejected);
  EXPECT_TRUE(check_viability(vm.map, {"k", "t", "h"}));

  Rng c(78);
  EXPECT_EQ(kind_of([&] { (void)generate_viable_maze(objects, models().grid, {"k"}, 0.99, 3, c); }),
            ErrorKind::generation_failure);
}
