#include <gtest/gtest.h>

#include <set>

#include "cmlhdc/grid_nav.hpp"
#include "cmlhdc/maze.hpp"
#include "support.hpp"

using namespace cmlhdc;
using testing_support::kind_of;

namespace {

constexpr Index kD = 1000;

const GridCml& grid5() {
  static const GridCml g = [] {
    Rng rng(11);
    return train_grid(5, 5, build_actions(kD, rng));
  }();
  return g;
}

const GridCml& grid10x20() {
  static const GridCml g = [] {
    Rng rng(12);
    return train_grid(kMazeWidth, kMazeHeight, build_actions(kD, rng));
  }();
  return g;
}

Eigen::Index col(Direction dir) { return static_cast<Eigen::Index>(dir); }

}  // namespace

TEST(BuildActions, AntiParallelPairsAreExact) {
  for (auto init : {ActionInit::gaussian, ActionInit::bipolar}) {
    Rng rng(3);
    const Matrix a = build_actions(kD, rng, init);
    ASSERT_EQ(a.cols(), 4);
    EXPECT_TRUE((a.col(col(Direction::north)) + a.col(col(Direction::south))).isZero(0.0));
    EXPECT_TRUE((a.col(col(Direction::west)) + a.col(col(Direction::east))).isZero(0.0));
    EXPECT_DOUBLE_EQ(cosine(a.col(col(Direction::south)), a.col(col(Direction::north))), -1.0);
    EXPECT_DOUBLE_EQ(cosine(a.col(col(Direction::east)), a.col(col(Direction::west))), -1.0);
    EXPECT_LT(std::abs(cosine(a.col(col(Direction::south)), a.col(col(Direction::east)))), 0.12);
  }
}

TEST(BuildActions, BipolarInitIsBipolar) {
  Rng rng(3);
  const Matrix a = build_actions(kD, rng, ActionInit::bipolar);
  for (Index j = 0; j < 4; ++j) EXPECT_TRUE(is_bipolar(a.col(j)));
}

TEST(BuildActions, TinyDimensionRejected) {
  Rng rng(3);
  EXPECT_EQ(kind_of([&] { (void)build_actions(3, rng); }), ErrorKind::invalid_dimension);
}

TEST(GridEdges, CountsEveryDirectedAdjacency) {
  EXPECT_EQ(grid_edges(20, 10).size(), 740u);
  EXPECT_EQ(grid_edges(5, 5).size(), 80u);
  EXPECT_EQ(grid_edges(1, 1).size(), 0u);
  for (const auto& e : grid_edges(4, 3)) EXPECT_EQ(neighbor(e.from, e.dir), e.to);
}

TEST(GridCml, IndexIsRowMajor) {
  const GridCml& g = grid5();
  EXPECT_EQ(g.index({0, 0}), 0);
  EXPECT_EQ(g.index({0, 4}), 4);
  EXPECT_EQ(g.index({2, 3}), 13);
  EXPECT_EQ(g.cell(13), (Cell{2, 3}));
  EXPECT_EQ(kind_of([&] { (void)g.index({5, 0}); }), ErrorKind::invalid_argument);
  EXPECT_EQ(kind_of([&] { (void)g.cell(25); }), ErrorKind::invalid_argument);
}

TEST(GridCml, ShapeMismatchRejected) {
  EXPECT_EQ(kind_of([] { GridCml(3, 3, Matrix::Zero(8, 8), Matrix::Zero(8, 4)); }), ErrorKind::invalid_argument);
  EXPECT_EQ(kind_of([] { GridCml(3, 3, Matrix::Zero(8, 9), Matrix::Zero(8, 3)); }), ErrorKind::invalid_argument);
}

TEST(TrainGrid, NeighboursDifferByTheirAction) {
  const GridCml& g = grid5();
  const Real tol = 1e-2 * std::sqrt(Real(kD));
  EXPECT_LT(g.prediction_error(), tol);
  for (const auto& e : grid_edges(5, 5)) {
    EXPECT_LT((g.state(e.to) - g.state(e.from) - g.action(e.dir)).norm(), 5 * tol);
  }
}

TEST(TrainGrid, ActionsStayFixed) {
  Rng rng(11);
  const Matrix a = build_actions(kD, rng);
  EXPECT_EQ(grid5().actions(), a);
}

TEST(TrainGrid, EpochCapThrows) {
  Rng rng(4);
  const Matrix a = build_actions(kD, rng);
  GridTrainOptions opts;
  opts.max_epochs = 3;
  GridTrainStats stats;
  EXPECT_EQ(kind_of([&] { (void)train_grid(5, 5, a, opts, &stats); }), ErrorKind::training_failure);
  EXPECT_EQ(stats.epochs, 3);
}

TEST(TrainGrid, SingleCellRejected) {
  Rng rng(4);
  const Matrix a = build_actions(64, rng);
  EXPECT_EQ(kind_of([&] { (void)train_grid(1, 1, a); }), ErrorKind::invalid_argument);
}

TEST(TrainGrid, StatesAreNearParallelOrAntiParallel) {
  const GridCml& g = grid10x20();
  int strong = 0;
  int pairs = 0;
  for (Index i = 0; i < g.states().cols(); ++i)
    for (Index j = i + 1; j < g.states().cols(); ++j, ++pairs)
      if (std::abs(cosine(g.states().col(i), g.states().col(j))) > 0.9) ++strong;
  // Random hypervectors would give essentially none.
  EXPECT_GT(strong, pairs / 20);
}

TEST(TrainGrid, SomeDistinctCellsShareNearDuplicateStates) {
  const GridCml& g = grid10x20();
  bool found = false;
  for (Index i = 0; i < g.states().cols() && !found; ++i)
    for (Index j = i + 1; j < g.states().cols() && !found; ++j)
      found = cosine(g.states().col(i), g.states().col(j)) > 0.999;
  EXPECT_TRUE(found);
}

TEST(GridUtility, ZeroAtTarget) {
  const GridCml& g = grid5();
  EXPECT_TRUE(grid_utility(g, g.state({2, 2}), g.state({2, 2})).isZero(0.0));
}

TEST(GridUtility, OppositeDirectionsGetOppositeUtility) {
  const GridCml& g = grid5();
  const auto u = grid_utility(g, g.state({4, 1}), g.state({1, 1}));
  EXPECT_GT(u[col(Direction::south)], 0);
  EXPECT_LT(u[col(Direction::north)], 0);
  EXPECT_EQ(u[col(Direction::north)], -u[col(Direction::south)]);
  EXPECT_EQ(u[col(Direction::west)], -u[col(Direction::east)]);
}

TEST(GridUtility, DimensionMismatchRejected) {
  const GridCml& g = grid5();
  const Hypervector small = Hypervector::Ones(10);
  EXPECT_EQ(kind_of([&] { (void)grid_utility(g, small, small); }), ErrorKind::invalid_argument);
}

TEST(GridStep, AdjacentTargetPicksItsDirection) {
  const GridCml& g = grid5();
  const OpenGrid env(5, 5, {2, 2});
  for (auto dir : kDirections) {
    const Cell target = neighbor({2, 2}, dir);
    const auto step = grid_step(g, g.state(target), {2, 2}, env.sense({2, 2}));
    EXPECT_EQ(step.dir, dir) << direction_char(dir);
    EXPECT_EQ(step.next, target);
  }
}

TEST(GridStep, WallForcesBestRemainingDirection) {
  const GridCml& g = grid5();
  TouchSensors sensors;
  sensors.e = 0;
  const auto step = grid_step(g, g.state({2, 4}), {2, 2}, sensors);
  EXPECT_NE(step.dir, Direction::east);
  const auto u = grid_utility(g, g.state({2, 4}), g.state({2, 2}));
  for (auto dir : {Direction::south, Direction::north, Direction::west})
    EXPECT_GE(u[col(step.dir)], u[col(dir)]);
}

TEST(GridStep, OnlyBackwardsOpenStillMoves) {
  const GridCml& g = grid5();
  const TouchSensors sensors{0, 0, 0, 1};
  const auto u = grid_utility(g, g.state({2, 4}), g.state({2, 2}));
  EXPECT_LT(u[col(Direction::west)], 0);
  EXPECT_EQ(grid_step(g, g.state({2, 4}), {2, 2}, sensors).dir, Direction::west);
}

TEST(GridStep, NeverPicksAClosedSensor) {
  const GridCml& g = grid5();
  Rng rng(8);
  std::uniform_int_distribution<int> bit(0, 1), coord(0, 4);
  for (int i = 0; i < 300; ++i) {
    TouchSensors s{bit(rng), bit(rng), bit(rng), bit(rng)};
    if (!s.any()) continue;
    const Cell here{coord(rng), coord(rng)};
    const Cell target{coord(rng), coord(rng)};
    EXPECT_TRUE(s.open(grid_step(g, g.state(target), here, s).dir));
  }
}

TEST(GridStep, AllSensorsClosedThrows) {
  const GridCml& g = grid5();
  EXPECT_EQ(kind_of([&] { (void)grid_step(g, g.state({0, 0}), {1, 1}, TouchSensors{0, 0, 0, 0}); }),
            ErrorKind::illegal_move);
}

TEST(OpenGridNavigation, ManhattanOptimalOnEveryFiveByFivePair) {
  const GridCml& g = grid5();
  for (Index s = 0; s < 25; ++s) {
    for (Index t = 0; t < 25; ++t) {
      if (s == t) continue;
      OpenGrid env(5, 5, g.cell(s));
      const auto leg = run_grid_leg(g, env, g.cell(t));
      ASSERT_EQ(leg.outcome, LegOutcome::arrived);
      EXPECT_EQ(leg.steps(), manhattan(g.cell(s), g.cell(t)));
      EXPECT_EQ(leg.path.back(), g.cell(t));
    }
  }
}

TEST(OpenGridNavigation, ManhattanOptimalOnSampledMazeSizedPairs) {
  const GridCml& g = grid10x20();
  Rng rng(21);
  std::uniform_int_distribution<Index> pick(0, g.states().cols() - 1);
  for (int i = 0; i < 200; ++i) {
    const Cell s = g.cell(pick(rng));
    const Cell t = g.cell(pick(rng));
    OpenGrid env(kMazeWidth, kMazeHeight, s);
    const auto leg = run_grid_leg(g, env, t);
    ASSERT_EQ(leg.outcome, LegOutcome::arrived);
    EXPECT_EQ(leg.steps(), manhattan(s, t));
  }
}

TEST(OpenGridNavigation, TwoEastTakesTwoSteps) {
  const GridCml& g = grid5();
  OpenGrid env(5, 5, {1, 1});
  const auto leg = run_grid_leg(g, env, {1, 3});
  EXPECT_EQ(leg.outcome, LegOutcome::arrived);
  EXPECT_EQ(leg.path, (std::vector<Cell>{{1, 1}, {1, 2}, {1, 3}}));
}

TEST(OpenGridNavigation, StartAtTargetTakesNoSteps) {
  const GridCml& g = grid5();
  OpenGrid env(5, 5, {3, 3});
  const auto leg = run_grid_leg(g, env, {3, 3});
  EXPECT_EQ(leg.outcome, LegOutcome::arrived);
  EXPECT_EQ(leg.steps(), 0);
}

TEST(OpenGrid, SensesOnlyTheBorder) {
  const OpenGrid env(5, 4, {0, 0});
  EXPECT_EQ(env.sense({0, 0}), (TouchSensors{1, 1, 0, 0}));
  EXPECT_EQ(env.sense({2, 2}), (TouchSensors{1, 1, 1, 1}));
  EXPECT_EQ(env.sense({3, 4}), (TouchSensors{0, 0, 1, 1}));
}

TEST(OpenGrid, MovesAndRejectsLeavingTheGrid) {
  OpenGrid env(3, 3, {0, 0});
  EXPECT_EQ(kind_of([&] { env.move_robot(Direction::north); }), ErrorKind::illegal_move);
  EXPECT_EQ(env.robot(), (Cell{0, 0}));
  env.move_robot(Direction::east);
  env.move_robot(Direction::south);
  EXPECT_EQ(env.robot(), (Cell{1, 1}));
}

TEST(Dithering, DetectsThreeBackAndForthCycles) {
  const Cell a{1, 1}, b{1, 2}, c{2, 2};
  EXPECT_TRUE(is_dithering({c, a, b, a, b, a, b, a}, 3));
  EXPECT_FALSE(is_dithering({a, b, a, b, a, b}, 3));
  EXPECT_FALSE(is_dithering({a, b, a, b, a, c, a}, 3));
  EXPECT_FALSE(is_dithering({a, a, a, a, a, a, a}, 3));
  EXPECT_TRUE(is_dithering({a, b, a}, 1));
  EXPECT_FALSE(is_dithering({a, b, a}, 0));
}

// A wall between robot and target, with the gap far to the side, traps the transpose utility.
TEST(Dithering, WallBetweenRobotAndTargetAbortsTheLeg) {
  const GridCml& g = grid5();
  Maze maze(5, 5);
  for (int c = 0; c < 4; ++c) maze.set_blocked({2, c}, true);
  maze.set_robot({0, 1});
  const auto leg = run_grid_leg(g, maze, {4, 1});
  EXPECT_EQ(leg.outcome, LegOutcome::dither_abort);
  EXPECT_LT(leg.steps(), 4 * (5 + 5));
}

TEST(GridLeg, StepCapEndsTheLeg) {
  const GridCml& g = grid5();
  OpenGrid env(5, 5, {0, 0});
  LegLimits limits;
  limits.max_steps = 3;
  const auto leg = run_grid_leg(g, env, {4, 4}, limits);
  EXPECT_EQ(leg.outcome, LegOutcome::step_cap);
  EXPECT_EQ(leg.steps(), 3);
}

TEST(Directions, HelpersAgree) {
  for (auto dir : kDirections) {
    EXPECT_EQ(neighbor(neighbor({5, 5}, dir), opposite(dir)), (Cell{5, 5}));
    EXPECT_EQ(opposite(opposite(dir)), dir);
  }
  EXPECT_EQ(manhattan({0, 0}, {3, 4}), 7);
  EXPECT_EQ(std::string(1, direction_char(Direction::north)), "N");
}
