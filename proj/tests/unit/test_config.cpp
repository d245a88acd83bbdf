#include <gtest/gtest.h>

#include <fstream>

#include "cmlhdc/config.hpp"
#include "support.hpp"

using namespace cmlhdc;
using testing_support::kind_of;
using testing_support::message_of;

TEST(Config, DefaultsValidate) {
  const ExperimentConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.d, 1000);
  EXPECT_DOUBLE_EQ(c.thresholds.theta, 0.1);
  EXPECT_DOUBLE_EQ(c.thresholds.phi_o, 0.8);
  EXPECT_DOUBLE_EQ(c.thresholds.phi_g, 0.999);
  EXPECT_EQ(c.policy, (std::vector<std::string>{"k", "t", "h"}));
  EXPECT_FALSE(c.seed);
}

TEST(Config, ParsesKeyValueLinesWithComments) {
  const ExperimentConfig c = parse_config(
      "# experiment settings\n"
      "d = 2048\n"
      "\n"
      "phi_g=0.99   # tighter arrival\n"
      "policy = t, h\n"
      "seed = 7\n"
      "object_init = learned\n"
      "model_dir = /tmp/m\n");
  EXPECT_EQ(c.d, 2048);
  EXPECT_DOUBLE_EQ(c.thresholds.phi_g, 0.99);
  EXPECT_EQ(c.policy, (std::vector<std::string>{"t", "h"}));
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.object_init, "learned");
  EXPECT_EQ(c.model_dir, "/tmp/m");
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, ParseErrorsCarrySourceAndLine) {
  const std::string unknown = message_of([] { (void)parse_config("d = 1000\nbogus = 1\n", {}, "run.cfg"); });
  EXPECT_NE(unknown.find("run.cfg:2:"), std::string::npos);
  EXPECT_NE(unknown.find("bogus"), std::string::npos);

  EXPECT_EQ(kind_of([] { (void)parse_config("d 1000\n"); }), ErrorKind::parse_error);
  const std::string bad_number = message_of([] { (void)parse_config("\n\nd = lots\n", {}, "x"); });
  EXPECT_NE(bad_number.find("x:3:"), std::string::npos);
  EXPECT_EQ(kind_of([] { (void)parse_config("theta = 0.1.2\n"); }), ErrorKind::parse_error);
}

TEST(Config, BaseValuesSurviveUnlessOverridden) {
  ExperimentConfig base;
  base.mission_trials = 5;
  const ExperimentConfig c = parse_config("door_trials = 6\n", base);
  EXPECT_EQ(c.mission_trials, 5);
  EXPECT_EQ(c.door_trials, 6);
}

TEST(Config, OverridesUseKeyEqualsValue) {
  ExperimentConfig c;
  apply_override(c, "grid_only_trials=12");
  apply_override(c, " theta_o = 0.2 ");
  EXPECT_EQ(c.grid_only_trials, 12);
  EXPECT_DOUBLE_EQ(c.thresholds.theta_o, 0.2);
  EXPECT_EQ(kind_of([&] { apply_override(c, "grid_only_trials"); }), ErrorKind::invalid_argument);
  EXPECT_EQ(kind_of([&] { apply_override(c, "nope=1"); }), ErrorKind::invalid_argument);
  apply_override(c, "seed=");
  EXPECT_FALSE(c.seed);
}

TEST(Config, ValidateRejectsOutOfRangeValues) {
  auto invalid = [](const std::string& assignment) {
    ExperimentConfig c;
    apply_override(c, assignment);
    return kind_of([&] { c.validate(); });
  };
  EXPECT_EQ(invalid("d=100"), ErrorKind::invalid_dimension);
  EXPECT_EQ(invalid("theta=1"), ErrorKind::invalid_argument);
  EXPECT_EQ(invalid("phi_g=-0.1"), ErrorKind::invalid_argument);
  EXPECT_EQ(invalid("object_init=random"), ErrorKind::invalid_argument);
  EXPECT_EQ(invalid("grid_actions=ternary"), ErrorKind::invalid_argument);
  EXPECT_EQ(invalid("grid_learning_rate=0"), ErrorKind::invalid_argument);
  EXPECT_EQ(invalid("mission_trials=0"), ErrorKind::invalid_argument);
  EXPECT_EQ(invalid("grid_leg_cap=-1"), ErrorKind::invalid_argument);
  EXPECT_EQ(invalid("policy=k,z"), ErrorKind::invalid_argument);
  EXPECT_EQ(invalid("policy="), ErrorKind::invalid_argument);
  EXPECT_EQ(invalid("workers=-2"), ErrorKind::invalid_argument);
}

TEST(Config, EchoReparsesToTheSameConfig) {
  ExperimentConfig c;
  apply_override(c, "seed=99");
  apply_override(c, "phi_o=0.75");
  apply_override(c, "policy=k,h");
  apply_override(c, "object_hop_cap=9");
  std::string text;
  for (const auto& [k, v] : c.echo()) text += k + " = " + v + "\n";
  const ExperimentConfig back = parse_config(text);
  EXPECT_EQ(back.echo(), c.echo());
  EXPECT_EQ(back.seed, 99u);
  EXPECT_EQ(back.caps.object_hops, 9);
}

TEST(Config, EchoOrderIsFixed) {
  const auto echo = ExperimentConfig{}.echo();
  ASSERT_FALSE(echo.empty());
  EXPECT_EQ(echo.front().first, "d");
  EXPECT_EQ(echo.back().first, "out_dir");
}

TEST(Config, SeedIsRequiredForExperiments) {
  ExperimentConfig c;
  EXPECT_EQ(kind_of([&] { (void)c.require_seed(); }), ErrorKind::invalid_argument);
  c.seed = 3;
  EXPECT_EQ(c.require_seed(), 3u);
}

TEST(Config, WorkerCount) {
  ExperimentConfig c;
  EXPECT_GE(c.worker_count(), 1);
  c.workers = 3;
  EXPECT_EQ(c.worker_count(), 3);
}

TEST(Config, LoadsFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "cmlhdc-config-test.cfg";
  {
    std::ofstream out(path);
    out << "viability_mazes = 600\nbad line\n";
  }
  const std::string msg = message_of([&] { (void)load_config(path); });
  EXPECT_NE(msg.find(path.string() + ":2:"), std::string::npos);
  {
    std::ofstream out(path, std::ios::trunc);
    out << "viability_mazes = 600\n";
  }
  EXPECT_EQ(load_config(path).viability_mazes, 600);
  std::filesystem::remove(path);
  EXPECT_EQ(kind_of([&] { (void)load_config(path); }), ErrorKind::io_error);
}
