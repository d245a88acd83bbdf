// cmlhdc: train the object and grid CMLs, run the seeded experiments, render traces.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "cmlhdc/experiments.hpp"
#include "cmlhdc/render.hpp"

using namespace cmlhdc;

namespace {

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument:
    case ErrorKind::invalid_dimension:
    case ErrorKind::parse_error: return 2;
    case ErrorKind::missing_model: return 3;
    case ErrorKind::verification_failure: return 4;
    default: return 1;
  }
}

void print_report(const ExperimentReport& report, const std::filesystem::path& written) {
  std::cout << summary_text(report) << "report: " << written.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cognitive map learners with hyperdimensional maps: training, experiments, rendering"};
  app.require_subcommand(1);

  std::string config_file;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> model_dir;
  std::optional<std::string> out_dir;
  app.add_option("--config", config_file, "key = value configuration file")->check(CLI::ExistingFile);
  app.add_option("--set", overrides, "override a config key (key=value), repeatable");
  app.add_option("--seed", seed, "root seed (required for training and experiments)");
  app.add_option("--workers", workers, "worker threads (0 = all cores)");
  app.add_option("--models", model_dir, "model directory");
  app.add_option("--out", out_dir, "report directory");

  auto* stats_cmd = app.add_subcommand("hdc-stats", "similarity statistics of random bipolar pairs");
  std::string which = "both";
  auto* train_cmd = app.add_subcommand("train", "build, verify and save the CMLs");
  train_cmd->add_option("--which", which, "object, grid or both")->check(CLI::IsMember({"object", "grid", "both"}));
  std::string experiment;
  auto* run_cmd = app.add_subcommand("run", "run a seeded experiment batch");
  run_cmd->add_option("experiment", experiment, "mission, door_removal, grid_only or viability")
      ->required()
      ->check(CLI::IsMember(kExperiments));
  std::string trace_path;
  int trial = -1;
  std::string style = "text";
  std::string output;
  auto* render_cmd = app.add_subcommand("render", "draw one trial of a report");
  render_cmd->add_option("trace", trace_path, "report or trace file")->required();
  render_cmd->add_option("--trial", trial, "trial index (default: first)");
  render_cmd->add_option("--style", style, "text or svg")->check(CLI::IsMember({"text", "svg"}));
  render_cmd->add_option("-o,--output", output, "output file (default: stdout)");
  std::string model_path;
  auto* verify_cmd = app.add_subcommand("verify", "re-run path verification on a saved model");
  verify_cmd->add_option("model", model_path, "model file")->required();
  for (auto* sub : {stats_cmd, train_cmd, run_cmd, render_cmd, verify_cmd}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig config;
    if (!config_file.empty()) config = load_config(config_file);
    for (const auto& o : overrides) apply_override(config, o);
    if (seed) config.seed = *seed;
    if (workers) config.workers = *workers;
    if (model_dir) config.model_dir = *model_dir;
    if (out_dir) config.out_dir = *out_dir;
    config.validate();

    if (*stats_cmd) {
      const auto report = run_hdc_stats(config);
      print_report(report, write_report(report, config.out_dir));
    } else if (*train_cmd) {
      const auto outcome = run_train(config, which);
      print_report(outcome.report, write_report(outcome.report, config.out_dir));
      if (!outcome.verified) {
        throw Error(ErrorKind::verification_failure, "path verification failed; no model was saved");
      }
      for (const auto& p : outcome.written) std::cout << "saved " << p.string() << "\n";
    } else if (*run_cmd) {
      (void)config.require_seed();
      const Models models = load_models(config);
      const auto report = run_experiment(config, experiment, models);
      print_report(report, write_report(report, config.out_dir));
    } else if (*render_cmd) {
      const Trace trace = load_trace(trace_path, trial);
      const std::string drawing = style == "svg" ? render_svg(trace) : render_text(trace);
      if (output.empty()) {
        std::cout << drawing;
      } else {
        std::ofstream out(output, std::ios::binary | std::ios::trunc);
        out << drawing;
        if (!out) throw Error(ErrorKind::io_error, "cannot write " + output);
      }
    } else if (*verify_cmd) {
      const auto report = run_verify(config, model_path);
      print_report(report, write_report(report, config.out_dir));
      if (report.aggregates["passed"] != report.aggregates["checks"]) {
        throw Error(ErrorKind::verification_failure, model_path + " failed path verification");
      }
    }
  } catch (const Error& e) {
    std::cerr << "cmlhdc: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "cmlhdc: internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
