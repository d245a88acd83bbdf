#pragma once

// Experiment reports: one JSON record per line (header, trials, summary) plus a plain-text
// summary. Aggregates are always recomputed from the trial records.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cmlhdc/hdc.hpp"

namespace cmlhdc {

inline constexpr int kReportFormatVersion = 1;

Real mean(const std::vector<Real>& xs);
/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
Real sample_std(const std::vector<Real>& xs);

struct Interval {
  Real lo = 0;
  Real hi = 0;
};

/// Wilson score interval for a binomial proportion.
Interval wilson_interval(long long successes, long long trials, Real z = 1.959963984540054);

struct ExperimentReport {
  std::string experiment;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<nlohmann::json> trials;
  nlohmann::json aggregates = nlohmann::json::object();
  double wall_clock_s = 0;
};

/// Aggregates for the named experiment, computed from its trial records only.
nlohmann::json compute_aggregates(const std::string& experiment, const std::vector<nlohmann::json>& trials);

/// One serialized line per trial, as written to the report.
std::vector<std::string> trial_lines(const ExperimentReport& report);

/// Writes <dir>/<experiment>.jsonl and <dir>/<experiment>.summary.txt; returns the .jsonl path.
std::filesystem::path write_report(const ExperimentReport& report, const std::filesystem::path& dir);

std::string summary_text(const ExperimentReport& report);

/// Parse errors carry the line number.
ExperimentReport read_report(const std::filesystem::path& path);

/// Checks the format version and that the stored aggregates match a recomputation to 1e-12
/// relative error. Throws verification_failure otherwise.
void validate_report(const ExperimentReport& report);

}  // namespace cmlhdc
