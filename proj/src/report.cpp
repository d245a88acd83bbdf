#include "cmlhdc/report.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>

namespace cmlhdc {

using nlohmann::json;

Real mean(const std::vector<Real>& xs) {
  if (xs.empty()) return 0;
  return std::accumulate(xs.begin(), xs.end(), Real(0)) / static_cast<Real>(xs.size());
}

Real sample_std(const std::vector<Real>& xs) {
  if (xs.size() < 2) return 0;
  const Real m = mean(xs);
  Real ss = 0;
  for (Real x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<Real>(xs.size() - 1));
}

Interval wilson_interval(long long successes, long long trials, Real z) {
  if (trials <= 0) return {0, 1};
  const Real n = static_cast<Real>(trials);
  const Real p = static_cast<Real>(successes) / n;
  const Real z2 = z * z;
  const Real denom = 1 + z2 / n;
  const Real centre = (p + z2 / (2 * n)) / denom;
  const Real half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
  return {std::max(Real(0), centre - half), std::min(Real(1), centre + half)};
}

namespace {

std::vector<Real> numbers(const std::vector<json>& trials, const char* key) {
  std::vector<Real> out;
  for (const auto& t : trials)
    if (t.contains(key)) out.push_back(t.at(key).get<Real>());
  return out;
}

long long count_true(const std::vector<json>& trials, const char* key) {
  long long n = 0;
  for (const auto& t : trials)
    if (t.value(key, false)) ++n;
  return n;
}

void add_fraction(json& agg, const char* prefix, long long hits, long long total) {
  const std::string p(prefix);
  const Interval ci = wilson_interval(hits, total);
  agg[p + "_fraction"] = total > 0 ? static_cast<Real>(hits) / static_cast<Real>(total) : 0.0;
  agg[p + "_ci95"] = {ci.lo, ci.hi};
}

json trial_aggregates(const std::string& experiment, const std::vector<json>& trials) {
  json agg;
  const auto n = static_cast<long long>(trials.size());
  const long long successes = count_true(trials, "success");
  agg["trials"] = n;
  agg["successes"] = successes;
  add_fraction(agg, "success", successes, n);

  const auto steps = numbers(trials, "steps");
  agg["steps_mean"] = mean(steps);
  agg["steps_std"] = sample_std(steps);

  std::map<std::string, long long> failures;
  for (const auto& t : trials)
    if (!t.value("success", false)) ++failures[t.value("failure_reason", std::string("unknown"))];
  agg["failures"] = failures;
  const long long failed = n - successes;
  agg["dither_share_of_failures"] =
      failed > 0 ? static_cast<Real>(failures["dither_abort"]) / static_cast<Real>(failed) : 0.0;
  if (failures["dither_abort"] == 0) agg["failures"].erase("dither_abort");

  if (experiment != "grid_only") {
    long long rejected = 0;
    for (const auto& t : trials) rejected += t.value("rejections", 0LL);
    agg["rejections_total"] = rejected;
    const long long generated = rejected + n;
    agg["rejection_rate"] = generated > 0 ? static_cast<Real>(rejected) / static_cast<Real>(generated) : 0.0;
  }
  if (experiment == "door_removal") agg["door_visits"] = count_true(trials, "door_visited");
  return agg;
}

bool close(const json& a, const json& b) {
  if (a.is_number() && b.is_number()) {
    const Real x = a.get<Real>();
    const Real y = b.get<Real>();
    return std::abs(x - y) <= 1e-12 * std::max({Real(1), std::abs(x), std::abs(y)});
  }
  if (a.is_object() && b.is_object()) {
    if (a.size() != b.size()) return false;
    for (auto it = a.begin(); it != a.end(); ++it)
      if (!b.contains(it.key()) || !close(it.value(), b.at(it.key()))) return false;
    return true;
  }
  if (a.is_array() && b.is_array()) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!close(a[i], b[i])) return false;
    return true;
  }
  return a == b;
}

json header_record(const ExperimentReport& report) {
  json config = json::object();
  for (const auto& [k, v] : report.config) config[k] = v;
  return {{"record", "header"},
          {"schema", "cmlhdc-report"},
          {"format_version", kReportFormatVersion},
          {"experiment", report.experiment},
          {"config", config}};
}

std::string fmt(Real v, int precision = 4) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(precision) << v;
  return out.str();
}

}  // namespace

json compute_aggregates(const std::string& experiment, const std::vector<json>& trials) {
  if (experiment == "mission" || experiment == "door_removal" || experiment == "grid_only") {
    return trial_aggregates(experiment, trials);
  }
  json agg;
  const auto n = static_cast<long long>(trials.size());
  if (experiment == "viability") {
    const long long viable = count_true(trials, "viable");
    agg["mazes"] = n;
    agg["viable"] = viable;
    add_fraction(agg, "viable", viable, n);
    agg["forward_viable"] = count_true(trials, "forward_viable");
    agg["round_trip_viable"] = count_true(trials, "round_trip_viable");
    const Real f = agg["viable_fraction"].get<Real>();
    agg["in_band"] = f >= 0.10 && f <= 0.35;
  } else if (experiment == "hdc_stats") {
    const auto sims = numbers(trials, "similarity");
    Real max_abs = 0;
    for (Real s : sims) max_abs = std::max(max_abs, std::abs(s));
    agg["pairs"] = n;
    agg["mean"] = mean(sims);
    agg["std"] = sample_std(sims);
    agg["max_abs"] = max_abs;
  } else if (experiment == "train" || experiment == "verify") {
    agg["checks"] = n;
    agg["passed"] = count_true(trials, "ok");
  } else {
    agg["records"] = n;
  }
  return agg;
}

std::vector<std::string> trial_lines(const ExperimentReport& report) {
  std::vector<std::string> lines;
  lines.reserve(report.trials.size());
  for (const auto& t : report.trials) {
    json rec = {{"record", "trial"}};
    rec.update(t);
    lines.push_back(rec.dump());
  }
  return lines;
}

std::string summary_text(const ExperimentReport& report) {
  const json& a = report.aggregates;
  std::ostringstream out;
  out << "experiment: " << report.experiment << "\n";
  if (a.contains("success_fraction")) {
    out << "success: " << a["successes"] << "/" << a["trials"] << " = " << fmt(a["success_fraction"])
        << " (95% CI " << fmt(a["success_ci95"][0]) << ".." << fmt(a["success_ci95"][1]) << ")\n";
    out << "steps: " << fmt(a["steps_mean"], 2) << " +- " << fmt(a["steps_std"], 2) << "\n";
    for (auto it = a["failures"].begin(); it != a["failures"].end(); ++it) {
      out << "failure " << it.key() << ": " << it.value() << "\n";
    }
    if (a.contains("rejection_rate")) {
      out << "non-viable mazes rejected: " << a["rejections_total"] << " (rate " << fmt(a["rejection_rate"]) << ")\n";
    }
    if (a.contains("door_visits")) out << "trials visiting the removed door: " << a["door_visits"] << "\n";
  } else if (a.contains("viable_fraction")) {
    out << "viable: " << a["viable"] << "/" << a["mazes"] << " = " << fmt(a["viable_fraction"]) << " (95% CI "
        << fmt(a["viable_ci95"][0]) << ".." << fmt(a["viable_ci95"][1]) << ")\n";
    out << "forward-only viable: " << a["forward_viable"] << ", full round trip: " << a["round_trip_viable"] << "\n";
    if (!a["in_band"].get<bool>()) out << "FLAG: viable fraction outside [0.10, 0.35]\n";
  } else if (a.contains("pairs")) {
    out << "pairs: " << a["pairs"] << "\nmean: " << fmt(a["mean"], 5) << "\nstd: " << fmt(a["std"], 5)
        << "\nmax |cos|: " << fmt(a["max_abs"], 5) << "\n";
  } else if (a.contains("checks")) {
    out << "checks passed: " << a["passed"] << "/" << a["checks"] << "\n";
  }
  out << "wall clock: " << fmt(report.wall_clock_s, 2) << " s\n";
  return out.str();
}

std::filesystem::path write_report(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto path = dir / (report.experiment + ".jsonl");
  {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error(ErrorKind::io_error, "cannot write " + path.string());
    out << header_record(report).dump() << "\n";
    for (const auto& line : trial_lines(report)) out << line << "\n";
    json summary = {{"record", "summary"}, {"aggregates", report.aggregates}, {"wall_clock_s", report.wall_clock_s}};
    out << summary.dump() << "\n";
    if (!out) throw Error(ErrorKind::io_error, "write failed for " + path.string());
  }
  std::ofstream txt(dir / (report.experiment + ".summary.txt"), std::ios::trunc);
  txt << summary_text(report);
  if (!txt) throw Error(ErrorKind::io_error, "write failed for summary of " + report.experiment);
  return path;
}

ExperimentReport read_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_error, "cannot read " + path.string());
  ExperimentReport report;
  bool header = false;
  bool summary = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no) + ": ";
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::parse_error, where + "malformed record (" + e.what() + ")");
    }
    const std::string kind = rec.is_object() ? rec.value("record", std::string()) : std::string();
    if (!header && kind != "header") throw Error(ErrorKind::parse_error, where + "expected a header record");
    try {
      if (kind == "header") {
        if (header) throw Error(ErrorKind::parse_error, "second header record");
        if (rec.at("format_version").get<int>() != kReportFormatVersion) {
          throw Error(ErrorKind::parse_error, "unsupported report format version");
        }
        header = true;
        report.experiment = rec.at("experiment").get<std::string>();
        for (auto it = rec.at("config").begin(); it != rec.at("config").end(); ++it) {
          report.config.emplace_back(it.key(), it.value().get<std::string>());
        }
      } else if (kind == "trial") {
        if (summary) throw Error(ErrorKind::parse_error, "trial record after the summary");
        rec.erase("record");
        report.trials.push_back(std::move(rec));
      } else if (kind == "summary") {
        summary = true;
        report.aggregates = rec.at("aggregates");
        report.wall_clock_s = rec.at("wall_clock_s").get<double>();
      } else {
        throw Error(ErrorKind::parse_error, "unknown record type '" + kind + "'");
      }
    } catch (const json::exception& e) {
      throw Error(ErrorKind::parse_error, where + e.what());
    } catch (const Error& e) {
      throw Error(ErrorKind::parse_error, where + e.what());
    }
  }
  if (!header) throw Error(ErrorKind::parse_error, path.string() + ": empty report");
  return report;
}

void validate_report(const ExperimentReport& report) {
  const json expected = compute_aggregates(report.experiment, report.trials);
  if (!close(expected, report.aggregates)) {
    throw Error(ErrorKind::verification_failure,
                "aggregates of " + report.experiment + " do not match their trial records");
  }
}

}  // namespace cmlhdc
