#include "cmlhdc/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

namespace cmlhdc {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T v{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw Error(ErrorKind::invalid_argument, "bad value for " + key + ": '" + value + "'");
  }
  return v;
}

std::string show(Real v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ",") + s;
  return out;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream in(value);
  for (std::string item; std::getline(in, item, ',');) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct Field {
  std::string key;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <typename T>
Field number_field(std::string key, T ExperimentConfig::*member) {
  return {key, [key, member](ExperimentConfig& c, const std::string& v) { c.*member = parse_number<T>(key, v); },
          [member](const ExperimentConfig& c) {
            if constexpr (std::is_floating_point_v<T>) return show(c.*member);
            else return std::to_string(c.*member);
          }};
}

template <typename Outer, typename T>
Field nested_field(std::string key, Outer ExperimentConfig::*outer, T Outer::*member) {
  return {key,
          [key, outer, member](ExperimentConfig& c, const std::string& v) { c.*outer.*member = parse_number<T>(key, v); },
          [outer, member](const ExperimentConfig& c) {
            if constexpr (std::is_floating_point_v<T>) return show(c.*outer.*member);
            else return std::to_string(c.*outer.*member);
          }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(number_field("d", &ExperimentConfig::d));
    f.push_back(nested_field("theta", &ExperimentConfig::thresholds, &Thresholds::theta));
    f.push_back(nested_field("theta_o", &ExperimentConfig::thresholds, &Thresholds::theta_o));
    f.push_back(nested_field("phi_o", &ExperimentConfig::thresholds, &Thresholds::phi_o));
    f.push_back(nested_field("phi_g", &ExperimentConfig::thresholds, &Thresholds::phi_g));
    f.push_back({"object_init", [](ExperimentConfig& c, const std::string& v) { c.object_init = v; },
                 [](const ExperimentConfig& c) { return c.object_init; }});
    f.push_back(number_field("object_learning_rate", &ExperimentConfig::object_learning_rate));
    f.push_back(number_field("object_max_epochs", &ExperimentConfig::object_max_epochs));
    f.push_back(number_field("grid_learning_rate", &ExperimentConfig::grid_learning_rate));
    f.push_back(number_field("grid_max_epochs", &ExperimentConfig::grid_max_epochs));
    f.push_back({"grid_actions", [](ExperimentConfig& c, const std::string& v) { c.grid_actions = v; },
                 [](const ExperimentConfig& c) { return c.grid_actions; }});
    f.push_back(nested_field("grid_leg_cap", &ExperimentConfig::caps, &StepCaps::grid_leg));
    f.push_back(nested_field("object_hop_cap", &ExperimentConfig::caps, &StepCaps::object_hops));
    f.push_back(nested_field("mission_cell_cap", &ExperimentConfig::caps, &StepCaps::mission_cells));
    f.push_back(number_field("hdc_pairs", &ExperimentConfig::hdc_pairs));
    f.push_back(number_field("mission_trials", &ExperimentConfig::mission_trials));
    f.push_back(number_field("door_trials", &ExperimentConfig::door_trials));
    f.push_back(number_field("grid_only_trials", &ExperimentConfig::grid_only_trials));
    f.push_back(number_field("viability_mazes", &ExperimentConfig::viability_mazes));
    f.push_back(number_field("verify_grid_pairs", &ExperimentConfig::verify_grid_pairs));
    f.push_back(number_field("max_regenerations", &ExperimentConfig::max_regenerations));
    f.push_back({"policy", [](ExperimentConfig& c, const std::string& v) { c.policy = split_list(v); },
                 [](const ExperimentConfig& c) { return join(c.policy); }});
    f.push_back({"seed",
                 [](ExperimentConfig& c, const std::string& v) {
                   c.seed = v.empty() ? std::nullopt : std::optional(parse_number<std::uint64_t>("seed", v));
                 },
                 [](const ExperimentConfig& c) { return c.seed ? std::to_string(*c.seed) : std::string(); }});
    f.push_back(number_field("workers", &ExperimentConfig::workers));
    f.push_back({"model_dir", [](ExperimentConfig& c, const std::string& v) { c.model_dir = v; },
                 [](const ExperimentConfig& c) { return c.model_dir.string(); }});
    f.push_back({"out_dir", [](ExperimentConfig& c, const std::string& v) { c.out_dir = v; },
                 [](const ExperimentConfig& c) { return c.out_dir.string(); }});
    return f;
  }();
  return table;
}

void check_threshold(const char* name, Real v) {
  if (!(v >= 0 && v < 1)) throw Error(ErrorKind::invalid_argument, std::string(name) + " must lie in [0, 1)");
}

void check_positive(const char* name, long long v) {
  if (v <= 0) throw Error(ErrorKind::invalid_argument, std::string(name) + " must be positive");
}

}  // namespace

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  const auto& f = fields();
  auto it = std::find_if(f.begin(), f.end(), [&](const Field& field) { return field.key == key; });
  if (it == f.end()) throw Error(ErrorKind::invalid_argument, "unknown config key '" + key + "'");
  it->set(*this, value);
}

void ExperimentConfig::validate() const {
  if (d < 512) throw Error(ErrorKind::invalid_dimension, "d must be at least 512");
  check_threshold("theta", thresholds.theta);
  check_threshold("theta_o", thresholds.theta_o);
  check_threshold("phi_o", thresholds.phi_o);
  check_threshold("phi_g", thresholds.phi_g);
  if (object_init != "calculated" && object_init != "learned") {
    throw Error(ErrorKind::invalid_argument, "object_init must be 'calculated' or 'learned'");
  }
  if (grid_actions != "gaussian" && grid_actions != "bipolar") {
    throw Error(ErrorKind::invalid_argument, "grid_actions must be 'gaussian' or 'bipolar'");
  }
  if (!(object_learning_rate > 0) || !(grid_learning_rate > 0)) {
    throw Error(ErrorKind::invalid_argument, "learning rates must be positive");
  }
  check_positive("object_max_epochs", object_max_epochs);
  check_positive("grid_max_epochs", grid_max_epochs);
  if (caps.grid_leg < 0 || caps.object_hops < 0 || caps.mission_cells < 0) {
    throw Error(ErrorKind::invalid_argument, "step caps must be non-negative");
  }
  check_positive("hdc_pairs", hdc_pairs);
  check_positive("mission_trials", mission_trials);
  check_positive("door_trials", door_trials);
  check_positive("grid_only_trials", grid_only_trials);
  check_positive("viability_mazes", viability_mazes);
  check_positive("verify_grid_pairs", verify_grid_pairs);
  check_positive("max_regenerations", max_regenerations);
  if (policy.empty()) throw Error(ErrorKind::invalid_argument, "policy needs at least one goal");
  for (const auto& goal : policy) {
    if (std::find(kObjectLabels.begin(), kObjectLabels.end(), goal) == kObjectLabels.end()) {
      throw Error(ErrorKind::invalid_argument, "policy names unknown object '" + goal + "'");
    }
  }
  if (workers < 0) throw Error(ErrorKind::invalid_argument, "workers must be non-negative");
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& f : fields()) out.emplace_back(f.key, f.get(*this));
  return out;
}

std::uint64_t ExperimentConfig::require_seed() const {
  if (!seed) throw Error(ErrorKind::invalid_argument, "experiments need an explicit --seed");
  return *seed;
}

int ExperimentConfig::worker_count() const {
  if (workers > 0) return workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

ExperimentConfig parse_config(const std::string& text, ExperimentConfig base, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(line_no) + ": ";
    if (eq == std::string::npos) throw Error(ErrorKind::parse_error, where + "expected 'key = value'");
    try {
      base.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const Error& e) {
      throw Error(ErrorKind::parse_error, where + e.what());
    }
  }
  return base;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_error, "cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), std::move(base), path.string());
}

void apply_override(ExperimentConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw Error(ErrorKind::invalid_argument, "override must be key=value: " + assignment);
  config.set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

}  // namespace cmlhdc
