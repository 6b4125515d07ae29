#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cfb/util.hpp"

namespace cfb::runner {

inline constexpr const char* kVersion = "0.1.0";

/// Named tolerance knobs, overridable per run. Unknown names are rejected.
struct Tolerances {
  double constraint = 1e-10;
  double rank = 1e-8;
  double pf = 1e-8;
  double fat = 1e-6;
  double invariance = 1e-8;
  double basic = 1e-9;

  void set(const std::string& name, double value);
  std::map<std::string, double> as_map() const;
};

struct ScenarioConfig {
  std::string scenario;
  uint64_t seed = 42;
  int samples = 0;  // 0 = scenario default
  int threads = 0;  // 0 = CFB_THREADS env or hardware
  Tolerances tol;
  std::string out_path;
};

struct CheckRecord {
  std::string name;
  bool pass = false;
  std::string kind;  // "floor" | "residual" | "value" | "count"
  double value = 0.0;
  std::string note;
  std::optional<Vec> witness;
};

struct ReportDocument {
  std::string scenario;
  nlohmann::json config_echo;
  std::vector<CheckRecord> checks;
  double wall_ms = 0.0;
  std::string version = kVersion;

  bool all_pass() const;
  nlohmann::json to_json() const;
  static ReportDocument from_json(const nlohmann::json& j);

  /// One line per check, plus a trailing summary line.
  std::string summary() const;
};

nlohmann::json config_to_json(const ScenarioConfig& config);

/// Flat keyed text with an optional [tolerances] section; '#' comments.
/// Unknown keys raise ConfigError.
ScenarioConfig parse_config_file(const std::string& path);

std::vector<std::string> scenario_names();

/// Run one scenario. Deterministic given (scenario, seed, samples,
/// tolerances); wall_ms is the only varying field.
ReportDocument run(const ScenarioConfig& config);

}  // namespace cfb::runner
