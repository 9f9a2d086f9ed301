#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "optoarray/fock_oracle.hpp"
#include "optoarray/sweep.hpp"

namespace optoarray {

enum class RunMode { Evolve, Steady, Sweep, Stability, OracleCheck, CheckAppendix };

std::string_view to_string(RunMode mode);
/// Throws Error("parse-error") for unknown names.
RunMode parse_run_mode(const std::string& text);

struct OracleSettings {
  fock::TruncationSpec truncation;
  double t_max = 5.0;
  double dt_out = 0.5;
  double tolerance = 1e-3;  // allowed covariance mismatch between engines
};

struct RunSpec {
  RunMode mode = RunMode::Evolve;
  double t_max = 10.0;
  double dt_out = 0.01;
  std::vector<Observable> observables;  // empty: default_observables
  std::optional<SweepSpec> sweep;
  std::optional<OracleSettings> oracle;
};

struct Scenario {
  std::string name;
  std::string description;
  std::string figure;
  NetworkSpec network;
  RunSpec run;
};

/// Parses the YAML scenario grammar documented in the README. Unknown keys,
/// missing required fields and malformed values raise Error("parse-error")
/// with the origin, line and field path in the message.
Scenario parse_scenario(const std::string& text, const std::string& origin = "<string>");
Scenario load_scenario_file(const std::filesystem::path& path);

/// Directory holding the bundled figure scenarios.
std::filesystem::path default_scenario_dir();

class ScenarioCatalog {
 public:
  explicit ScenarioCatalog(std::filesystem::path dir = default_scenario_dir());

  /// Scenario names (file stems) in lexical order.
  std::vector<std::string> names() const;
  /// Throws Error("unknown-scenario") when no file matches.
  Scenario load(const std::string& name) const;
  const std::filesystem::path& directory() const noexcept { return dir_; }

 private:
  std::filesystem::path dir_;
};

/// Accepts a path to a scenario file or the name of a bundled scenario.
Scenario resolve_scenario(const std::string& name_or_path,
                          const ScenarioCatalog& catalog = ScenarioCatalog());

}  // namespace optoarray
