#pragma once

#include <optional>

#include "optoarray/appendix.hpp"
#include "optoarray/scenario.hpp"

namespace optoarray {

struct RunOptions {
  std::optional<RunMode> mode;           // overrides the scenario's run.mode
  std::optional<InitialState> initial;   // overrides the scenario's initial state
  int jobs = 1;
};

struct RunOutput {
  Table table;
  bool passed = true;  // oracle-check and check-appendix verdicts
  std::optional<QuadraticGenerator> generator;  // absent for check-appendix
};

/// Executes one scenario and returns its CSV table. Steady mode throws
/// UnstableError when the drift matrix is not Hurwitz.
RunOutput execute(const Scenario& scenario, const RunOptions& options = {});

/// Columns t, then one per observable (defaults when none are listed).
Table evolve_table(const ValidatedNetwork& network, const RunSpec& run);
Table steady_table(const ValidatedNetwork& network, const RunSpec& run);
/// Eigenvalues of the drift matrix, most unstable first, plus the verdict.
Table stability_table(const ValidatedNetwork& network);

/// One row per independent covariance entry and output time.
Table oracle_table(const ValidatedNetwork& network, const OracleSettings& settings,
                   bool& passed, const std::string& label = "");

/// Formula versus full model for g1, g2 in {0.01, 0.02, 0.05}, both kinds.
Table appendix_table(bool& passed);

/// Quadrature label for covariance row i: q_a1, p_a1, q_b1, ...
std::string quadrature_name(const ModeTable& modes, int row);

}  // namespace optoarray
