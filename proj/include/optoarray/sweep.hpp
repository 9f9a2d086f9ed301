#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "optoarray/csv.hpp"
#include "optoarray/entanglement.hpp"

namespace optoarray {

/// Something measured on a covariance state. Negativities produce one column
/// (EN_b1_b2); correlations produce a real and an imaginary column
/// (re_a1a2dag, im_a1a2dag).
struct Observable {
  enum class Kind { Negativity, Correlation };
  Kind kind = Kind::Negativity;
  ModeIndex first;
  ModeIndex second;
  CorrelationForm form = CorrelationForm::Mixed;

  static Observable negativity(ModeIndex m1, ModeIndex m2);
  /// Parses "a1a2dag" (mixed), "b2b1" (pair) or "b1dagb1" (number).
  static Observable correlation(const std::string& text);
  /// Parses "b1:b2" or "EN_b1_b2" as a negativity pair.
  static Observable parse_pair(const std::string& text);

  std::string label() const;
  std::vector<std::string> columns() const;
};

/// All inter-cavity phonon-phonon pairs followed by every (a_j, b_k), j != k.
std::vector<Observable> default_observables(const ValidatedNetwork& network);

std::vector<double> measure(const Eigen::MatrixXd& sigma, const ModeTable& modes,
                            const std::vector<Observable>& observables);

struct AtTimes {
  std::vector<double> times;
};
struct SteadyState {};
struct MaxOverTime {
  double horizon = 10.0;
  double step = 0.01;
};
using Evaluation = std::variant<AtTimes, SteadyState, MaxOverTime>;

/// Parameter paths: cavity[i].<kappa|mu|omega_m|detuning|g|nbar> with i a
/// zero-based cavity position or '*' for every cavity, and coupling[i].chi.
struct SweepAxis {
  std::string path;
  std::vector<double> values;
};

struct SweepSpec {
  std::vector<SweepAxis> axes;  // cartesian product, first axis slowest
  std::vector<Observable> observables;
  Evaluation evaluation = SteadyState{};
};

struct SweepRow {
  std::vector<double> parameters;
  std::optional<double> t;                    // set for AtTimes evaluations
  std::optional<std::vector<double>> values;  // empty when the point is unstable
};

struct SweepResult {
  std::vector<std::string> parameter_names;
  std::vector<std::string> columns;
  bool has_time = false;
  std::vector<SweepRow> rows;

  Table to_table() const;
};

/// Throws Error("unresolvable-path") when the path names nothing.
void apply_parameter(NetworkSpec& network, const std::string& path, double value);

/// Evaluates every grid point independently; `jobs` > 1 spreads points over
/// worker threads without changing the row order. Points whose drift matrix is
/// not Hurwitz are reported as unstable in steady-state evaluations.
SweepResult run_sweep(const NetworkSpec& network, const SweepSpec& sweep, int jobs = 1);

}  // namespace optoarray
