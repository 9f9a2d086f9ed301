#include "optoarray/runner.hpp"

#include <cmath>

namespace optoarray {

namespace {

std::vector<Observable> observables_for(const ValidatedNetwork& network, const RunSpec& run) {
  return run.observables.empty() ? default_observables(network) : run.observables;
}

std::vector<std::string> column_names(const std::vector<Observable>& observables) {
  std::vector<std::string> out;
  for (const auto& o : observables) {
    const auto cols = o.columns();
    out.insert(out.end(), cols.begin(), cols.end());
  }
  return out;
}

}  // namespace

std::string quadrature_name(const ModeTable& modes, int row) {
  return std::string(row % 2 == 0 ? "q_" : "p_") + modes[static_cast<std::size_t>(row / 2)].name();
}

Table evolve_table(const ValidatedNetwork& network, const RunSpec& run) {
  const auto gen = build_generator(network);
  const auto observables = observables_for(network, run);
  const auto grid = uniform_grid(0.0, run.t_max, run.dt_out);
  const auto states = evolve(gen, initial_state(network, network.spec().initial_state), grid);

  Table table;
  table.header = {"t"};
  const auto cols = column_names(observables);
  table.header.insert(table.header.end(), cols.begin(), cols.end());
  for (const auto& s : states) {
    std::vector<Cell> row{s.t};
    for (double v : measure(s.sigma, gen.modes(), observables)) row.emplace_back(v);
    table.rows.push_back(std::move(row));
  }
  return table;
}

Table steady_table(const ValidatedNetwork& network, const RunSpec& run) {
  const auto gen = build_generator(network);
  const auto observables = observables_for(network, run);
  const auto ss = steady_state(gen);
  Table table;
  table.header = column_names(observables);
  std::vector<Cell> row;
  for (double v : measure(ss.sigma, gen.modes(), observables)) row.emplace_back(v);
  table.rows.push_back(std::move(row));
  return table;
}

Table stability_table(const ValidatedNetwork& network) {
  const auto report = stability(build_generator(network));
  Table table;
  table.header = {"re", "im", "hurwitz"};
  const std::string verdict = report.hurwitz ? "true" : "false";
  for (const auto& ev : report.spectrum) table.rows.push_back({ev.real(), ev.imag(), verdict});
  return table;
}

Table oracle_table(const ValidatedNetwork& network, const OracleSettings& settings, bool& passed,
                   const std::string& label) {
  const auto grid = uniform_grid(0.0, settings.t_max, settings.dt_out);
  const auto rows = fock::compare_with_gaussian(network, settings.truncation, grid);
  const ModeTable modes(network);
  Table table;
  table.header = {"scenario", "t", "row", "col", "oracle", "gaussian", "abs_diff", "pass"};
  passed = true;
  for (const auto& r : rows) {
    for (Eigen::Index i = 0; i < r.oracle.rows(); ++i) {
      for (Eigen::Index j = i; j < r.oracle.cols(); ++j) {
        const double diff = std::abs(r.oracle(i, j) - r.gaussian(i, j));
        const bool ok = diff <= settings.tolerance;
        passed = passed && ok;
        table.rows.push_back({label, r.t, quadrature_name(modes, static_cast<int>(i)),
                              quadrature_name(modes, static_cast<int>(j)), r.oracle(i, j),
                              r.gaussian(i, j), diff, std::string(ok ? "PASS" : "FAIL")});
      }
    }
  }
  return table;
}

Table appendix_table(bool& passed) {
  static constexpr double couplings[] = {0.01, 0.02, 0.05};
  Table table;
  table.header = {"kind",        "g1",          "g2",           "full_stable",
                  "re_full",     "im_full",     "re_analytic",  "im_analytic",
                  "with_vacuum", "rel_error",   "pass"};
  passed = true;
  for (auto kind : {CouplingKind::Reversible, CouplingKind::Cascaded}) {
    for (double g1 : couplings) {
      for (double g2 : couplings) {
        std::vector<Cell> row{std::string(to_string(kind)), g1, g2};
        bool ok = false;
        try {
          const auto c = compare_with_full_model(kind, g1, g2);
          row.emplace_back(std::string(c.full_model_stable ? "true" : "false"));
          if (c.full_model_stable) {
            row.insert(row.end(), {c.full.real(), c.full.imag(), c.analytic.real(),
                                   c.analytic.imag()});
            row.emplace_back(c.with_vacuum ? Cell(*c.with_vacuum) : Cell(std::string("")));
            row.emplace_back(c.relative_error);
            ok = c.relative_error <= 0.1;
          } else {
            for (int k = 0; k < 6; ++k) row.emplace_back(std::string("unstable"));
          }
        } catch (const Error& e) {
          row.emplace_back(std::string("error"));
          for (int k = 0; k < 6; ++k) row.emplace_back(std::string(e.code()));
        }
        row.emplace_back(std::string(ok ? "PASS" : "FAIL"));
        passed = passed && ok;
        table.rows.push_back(std::move(row));
      }
    }
  }
  return table;
}

RunOutput execute(const Scenario& scenario, const RunOptions& options) {
  NetworkSpec spec = scenario.network;
  if (options.initial) spec.initial_state = *options.initial;
  const RunMode mode = options.mode.value_or(scenario.run.mode);

  RunOutput out;
  if (mode == RunMode::CheckAppendix) {
    out.table = appendix_table(out.passed);
    return out;
  }
  const ValidatedNetwork network = validate(spec);
  out.generator = build_generator(network);

  switch (mode) {
    case RunMode::Evolve:
      out.table = evolve_table(network, scenario.run);
      break;
    case RunMode::Steady:
      out.table = steady_table(network, scenario.run);
      break;
    case RunMode::Sweep: {
      if (!scenario.run.sweep) {
        throw Error("parse-error", "scenario '" + scenario.name + "' has no sweep block");
      }
      SweepSpec sweep = *scenario.run.sweep;
      if (sweep.observables.empty()) sweep.observables = default_observables(network);
      out.table = run_sweep(spec, sweep, options.jobs).to_table();
      break;
    }
    case RunMode::Stability:
      out.table = stability_table(network);
      break;
    case RunMode::OracleCheck:
      out.table = oracle_table(network, scenario.run.oracle.value_or(OracleSettings{}),
                               out.passed, scenario.name);
      break;
    case RunMode::CheckAppendix:
      break;
  }
  return out;
}

}  // namespace optoarray
