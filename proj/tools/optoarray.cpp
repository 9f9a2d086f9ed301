#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>

#include "optoarray/runner.hpp"

using namespace optoarray;
namespace fs = std::filesystem;

namespace {

enum Exit { ok = 0, failure = 1, invalid = 2, unstable = 3 };

void emit(const Table& table, const std::string& out) {
  if (out.empty() || out == "-") {
    write_csv(std::cout, table);
    return;
  }
  std::ofstream file(out, std::ios::binary);
  if (!file) throw Error("file-error", "cannot write '" + out + "'");
  write_csv(file, table);
}

void dump_generator(const QuadraticGenerator& gen, const std::string& out,
                    const std::string& scenario) {
  const fs::path base = out.empty() || out == "-" ? fs::path(scenario).stem() : fs::path(out);
  const fs::path stem = base.parent_path() / base.stem();
  for (const auto& [suffix, m] : {std::pair{"_A.csv", &gen.drift()}, {"_D.csv", &gen.diffusion()}}) {
    std::ofstream file(stem.string() + suffix, std::ios::binary);
    if (!file) throw Error("file-error", "cannot write '" + stem.string() + suffix + "'");
    write_matrix_csv(file, *m);
  }
}

int report(const Error& e) {
  std::cerr << "error [" << e.code() << "]: " << e.what() << '\n';
  if (const auto* v = dynamic_cast<const ValidationError*>(&e)) {
    for (const auto& issue : v->issues()) {
      std::cerr << "  " << issue.field << ": " << issue.code << ": " << issue.message << '\n';
    }
  }
  if (e.code() == "unstable-no-steady-state") return unstable;
  static const std::set<std::string> input_errors = {
      "parse-error",     "file-error",     "unknown-scenario", "invalid-parameter",
      "unresolvable-path", "bad-observable", "unknown-mode",    "identical-modes"};
  const bool bad_input = dynamic_cast<const ValidationError*>(&e) || input_errors.count(e.code());
  return bad_input ? invalid : failure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian simulation of linearised optomechanical cavity arrays"};
  app.require_subcommand(1);
  std::string scenario_dir = default_scenario_dir().string();
  app.add_option("--scenario-dir", scenario_dir, "Directory of bundled scenarios");

  std::string scenario, mode_name, out, initial_name;
  int jobs = 1;
  bool dump = false;
  auto* run = app.add_subcommand("run", "Run a scenario file or bundled scenario");
  run->add_option("scenario", scenario, "Scenario name or path")->required();
  run->add_option("--mode", mode_name, "evolve|steady|sweep|stability|oracle-check|check-appendix")
      ->check(CLI::IsMember({"evolve", "steady", "sweep", "stability", "oracle-check",
                             "check-appendix"}));
  run->add_option("--out", out, "Output CSV path (default stdout)");
  run->add_option("--jobs", jobs, "Worker threads for sweeps")->check(CLI::Range(1, 256));
  run->add_flag("--dump-generator", dump, "Also write <out>_A.csv and <out>_D.csv");
  run->add_option("--initial", initial_name, "Initial state")
      ->check(CLI::IsMember({"vacuum", "thermal"}));

  auto* list = app.add_subcommand("list", "List bundled scenarios");

  std::vector<std::string> oracle_names;
  std::string oracle_out;
  auto* oracle = app.add_subcommand("oracle-check", "Compare the Gaussian engine with the Fock oracle");
  oracle->add_option("scenarios", oracle_names, "Scenarios to check (default: bundled oracle_*)");
  oracle->add_option("--out", oracle_out, "Output CSV path (default stdout)");

  std::string appendix_out;
  auto* appendix = app.add_subcommand("check-appendix", "Compare adiabatic formulas with the full model");
  appendix->add_option("--out", appendix_out, "Output CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : invalid;
  }

  const ScenarioCatalog catalog(scenario_dir);
  try {
    if (*run) {
      const Scenario s = resolve_scenario(scenario, catalog);
      RunOptions options;
      if (!mode_name.empty()) options.mode = parse_run_mode(mode_name);
      if (!initial_name.empty()) {
        options.initial = initial_name == "vacuum" ? InitialState::VacuumAll
                                                   : InitialState::ThermalMechanics;
      }
      options.jobs = jobs;
      const auto result = execute(s, options);
      emit(result.table, out);
      if (dump && result.generator) dump_generator(*result.generator, out, s.name);
      return result.passed ? ok : failure;
    }
    if (*list) {
      int status = ok;
      for (const auto& name : catalog.names()) {
        try {
          const auto s = catalog.load(name);
          validate(s.network);
          const char* kind = "none";
          if (!s.network.couplings.empty()) kind = to_string(s.network.couplings.front().kind).data();
          std::cout << name << '\t' << (s.figure.empty() ? "-" : s.figure) << '\t' << kind << '\t'
                    << s.description << '\n';
        } catch (const Error& e) {
          std::cout << name << "\tINVALID\t" << e.what() << '\n';
          status = invalid;
        }
      }
      return status;
    }
    if (*oracle) {
      if (oracle_names.empty()) {
        for (const auto& name : catalog.names()) {
          if (name.rfind("oracle_", 0) == 0) oracle_names.push_back(name);
        }
      }
      Table all;
      bool passed = true;
      for (const auto& name : oracle_names) {
        const Scenario s = resolve_scenario(name, catalog);
        bool ok_one = true;
        auto t = oracle_table(validate(s.network), s.run.oracle.value_or(OracleSettings{}), ok_one,
                              s.name);
        if (all.header.empty()) all.header = t.header;
        for (auto& row : t.rows) all.rows.push_back(std::move(row));
        std::cerr << s.name << ": " << (ok_one ? "PASS" : "FAIL") << '\n';
        passed = passed && ok_one;
      }
      emit(all, oracle_out);
      return passed ? ok : failure;
    }
    if (*appendix) {
      bool passed = true;
      emit(appendix_table(passed), appendix_out);
      return passed ? ok : failure;
    }
  } catch (const UnstableError& e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << '\n';
    return unstable;
  } catch (const Error& e) {
    return report(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return failure;
  }
  return ok;
}
