#include "optoarray/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace optoarray {

std::string_view to_string(RunMode mode) {
  switch (mode) {
    case RunMode::Evolve: return "evolve";
    case RunMode::Steady: return "steady";
    case RunMode::Sweep: return "sweep";
    case RunMode::Stability: return "stability";
    case RunMode::OracleCheck: return "oracle-check";
    case RunMode::CheckAppendix: return "check-appendix";
  }
  return "?";
}

RunMode parse_run_mode(const std::string& text) {
  for (auto m : {RunMode::Evolve, RunMode::Steady, RunMode::Sweep, RunMode::Stability,
                 RunMode::OracleCheck, RunMode::CheckAppendix}) {
    if (text == to_string(m)) return m;
  }
  throw Error("parse-error", "unknown run mode '" + text + "'");
}

namespace {

// Carries the origin and field path so every message can point at the source.
class Reader {
 public:
  Reader(const YAML::Node& node, std::string origin, std::string path)
      : node_(node), origin_(std::move(origin)), path_(std::move(path)) {}

  [[noreturn]] void fail(const std::string& message) const {
    std::ostringstream os;
    os << origin_;
    const auto mark = node_.Mark();
    if (mark.line >= 0) os << ':' << mark.line + 1;
    os << ": " << (path_.empty() ? "<root>" : path_) << ": " << message;
    throw Error("parse-error", os.str());
  }

  const YAML::Node& node() const { return node_; }
  const std::string& path() const { return path_; }

  void expect_map(std::initializer_list<std::string_view> allowed) const {
    if (!node_.IsMap()) fail("expected a mapping");
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        Reader(kv.first, origin_, join(key)).fail("unknown key");
      }
    }
  }

  bool has(const std::string& key) const { return node_.IsMap() && node_[key]; }

  Reader child(const std::string& key) const {
    if (!has(key)) fail("missing required field '" + key + "'");
    return Reader(node_[key], origin_, join(key));
  }
  Reader item(std::size_t i) const {
    return Reader(node_[i], origin_, path_ + "[" + std::to_string(i) + "]");
  }

  std::vector<Reader> items() const {
    if (!node_.IsSequence()) fail("expected a list");
    std::vector<Reader> out;
    for (std::size_t i = 0; i < node_.size(); ++i) out.push_back(item(i));
    return out;
  }

  double number() const {
    if (!node_.IsScalar()) fail("expected a number");
    try {
      return node_.as<double>();
    } catch (const YAML::Exception&) {
      fail("expected a number, got '" + node_.Scalar() + "'");
    }
  }
  int integer() const {
    if (!node_.IsScalar()) fail("expected an integer");
    try {
      return node_.as<int>();
    } catch (const YAML::Exception&) {
      fail("expected an integer, got '" + node_.Scalar() + "'");
    }
  }
  std::string text() const {
    if (!node_.IsScalar()) fail("expected a string");
    return node_.Scalar();
  }
  std::vector<double> numbers() const {
    std::vector<double> out;
    for (const auto& r : items()) out.push_back(r.number());
    return out;
  }

  double number(const std::string& key, double fallback) const {
    return has(key) ? child(key).number() : fallback;
  }

 private:
  std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  YAML::Node node_;
  std::string origin_;
  std::string path_;
};

Regime parse_regime(const Reader& r) {
  const auto s = r.text();
  if (s == "full") return Regime::Full;
  if (s == "blue_rwa") return Regime::BlueRWA;
  if (s == "red_rwa") return Regime::RedRWA;
  r.fail("unknown regime '" + s + "' (expected full, blue_rwa or red_rwa)");
}

CouplingKind parse_kind(const Reader& r) {
  const auto s = r.text();
  if (s == "reversible") return CouplingKind::Reversible;
  if (s == "cascaded") return CouplingKind::Cascaded;
  r.fail("unknown coupling kind '" + s + "' (expected reversible or cascaded)");
}

InitialState parse_initial(const Reader& r) {
  const auto s = r.text();
  if (s == "vacuum") return InitialState::VacuumAll;
  if (s == "thermal" || s == "thermal_mechanics") return InitialState::ThermalMechanics;
  r.fail("unknown initial state '" + s + "' (expected vacuum or thermal)");
}

CavitySpec parse_cavity(const Reader& r) {
  r.expect_map({"index", "kappa", "mu", "omega_m", "detuning", "regime", "g", "nbar", "drive"});
  CavitySpec c;
  c.index = r.child("index").integer();
  c.kappa = r.child("kappa").number();
  c.mu = r.child("mu").number();
  c.omega_m = r.child("omega_m").number();
  c.regime = parse_regime(r.child("regime"));
  if (c.regime == Regime::Full) {
    c.detuning = r.child("detuning").number();
  } else {
    c.detuning = r.number("detuning", 0.0);
  }
  c.nbar = r.number("nbar", 0.0);
  if (r.has("drive")) {
    if (r.has("g")) r.fail("give either 'g' or 'drive', not both");
    const auto d = r.child("drive");
    d.expect_map({"E", "G0"});
    const auto e = d.child("E").numbers();
    if (e.size() != 2) d.child("E").fail("expected [re, im]");
    c.drive = RawDriveSpec{{e[0], e[1]}, d.child("G0").number()};
  } else {
    c.g = r.child("g").number();
  }
  return c;
}

CouplingSpec parse_coupling(const Reader& r) {
  r.expect_map({"kind", "from", "to", "chi"});
  CouplingSpec e;
  e.kind = parse_kind(r.child("kind"));
  e.from = r.child("from").integer();
  e.to = r.child("to").integer();
  if (e.kind == CouplingKind::Reversible) {
    e.chi = r.child("chi").number();
  } else if (r.has("chi")) {
    r.child("chi").fail("cascaded couplings take no 'chi'");
  }
  return e;
}

std::vector<double> parse_values(const Reader& axis) {
  if (axis.has("values") == axis.has("linspace")) {
    axis.fail("give exactly one of 'values' or 'linspace'");
  }
  if (axis.has("values")) return axis.child("values").numbers();
  const auto ls = axis.child("linspace");
  ls.expect_map({"from", "to", "count"});
  const double from = ls.child("from").number(), to = ls.child("to").number();
  const int count = ls.child("count").integer();
  if (count < 1) ls.child("count").fail("count must be positive");
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    out[i] = count == 1 ? from : from + (to - from) * i / (count - 1);
  }
  return out;
}

Evaluation parse_evaluation(const Reader& r) {
  r.expect_map({"kind", "times", "t_max", "dt_out", "horizon", "step"});
  const auto kind = r.child("kind").text();
  if (kind == "steady") return SteadyState{};
  if (kind == "max_over_time") {
    MaxOverTime m;
    m.horizon = r.child("horizon").number();
    m.step = r.child("step").number();
    if (!(m.horizon > 0.0) || !(m.step > 0.0)) r.fail("horizon and step must be positive");
    return m;
  }
  if (kind == "at_times") {
    if (r.has("times")) return AtTimes{r.child("times").numbers()};
    const double t_max = r.child("t_max").number(), dt = r.child("dt_out").number();
    if (!(dt > 0.0) || !(t_max >= 0.0)) r.fail("t_max must be non-negative and dt_out positive");
    return AtTimes{uniform_grid(0.0, t_max, dt)};
  }
  r.child("kind").fail("unknown evaluation '" + kind + "' (expected steady, max_over_time or at_times)");
}

std::vector<Observable> parse_observables(const Reader& run) {
  std::vector<Observable> out;
  try {
    if (run.has("pairs")) {
      for (const auto& p : run.child("pairs").items()) out.push_back(Observable::parse_pair(p.text()));
    }
    if (run.has("correlations")) {
      for (const auto& c : run.child("correlations").items()) {
        out.push_back(Observable::correlation(c.text()));
      }
    }
  } catch (const Error& e) {
    if (e.code() == "parse-error") throw;
    run.fail(e.what());
  }
  return out;
}

RunSpec parse_run(const Reader& r) {
  r.expect_map({"mode", "t_max", "dt_out", "pairs", "correlations", "sweep", "oracle"});
  RunSpec run;
  try {
    run.mode = parse_run_mode(r.child("mode").text());
  } catch (const Error& e) {
    r.child("mode").fail(e.what());
  }
  run.t_max = r.number("t_max", run.t_max);
  run.dt_out = r.number("dt_out", run.dt_out);
  if (!(run.dt_out > 0.0) || !(run.t_max >= 0.0)) r.fail("t_max must be non-negative and dt_out positive");
  run.observables = parse_observables(r);

  if (r.has("sweep")) {
    const auto s = r.child("sweep");
    s.expect_map({"axes", "evaluation"});
    SweepSpec sweep;
    for (const auto& axis : s.child("axes").items()) {
      axis.expect_map({"path", "values", "linspace"});
      sweep.axes.push_back({axis.child("path").text(), parse_values(axis)});
    }
    sweep.evaluation = parse_evaluation(s.child("evaluation"));
    sweep.observables = run.observables;
    run.sweep = std::move(sweep);
  } else if (run.mode == RunMode::Sweep) {
    r.fail("mode 'sweep' needs a 'sweep' block");
  }

  if (r.has("oracle")) {
    const auto o = r.child("oracle");
    o.expect_map({"cutoff", "step", "budget", "t_max", "dt_out", "tolerance"});
    OracleSettings settings;
    settings.truncation.cutoff = o.has("cutoff") ? o.child("cutoff").integer() : 4;
    settings.truncation.convergence_step = o.has("step") ? o.child("step").integer() : 1;
    if (o.has("budget")) {
      const int budget = o.child("budget").integer();
      if (budget < 1) o.child("budget").fail("budget must be positive");
      settings.truncation.budget = static_cast<std::size_t>(budget);
    }
    settings.t_max = o.number("t_max", settings.t_max);
    settings.dt_out = o.number("dt_out", settings.dt_out);
    settings.tolerance = o.number("tolerance", settings.tolerance);
    if (settings.truncation.cutoff < 2) o.child("cutoff").fail("cutoff must be at least 2");
    run.oracle = settings;
  }
  return run;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw Error("parse-error", origin + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  const Reader r(root, origin, "");
  r.expect_map({"name", "description", "figure", "cavities", "couplings", "initial_state", "run"});

  Scenario s;
  s.name = r.child("name").text();
  s.description = r.has("description") ? r.child("description").text() : "";
  s.figure = r.has("figure") ? r.child("figure").text() : "";
  for (const auto& c : r.child("cavities").items()) s.network.cavities.push_back(parse_cavity(c));
  if (r.has("couplings")) {
    for (const auto& e : r.child("couplings").items()) {
      s.network.couplings.push_back(parse_coupling(e));
    }
  }
  if (r.has("initial_state")) s.network.initial_state = parse_initial(r.child("initial_state"));
  if (r.has("run")) s.run = parse_run(r.child("run"));
  return s;
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("file-error", "cannot open scenario file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), path.string());
}

std::filesystem::path default_scenario_dir() { return OPTOARRAY_SCENARIO_DIR; }

ScenarioCatalog::ScenarioCatalog(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::vector<std::string> ScenarioCatalog::names() const {
  std::vector<std::string> out;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir_, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".yaml") {
      out.push_back(entry.path().stem().string());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Scenario ScenarioCatalog::load(const std::string& name) const {
  const auto path = dir_ / (name + ".yaml");
  if (!std::filesystem::is_regular_file(path)) {
    throw Error("unknown-scenario", "no bundled scenario named '" + name + "' in " + dir_.string());
  }
  return load_scenario_file(path);
}

Scenario resolve_scenario(const std::string& name_or_path, const ScenarioCatalog& catalog) {
  const std::filesystem::path p(name_or_path);
  if (std::filesystem::is_regular_file(p)) return load_scenario_file(p);
  return catalog.load(name_or_path);
}

}  // namespace optoarray
