#include "optoarray/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <regex>
#include <thread>

namespace optoarray {

Observable Observable::negativity(ModeIndex m1, ModeIndex m2) {
  if (m1 == m2) throw Error("identical-modes", "negativity needs two distinct modes");
  Observable o;
  o.kind = Kind::Negativity;
  o.first = m1;
  o.second = m2;
  return o;
}

Observable Observable::correlation(const std::string& text) {
  static const std::regex pattern(R"(([ab][0-9]+)(dag)?([ab][0-9]+)(dag)?)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) {
    throw Error("bad-observable", "cannot parse correlation '" + text + "'");
  }
  Observable o;
  o.kind = Kind::Correlation;
  o.first = ModeIndex::parse(m[1]);
  o.second = ModeIndex::parse(m[3]);
  const bool dag1 = m[2].matched, dag2 = m[4].matched;
  if (!dag1 && !dag2) {
    o.form = CorrelationForm::Pair;
  } else if (!dag1 && dag2) {
    o.form = CorrelationForm::Mixed;
  } else if (dag1 && !dag2 && o.first == o.second) {
    o.form = CorrelationForm::Number;
  } else {
    throw Error("bad-observable", "unsupported correlation form '" + text + "'");
  }
  if (o.form != CorrelationForm::Number && o.first == o.second) {
    throw Error("bad-observable", "cross correlation needs two distinct modes: '" + text + "'");
  }
  return o;
}

Observable Observable::parse_pair(const std::string& text) {
  static const std::regex pattern(R"((?:EN_)?([ab][0-9]+)[:_]([ab][0-9]+))");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) {
    throw Error("bad-observable", "cannot parse mode pair '" + text + "'");
  }
  return negativity(ModeIndex::parse(m[1]), ModeIndex::parse(m[2]));
}

std::string Observable::label() const {
  if (kind == Kind::Negativity) return "EN_" + first.name() + "_" + second.name();
  switch (form) {
    case CorrelationForm::Pair: return first.name() + second.name();
    case CorrelationForm::Mixed: return first.name() + second.name() + "dag";
    case CorrelationForm::Number: return first.name() + "dag" + first.name();
  }
  return "?";
}

std::vector<std::string> Observable::columns() const {
  if (kind == Kind::Negativity) return {label()};
  return {"re_" + label(), "im_" + label()};
}

std::vector<Observable> default_observables(const ValidatedNetwork& network) {
  std::vector<Observable> out;
  const auto& cav = network.cavities();
  for (std::size_t j = 0; j < cav.size(); ++j) {
    for (std::size_t k = j + 1; k < cav.size(); ++k) {
      out.push_back(Observable::negativity({cav[j].index, ModeKind::Mechanical},
                                           {cav[k].index, ModeKind::Mechanical}));
    }
  }
  for (std::size_t j = 0; j < cav.size(); ++j) {
    for (std::size_t k = 0; k < cav.size(); ++k) {
      if (j == k) continue;
      out.push_back(Observable::negativity({cav[j].index, ModeKind::Optical},
                                           {cav[k].index, ModeKind::Mechanical}));
    }
  }
  return out;
}

std::vector<double> measure(const Eigen::MatrixXd& sigma, const ModeTable& modes,
                            const std::vector<Observable>& observables) {
  std::vector<double> out;
  for (const auto& o : observables) {
    const int m1 = modes.slot(o.first), m2 = modes.slot(o.second);
    if (o.kind == Observable::Kind::Negativity) {
      out.push_back(log_negativity(extract_two_mode(sigma, m1, m2)).E_N);
    } else {
      const auto c = mode_correlation(sigma, m1, m2, o.form);
      out.push_back(c.real());
      out.push_back(c.imag());
    }
  }
  return out;
}

Table SweepResult::to_table() const {
  Table table;
  table.header = parameter_names;
  if (has_time) table.header.push_back("t");
  table.header.insert(table.header.end(), columns.begin(), columns.end());
  for (const auto& row : rows) {
    std::vector<Cell> cells(row.parameters.begin(), row.parameters.end());
    if (has_time) cells.emplace_back(row.t.value_or(std::nan("")));
    if (row.values) {
      cells.insert(cells.end(), row.values->begin(), row.values->end());
    } else {
      cells.insert(cells.end(), columns.size(), Cell(std::string("unstable")));
    }
    table.rows.push_back(std::move(cells));
  }
  return table;
}

void apply_parameter(NetworkSpec& network, const std::string& path, double value) {
  static const std::regex cavity_path(R"(cavity\[(\*|[0-9]+)\]\.(kappa|mu|omega_m|detuning|g|nbar))");
  static const std::regex coupling_path(R"(coupling\[([0-9]+)\]\.chi)");
  std::smatch m;
  if (std::regex_match(path, m, cavity_path)) {
    auto set = [&](CavitySpec& c) {
      const std::string field = m[2];
      if (field == "kappa") c.kappa = value;
      else if (field == "mu") c.mu = value;
      else if (field == "omega_m") c.omega_m = value;
      else if (field == "detuning") c.detuning = value;
      else if (field == "g") { c.g = value; c.drive.reset(); }
      else c.nbar = value;
    };
    if (m[1] == "*") {
      for (auto& c : network.cavities) set(c);
      return;
    }
    const auto pos = std::stoul(m[1]);
    if (pos < network.cavities.size()) {
      set(network.cavities[pos]);
      return;
    }
  } else if (std::regex_match(path, m, coupling_path)) {
    const auto pos = std::stoul(m[1]);
    if (pos < network.couplings.size() &&
        network.couplings[pos].kind == CouplingKind::Reversible) {
      network.couplings[pos].chi = value;
      return;
    }
  }
  throw Error("unresolvable-path", "sweep path '" + path + "' does not resolve");
}

namespace {

struct Point {
  std::vector<double> parameters;
};

std::vector<Point> grid_points(const std::vector<SweepAxis>& axes) {
  std::vector<Point> points{{}};
  for (const auto& axis : axes) {
    std::vector<Point> next;
    next.reserve(points.size() * axis.values.size());
    for (const auto& p : points) {
      for (double v : axis.values) {
        Point q = p;
        q.parameters.push_back(v);
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  return points;
}

std::vector<SweepRow> evaluate_point(const NetworkSpec& base, const SweepSpec& sweep,
                                     const Point& point) {
  NetworkSpec spec = base;
  for (std::size_t a = 0; a < sweep.axes.size(); ++a) {
    apply_parameter(spec, sweep.axes[a].path, point.parameters[a]);
  }
  const ValidatedNetwork network = validate(spec);
  const QuadraticGenerator gen = build_generator(network);
  const ModeTable& modes = gen.modes();

  std::vector<SweepRow> rows;
  std::visit(
      [&](const auto& eval) {
        using T = std::decay_t<decltype(eval)>;
        if constexpr (std::is_same_v<T, SteadyState>) {
          SweepRow row{point.parameters, std::nullopt, std::nullopt};
          if (stability(gen).hurwitz) {
            row.values = measure(steady_state(gen).sigma, modes, sweep.observables);
          }
          rows.push_back(std::move(row));
        } else if constexpr (std::is_same_v<T, AtTimes>) {
          const auto states =
              evolve(gen, initial_state(network, spec.initial_state), eval.times);
          for (const auto& s : states) {
            rows.push_back({point.parameters, s.t, measure(s.sigma, modes, sweep.observables)});
          }
        } else {
          const auto grid = uniform_grid(0.0, eval.horizon, eval.step);
          const auto states = evolve(gen, initial_state(network, spec.initial_state), grid);
          std::vector<double> best;
          for (const auto& s : states) {
            const auto v = measure(s.sigma, modes, sweep.observables);
            if (best.empty()) {
              best = v;
            } else {
              for (std::size_t i = 0; i < v.size(); ++i) best[i] = std::max(best[i], v[i]);
            }
          }
          rows.push_back({point.parameters, std::nullopt, std::move(best)});
        }
      },
      sweep.evaluation);
  return rows;
}

}  // namespace

SweepResult run_sweep(const NetworkSpec& network, const SweepSpec& sweep, int jobs) {
  for (const auto& axis : sweep.axes) {
    if (axis.values.empty()) throw InvalidParameter("sweep axis '" + axis.path + "' has no values");
    if (!std::all_of(axis.values.begin(), axis.values.end(),
                     [](double v) { return std::isfinite(v); })) {
      throw InvalidParameter("sweep axis '" + axis.path + "' has non-finite values");
    }
    NetworkSpec probe = network;
    apply_parameter(probe, axis.path, axis.values.front());
  }

  SweepResult result;
  for (const auto& axis : sweep.axes) result.parameter_names.push_back(axis.path);
  for (const auto& o : sweep.observables) {
    const auto cols = o.columns();
    result.columns.insert(result.columns.end(), cols.begin(), cols.end());
  }
  result.has_time = std::holds_alternative<AtTimes>(sweep.evaluation);

  const auto points = grid_points(sweep.axes);
  std::vector<std::vector<SweepRow>> per_point(points.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        per_point[i] = evaluate_point(network, sweep, points[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = points.size();
      }
    }
  };
  const auto threads = static_cast<std::size_t>(std::clamp<long>(jobs, 1, 256));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < std::min(threads, points.size()); ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  for (auto& rows : per_point) {
    for (auto& r : rows) result.rows.push_back(std::move(r));
  }
  return result;
}

}  // namespace optoarray
