#include "optoarray/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace optoarray {

namespace {

std::string join_messages(const std::vector<Issue>& issues) {
  std::ostringstream os;
  os << "invalid network:";
  for (const auto& issue : issues) {
    os << "\n  " << issue.field << ": " << issue.message << " [" << issue.code << "]";
  }
  return os.str();
}

}  // namespace

ValidationError::ValidationError(std::vector<Issue> issues)
    : Error(issues.empty() ? "invalid-network" : issues.front().code, join_messages(issues)),
      issues_(std::move(issues)) {}

bool ValidationError::has(const std::string& code) const {
  return std::any_of(issues_.begin(), issues_.end(),
                     [&](const Issue& i) { return i.code == code; });
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::Full: return "full";
    case Regime::BlueRWA: return "blue_rwa";
    case Regime::RedRWA: return "red_rwa";
  }
  return "?";
}

std::string_view to_string(CouplingKind k) {
  return k == CouplingKind::Reversible ? "reversible" : "cascaded";
}

std::string_view to_string(InitialState s) {
  return s == InitialState::VacuumAll ? "vacuum" : "thermal_mechanics";
}

int NetworkSpec::position_of(int cavity_index) const {
  for (std::size_t i = 0; i < cavities.size(); ++i) {
    if (cavities[i].index == cavity_index) return static_cast<int>(i);
  }
  return -1;
}

bool ValidatedNetwork::has_cascade() const {
  return std::any_of(couplings().begin(), couplings().end(),
                     [](const CouplingSpec& c) { return c.kind == CouplingKind::Cascaded; });
}

bool ValidatedNetwork::has_reversible() const {
  return std::any_of(couplings().begin(), couplings().end(),
                     [](const CouplingSpec& c) { return c.kind == CouplingKind::Reversible; });
}

std::complex<double> steady_state_amplitude(std::complex<double> E, double kappa,
                                            double detuning) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw InvalidParameter("cavity linewidth must be positive");
  }
  if (!std::isfinite(detuning) || !std::isfinite(E.real()) || !std::isfinite(E.imag())) {
    throw InvalidParameter("drive amplitude and detuning must be finite");
  }
  using namespace std::complex_literals;
  return -1i * E / (kappa / 2.0 + 1i * detuning);
}

double effective_coupling(std::complex<double> alpha, double G0) { return std::abs(alpha) * G0; }

double thermal_occupation(double energy_ratio) {
  if (!(energy_ratio > 0.0)) {
    throw InvalidParameter("hbar*omega/kT ratio must be positive");
  }
  if (std::isinf(energy_ratio)) return 0.0;
  return 1.0 / std::expm1(energy_ratio);
}

ValidatedNetwork validate(const NetworkSpec& network) {
  std::vector<Issue> issues;
  auto add = [&](std::string code, std::string field, std::string message) {
    issues.push_back({std::move(code), std::move(field), std::move(message)});
  };

  NetworkSpec out = network;
  std::stable_sort(out.cavities.begin(), out.cavities.end(),
                   [](const CavitySpec& a, const CavitySpec& b) { return a.index < b.index; });

  if (out.cavities.empty()) add("empty-network", "cavities", "at least one cavity is required");

  std::set<int> seen;
  for (std::size_t i = 0; i < out.cavities.size(); ++i) {
    auto& c = out.cavities[i];
    const std::string field = "cavities[index=" + std::to_string(c.index) + "]";
    if (!seen.insert(c.index).second) {
      add("duplicate-cavity-index", field, "cavity index appears more than once");
    }
    const double values[] = {c.kappa, c.mu, c.omega_m, c.detuning, c.g, c.nbar};
    if (!std::all_of(std::begin(values), std::end(values),
                     [](double v) { return std::isfinite(v); })) {
      add("non-finite-parameter", field, "all cavity parameters must be finite");
      continue;
    }
    if (!(c.kappa > 0.0)) add("non-positive-kappa", field + ".kappa", "kappa must be > 0");
    if (!(c.mu > 0.0)) add("non-positive-mu", field + ".mu", "mu must be > 0");
    if (!(c.omega_m > 0.0)) add("non-positive-omega-m", field + ".omega_m", "omega_m must be > 0");
    if (c.nbar < 0.0) add("negative-nbar", field + ".nbar", "nbar must be >= 0");
    if (c.drive) {
      if (c.drive->G0 < 0.0) {
        add("negative-g0", field + ".drive.G0", "G0 must be >= 0");
      } else if (c.kappa > 0.0) {
        c.g = effective_coupling(steady_state_amplitude(c.drive->E, c.kappa, c.detuning),
                                 c.drive->G0);
      }
    }
    if (c.g < 0.0) add("negative-g", field + ".g", "g must be >= 0");
  }

  std::set<std::pair<int, int>> cascade_edges;
  std::vector<CouplingSpec> couplings;
  std::optional<CouplingKind> kind;
  for (std::size_t i = 0; i < out.couplings.size(); ++i) {
    const auto& e = out.couplings[i];
    const std::string field = "couplings[" + std::to_string(i) + "]";
    if (kind && *kind != e.kind) {
      add("mixed-coupling-kinds", field,
          "a network couples either reversibly or irreversibly, not both");
    }
    if (!kind) kind = e.kind;
    if (e.from == e.to) {
      add("self-coupling", field, "from and to must differ");
      continue;
    }
    if (out.position_of(e.from) < 0 || out.position_of(e.to) < 0) {
      add("unknown-cavity", field, "edge refers to a cavity that is not declared");
      continue;
    }
    if (e.kind == CouplingKind::Reversible) {
      if (!(e.chi > 0.0) || !std::isfinite(e.chi)) {
        add("non-positive-chi", field + ".chi", "reversible hopping strength must be > 0");
      }
      couplings.push_back(e);
    } else {
      if (e.from > e.to) {
        add("cascade-not-forward", field, "cascaded edges must run from lower to higher index");
        continue;
      }
      if (cascade_edges.insert({e.from, e.to}).second) {
        CouplingSpec c = e;
        c.chi = 0.0;
        couplings.push_back(c);
      }
    }
  }
  out.couplings = std::move(couplings);

  // Interaction-frame (RWA) cavities and lab-frame (Full) cavities cannot share
  // one optical network: the frames would reintroduce time-dependent couplings.
  if (!out.couplings.empty()) {
    bool any_full = false, any_rwa = false;
    for (const auto& c : out.cavities) {
      (c.regime == Regime::Full ? any_full : any_rwa) = true;
    }
    if (any_full && any_rwa) {
      add("mixed-full-and-rwa", "cavities",
          "coupled networks cannot mix the full interaction with RWA regimes");
    }
  }

  if (!issues.empty()) throw ValidationError(std::move(issues));
  return ValidatedNetwork(std::move(out));
}

std::vector<std::vector<int>> cascade_chains(const ValidatedNetwork& network) {
  const auto& spec = network.spec();
  const int n = static_cast<int>(network.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : spec.couplings) {
    if (e.kind != CouplingKind::Cascaded) continue;
    parent[find(spec.position_of(e.from))] = find(spec.position_of(e.to));
  }
  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<int>> chains;
  for (auto& [root, members] : groups) chains.push_back(std::move(members));
  std::sort(chains.begin(), chains.end());
  return chains;
}

}  // namespace optoarray
