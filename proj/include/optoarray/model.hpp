#pragma once

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "optoarray/errors.hpp"

namespace optoarray {

// All rates are dimensionless, measured in units of a reference linewidth.

enum class Regime { Full, BlueRWA, RedRWA };
enum class CouplingKind { Reversible, Cascaded };
enum class InitialState { VacuumAll, ThermalMechanics };

std::string_view to_string(Regime r);
std::string_view to_string(CouplingKind k);
std::string_view to_string(InitialState s);

/// Raw pump description. When present on a cavity, the effective coupling is
/// derived from the intracavity amplitude instead of being given directly.
struct RawDriveSpec {
  std::complex<double> E{0.0, 0.0};  // drive amplitude
  double G0 = 0.0;                   // single-photon coupling

  bool operator==(const RawDriveSpec&) const = default;
};

struct CavitySpec {
  int index = 0;
  double kappa = 1.0;
  double mu = 0.01;
  double omega_m = 1.0;
  double detuning = 0.0;  // ignored (interaction frame) for the RWA regimes
  double g = 0.0;
  double nbar = 0.0;
  Regime regime = Regime::Full;
  std::optional<RawDriveSpec> drive;

  bool operator==(const CavitySpec&) const = default;
};

struct CouplingSpec {
  CouplingKind kind = CouplingKind::Reversible;
  int from = 0;
  int to = 0;
  double chi = 0.0;  // hopping strength; unused for cascaded edges

  bool operator==(const CouplingSpec&) const = default;
};

struct NetworkSpec {
  std::vector<CavitySpec> cavities;
  std::vector<CouplingSpec> couplings;
  InitialState initial_state = InitialState::ThermalMechanics;

  bool operator==(const NetworkSpec&) const = default;

  /// Position of the cavity with the given index, or -1.
  int position_of(int cavity_index) const;
};

/// A network that passed `validate`. Only `validate` can construct one, so
/// every downstream stage can rely on the invariants without rechecking.
class ValidatedNetwork {
 public:
  const NetworkSpec& spec() const noexcept { return spec_; }
  const std::vector<CavitySpec>& cavities() const noexcept { return spec_.cavities; }
  const std::vector<CouplingSpec>& couplings() const noexcept { return spec_.couplings; }
  std::size_t size() const noexcept { return spec_.cavities.size(); }

  bool has_cascade() const;
  bool has_reversible() const;

 private:
  friend ValidatedNetwork validate(const NetworkSpec& network);
  explicit ValidatedNetwork(NetworkSpec spec) : spec_(std::move(spec)) {}
  NetworkSpec spec_;
};

/// Intracavity amplitude alpha = -iE / (kappa/2 + i*detuning).
std::complex<double> steady_state_amplitude(std::complex<double> E, double kappa,
                                            double detuning);

/// Linearised coupling |alpha| * G0. Drive phases are absorbed into the mode.
double effective_coupling(std::complex<double> alpha, double G0);

/// Bose occupation 1/(e^x - 1) with x = hbar*omega_m / (k_B T).
double thermal_occupation(double energy_ratio);

/// Checks every invariant of the data model and returns a normalised copy
/// (cavities sorted by index, drive-derived couplings resolved, duplicate
/// cascaded edges merged). Throws ValidationError listing each violation.
ValidatedNetwork validate(const NetworkSpec& network);

/// Groups cavity positions into cascade chains, each sorted ascending.
/// Cavities without cascaded edges appear as singleton chains.
std::vector<std::vector<int>> cascade_chains(const ValidatedNetwork& network);

}  // namespace optoarray
