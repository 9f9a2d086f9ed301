#pragma once

#include <complex>
#include <optional>

#include "optoarray/model.hpp"

namespace optoarray {

// Closed-form steady-state correlations for a two-cavity network whose first
// cavity runs on the blue sideband and second on the red sideband (both in the
// RWA), obtained by adiabatically eliminating the optical modes.

struct AdiabaticParams {
  // Reversible coupling
  double Gamma_1 = 0.0;
  double Gamma_2 = 0.0;
  double chi_prime = 0.0;
  std::complex<double> eta_1{};
  std::complex<double> eta_2{};
  double gamma_1 = 0.0;  // mu_1 - Gamma_1
  double gamma_2 = 0.0;  // mu_2 + Gamma_2
  // Cascaded coupling
  double Gamma_t1 = 0.0;  // 4 g_1^2 / kappa_1
  double Gamma_t2 = 0.0;  // 4 g_2^2 / kappa_2
  double gamma_t1 = 0.0;  // mu_1 - Gamma_t1
  double gamma_t2 = 0.0;  // mu_2 + Gamma_t2

  /// The eliminated mechanics are damped (the first resonator stays stable).
  bool valid_reversible() const { return gamma_1 > 0.0; }
  bool valid_cascaded() const { return gamma_t1 > 0.0; }
};

AdiabaticParams adiabatic_params_reversible(double g1, double g2, double kappa1, double kappa2,
                                            double mu1, double mu2, double chi12);
AdiabaticParams adiabatic_params_cascaded(double g1, double g2, double kappa1, double kappa2,
                                          double mu1, double mu2);

/// <b2 b1> = 2i chi' (1 + n1 + n2) / (gamma_1 + gamma_2).
/// Throws Error("eliminated-model-unstable") when gamma_1 + gamma_2 <= 0.
std::complex<double> steady_correlation_reversible(const AdiabaticParams& p, double nb1,
                                                   double nb2);

/// <b2 b1> = 2 sqrt(Gt1 Gt2) / (gt1 + gt2) * n1.
double steady_correlation_cascaded(const AdiabaticParams& p, double nb1);

/// Same elimination with the vacuum-noise cross term kept:
/// 2 sqrt(Gt1 Gt2) / (gt1 + gt2) * (1 + n1). Diagnostic only.
double steady_correlation_cascaded_with_vacuum(const AdiabaticParams& p, double nb1);

/// Analytic correlation next to the same quantity from the full Lyapunov
/// solve, with n1, n2 read from that solve.
struct AppendixComparison {
  CouplingKind kind = CouplingKind::Reversible;
  double g1 = 0.0, g2 = 0.0;
  bool full_model_stable = false;
  std::complex<double> full{};      // <b2 b1> from the Gaussian engine
  std::complex<double> analytic{};  // closed form
  std::optional<double> with_vacuum;  // cascaded only
  double nb1 = 0.0, nb2 = 0.0;
  double relative_error = 0.0;  // |analytic - full| / |full|
};

AppendixComparison compare_with_full_model(CouplingKind kind, double g1, double g2,
                                           double kappa = 1.0, double mu = 0.01,
                                           double chi12 = 1.0);

/// Builds the blue/red two-cavity network used by the comparison.
NetworkSpec blue_red_pair(CouplingKind kind, double g1, double g2, double kappa, double mu,
                          double chi12, double nbar = 0.0);

}  // namespace optoarray
