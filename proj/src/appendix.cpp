#include "optoarray/appendix.hpp"

#include <cmath>
#include <limits>

#include "optoarray/entanglement.hpp"

namespace optoarray {

namespace {

void require_positive(std::initializer_list<double> rates) {
  for (double r : rates) {
    if (!(r > 0.0) || !std::isfinite(r)) throw InvalidParameter("rates must be positive");
  }
}

}  // namespace

AdiabaticParams adiabatic_params_reversible(double g1, double g2, double kappa1, double kappa2,
                                            double mu1, double mu2, double chi12) {
  require_positive({kappa1, kappa2, mu1, mu2, chi12});
  if (g1 < 0.0 || g2 < 0.0) throw InvalidParameter("couplings must be non-negative");
  using namespace std::complex_literals;
  const double den = kappa1 * kappa2 + 4.0 * chi12 * chi12;
  AdiabaticParams p;
  p.Gamma_1 = 4.0 * g1 * g1 * kappa2 / den;
  p.Gamma_2 = 4.0 * g2 * g2 * kappa1 / den;
  p.chi_prime = 4.0 * chi12 * g1 * g2 / den;
  p.eta_1 = (4.0 * chi12 * g1 * std::sqrt(kappa2) + 2i * g1 * kappa2 * std::sqrt(kappa1)) / den;
  p.eta_2 = (4.0 * chi12 * g2 * std::sqrt(kappa1) + 2i * g2 * kappa1 * std::sqrt(kappa2)) / den;
  p.gamma_1 = mu1 - p.Gamma_1;
  p.gamma_2 = mu2 + p.Gamma_2;
  return p;
}

AdiabaticParams adiabatic_params_cascaded(double g1, double g2, double kappa1, double kappa2,
                                          double mu1, double mu2) {
  require_positive({kappa1, kappa2, mu1, mu2});
  if (g1 < 0.0 || g2 < 0.0) throw InvalidParameter("couplings must be non-negative");
  AdiabaticParams p;
  p.Gamma_t1 = 4.0 * g1 * g1 / kappa1;
  p.Gamma_t2 = 4.0 * g2 * g2 / kappa2;
  p.gamma_t1 = mu1 - p.Gamma_t1;
  p.gamma_t2 = mu2 + p.Gamma_t2;
  return p;
}

std::complex<double> steady_correlation_reversible(const AdiabaticParams& p, double nb1,
                                                   double nb2) {
  const double total = p.gamma_1 + p.gamma_2;
  if (!(total > 0.0)) {
    throw Error("eliminated-model-unstable", "gamma_1 + gamma_2 must be positive");
  }
  return std::complex<double>(0.0, 2.0 * p.chi_prime * (1.0 + nb1 + nb2) / total);
}

double steady_correlation_cascaded(const AdiabaticParams& p, double nb1) {
  const double total = p.gamma_t1 + p.gamma_t2;
  if (!(total > 0.0)) {
    throw Error("eliminated-model-unstable", "gamma~_1 + gamma~_2 must be positive");
  }
  return 2.0 * std::sqrt(p.Gamma_t1 * p.Gamma_t2) / total * nb1;
}

double steady_correlation_cascaded_with_vacuum(const AdiabaticParams& p, double nb1) {
  return steady_correlation_cascaded(p, 1.0 + nb1);
}

NetworkSpec blue_red_pair(CouplingKind kind, double g1, double g2, double kappa, double mu,
                          double chi12, double nbar) {
  NetworkSpec net;
  CavitySpec source;
  source.index = 1;
  source.kappa = kappa;
  source.mu = mu;
  source.omega_m = 1.0;
  source.g = g1;
  source.nbar = nbar;
  source.regime = Regime::BlueRWA;
  CavitySpec receiver = source;
  receiver.index = 2;
  receiver.g = g2;
  receiver.regime = Regime::RedRWA;
  net.cavities = {source, receiver};
  net.couplings = {{kind, 1, 2, kind == CouplingKind::Reversible ? chi12 : 0.0}};
  return net;
}

AppendixComparison compare_with_full_model(CouplingKind kind, double g1, double g2,
                                           double kappa, double mu, double chi12) {
  AppendixComparison out;
  out.kind = kind;
  out.g1 = g1;
  out.g2 = g2;
  const auto network = validate(blue_red_pair(kind, g1, g2, kappa, mu, chi12));
  const auto gen = build_generator(network);
  out.full_model_stable = stability(gen).hurwitz;
  if (!out.full_model_stable) {
    out.relative_error = std::numeric_limits<double>::infinity();
    return out;
  }
  const auto ss = steady_state(gen);
  const ModeIndex b1{1, ModeKind::Mechanical}, b2{2, ModeKind::Mechanical};
  const auto& modes = gen.modes();
  out.full = mode_correlation(ss, modes, b2, b1, CorrelationForm::Pair);
  out.nb1 = mode_correlation(ss, modes, b1, b1, CorrelationForm::Number).real();
  out.nb2 = mode_correlation(ss, modes, b2, b2, CorrelationForm::Number).real();

  if (kind == CouplingKind::Reversible) {
    const auto p = adiabatic_params_reversible(g1, g2, kappa, kappa, mu, mu, chi12);
    out.analytic = steady_correlation_reversible(p, out.nb1, out.nb2);
  } else {
    const auto p = adiabatic_params_cascaded(g1, g2, kappa, kappa, mu, mu);
    out.analytic = steady_correlation_cascaded(p, out.nb1);
    out.with_vacuum = steady_correlation_cascaded_with_vacuum(p, out.nb1);
  }
  const double scale = std::abs(out.full);
  out.relative_error = scale > 0.0 ? std::abs(out.analytic - out.full) / scale
                                   : std::abs(out.analytic);
  return out;
}

}  // namespace optoarray
