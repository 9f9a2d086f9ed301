#pragma once

#include <Eigen/Dense>
#include <random>

#include "optoarray/model.hpp"

namespace testing {

inline optoarray::CavitySpec cavity(int index, optoarray::Regime regime, double g,
                                    double omega_m = 1.0, double detuning = 0.0) {
  optoarray::CavitySpec c;
  c.index = index;
  c.kappa = 1.0;
  c.mu = 0.01;
  c.omega_m = omega_m;
  c.detuning = detuning;
  c.g = g;
  c.regime = regime;
  return c;
}

inline optoarray::CouplingSpec reversible(int from, int to, double chi) {
  return {optoarray::CouplingKind::Reversible, from, to, chi};
}

inline optoarray::CouplingSpec cascaded(int from, int to) {
  return {optoarray::CouplingKind::Cascaded, from, to, 0.0};
}

inline optoarray::NetworkSpec network(std::vector<optoarray::CavitySpec> cavities,
                                      std::vector<optoarray::CouplingSpec> couplings = {},
                                      optoarray::InitialState initial =
                                          optoarray::InitialState::VacuumAll) {
  return {std::move(cavities), std::move(couplings), initial};
}

inline Eigen::MatrixXd omega(int modes) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (int m = 0; m < modes; ++m) {
    w(2 * m, 2 * m + 1) = 1.0;
    w(2 * m + 1, 2 * m) = -1.0;
  }
  return w;
}

// exp(Omega H) with H symmetric is symplectic; a thermal diagonal conjugated
// by it is a generic physical covariance.
Eigen::MatrixXd random_symplectic(std::mt19937_64& rng, int modes, double scale);
Eigen::MatrixXd random_physical(std::mt19937_64& rng, int modes);

// Squared smallest symplectic eigenvalue of the partially transposed block,
// from the spectrum of i*Omega*V.
double ppt_f(const Eigen::Matrix4d& v);

}  // namespace testing
