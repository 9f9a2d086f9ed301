#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

#include "optoarray/generator.hpp"

namespace optoarray {

/// Gaussian state of the whole network: quadrature means and symmetrised
/// covariance V_ij = <{x_i, x_j}>/2 - <x_i><x_j>.
struct CovarianceState {
  double t = 0.0;
  Eigen::VectorXd mean;
  Eigen::MatrixXd sigma;
};

struct StabilityReport {
  double max_real_eig = 0.0;
  bool hurwitz = false;
  std::vector<std::complex<double>> spectrum;  // sorted by decreasing real part
};

class UnstableError : public Error {
 public:
  explicit UnstableError(StabilityReport report);
  const StabilityReport& report() const noexcept { return report_; }

 private:
  StabilityReport report_;
};

/// Smallest eigenvalue of the Hermitian matrix sigma + i*Omega. Non-negative
/// for states that respect the uncertainty principle.
double min_physical_eigenvalue(const Eigen::MatrixXd& sigma);

/// Throws Error("non-physical-state") when sigma is asymmetric or violates
/// the uncertainty principle beyond tolerance::physicality.
void require_physical(const Eigen::MatrixXd& sigma);

/// Optics in vacuum; mechanics in vacuum or thermal at their bath occupation.
CovarianceState initial_state(const ValidatedNetwork& network, InitialState kind);

/// Exact one-step map for a fixed interval: V -> phi V phi^T + noise.
struct Propagator {
  double dt = 0.0;
  Eigen::MatrixXd phi;    // exp(A dt)
  Eigen::MatrixXd noise;  // integral_0^dt exp(As) D exp(A^T s) ds
};

/// The noise integral comes from the block exponential of [[A, D], [0, -A^T]].
/// Long intervals are split into 2^k sub-steps (composed by exact doubling) so
/// the growing -A^T block never dominates the cancellation.
Propagator make_propagator(const QuadraticGenerator& gen, double dt);

CovarianceState propagate(const Propagator& prop, const CovarianceState& state);

/// Evolves `initial` and returns the state at every time of `t_grid`.
std::vector<CovarianceState> evolve(const QuadraticGenerator& gen, const CovarianceState& initial,
                                    std::span<const double> t_grid);

/// Uniform output grid t0, t0 + dt, ..., up to and including t_max.
std::vector<double> uniform_grid(double t0, double t_max, double dt);

StabilityReport stability(const QuadraticGenerator& gen);

/// Solves A S + S A^T + D = 0. Throws UnstableError when A is not Hurwitz.
CovarianceState steady_state(const QuadraticGenerator& gen);

/// ||A S + S A^T + D||_F / ||D||_F.
double lyapunov_residual(const QuadraticGenerator& gen, const Eigen::MatrixXd& sigma);

struct StabilityThresholds {
  double blue;  // sqrt(kappa mu)/2, the two-mode-squeezing instability point
  double red;   // (1/2) sqrt(omega_m^2 + (mu^2 + kappa^2)/4)
};

StabilityThresholds analytic_stability_bounds(const CavitySpec& cavity);

}  // namespace optoarray
