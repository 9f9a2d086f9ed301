#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <span>
#include <vector>

#include "optoarray/model.hpp"

namespace optoarray::fock {

using SparseOp = Eigen::SparseMatrix<std::complex<double>>;

struct TruncationSpec {
  int cutoff = 4;            // highest Fock number kept per mode
  int convergence_step = 1;  // cutoff increment for the convergence check
  std::size_t budget = 10000;  // maximum Hilbert-space dimension
};

struct DensityState {
  double t = 0.0;
  Eigen::MatrixXcd rho;
};

/// Quadrature moments in the same ordering as the Gaussian engine.
struct MomentTable {
  double t = 0.0;
  Eigen::VectorXd mean;    // <x_i>
  Eigen::MatrixXd second;  // <{x_i, x_j}>/2

  Eigen::MatrixXd covariance() const { return second - mean * mean.transpose(); }
};

/// Master-equation right-hand side on a truncated product basis, applied
/// matrix-free: drho/dt = K rho + rho K^dag + sum_L L rho L^dag + cascaded
/// feed terms.
class Liouvillian {
 public:
  Liouvillian(const ValidatedNetwork& network, int cutoff, std::size_t budget = 10000);

  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const;

  int dimension() const noexcept { return dimension_; }
  int modes() const noexcept { return static_cast<int>(lowering_.size()); }
  int cutoff() const noexcept { return cutoff_; }
  /// Annihilation operator of mode m (a1, b1, a2, b2, ... ordering).
  const SparseOp& lowering(int m) const { return lowering_[m]; }

  /// Nonzeros of an operator grouped by the conserved charge of their
  /// column, for the hand-rolled products.
  struct Entries {
    Entries() = default;
    Entries(const SparseOp& op, const std::vector<int>& charge);
    std::vector<int> row, col;
    std::vector<double> re, im;
    std::vector<std::size_t> bucket;  // entries of charge q_min + i: [bucket[i], bucket[i+1])
    int q_min = 0;
  };

  /// An operator with at most one nonzero per row: row r reads state source[r].
  struct Ladder {
    explicit Ladder(const SparseOp& op);
    std::vector<int> source;
    std::vector<std::complex<double>> value;
  };

 private:
  void add_sandwich(const Ladder& left, const Ladder& right, double scale,
                    const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const;

  struct Feed {
    double rate;
    int source;  // optical mode number of the upstream cavity
    int target;
  };

  int cutoff_;
  int dimension_;
  std::vector<int> charge_;  // conserved charge of each basis state
  std::vector<std::vector<int>> sectors_;  // basis states by charge, from q_min_
  int q_min_ = 0;
  std::vector<SparseOp> lowering_;
  std::vector<Ladder> ladders_;
  Entries effective_;  // K = -iH - (1/2) sum L^dag L - feed exchange
  std::vector<Ladder> jumps_;
  std::vector<Feed> feeds_;
};

/// Throws Error("dimension-budget-exceeded") naming the required dimension.
Liouvillian build_liouvillian(const ValidatedNetwork& network, const TruncationSpec& trunc);

/// Optics in vacuum, mechanics per the network's initial state (thermal
/// populations truncated at the cutoff and renormalised).
DensityState initial_density(const ValidatedNetwork& network, const Liouvillian& liouvillian);

MomentTable moments(const Liouvillian& liouvillian, const DensityState& state);

/// Largest RK4 step allowed for this network: 0.01 over the fastest rate among
/// the Gaussian drift spectrum, the linewidths and the free rotations.
double max_step(const ValidatedNetwork& network);

/// Fixed-step RK4 at a single cutoff; no convergence check.
std::vector<MomentTable> integrate_at_cutoff(const ValidatedNetwork& network, int cutoff,
                                             std::size_t budget, std::span<const double> t_grid);

/// Integrates at cutoff N and N + step and requires every reported moment to
/// agree within 1e-4; returns the higher-cutoff results. Throws
/// Error("oracle-not-converged") otherwise.
std::vector<MomentTable> integrate_oracle(const ValidatedNetwork& network,
                                          const TruncationSpec& trunc,
                                          std::span<const double> t_grid);

struct MomentComparison {
  double t = 0.0;
  Eigen::MatrixXd oracle;    // covariance from the density matrix
  Eigen::MatrixXd gaussian;  // covariance from the Gaussian engine
  double max_abs_diff = 0.0;
};

/// Runs both engines from the network's initial state over `t_grid`.
std::vector<MomentComparison> compare_with_gaussian(const ValidatedNetwork& network,
                                                    const TruncationSpec& trunc,
                                                    std::span<const double> t_grid);

}  // namespace optoarray::fock
