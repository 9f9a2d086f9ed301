#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "optoarray/model.hpp"

namespace optoarray {

// Quadratures: q = a + a^dag, p = -i(a - a^dag), so [q, p] = 2i and the
// vacuum covariance is the identity. Mode m owns rows/columns (2m, 2m+1);
// modes are ordered a1, b1, a2, b2, ... following the cavity order.

enum class ModeKind { Optical, Mechanical };

struct ModeIndex {
  int cavity = 0;  // cavity index as declared in the network
  ModeKind kind = ModeKind::Optical;

  bool operator==(const ModeIndex&) const = default;

  /// "a2" for the optical mode of cavity 2, "b2" for its mechanics.
  std::string name() const;
  static ModeIndex parse(const std::string& text);
};

class ModeTable {
 public:
  ModeTable() = default;
  explicit ModeTable(const ValidatedNetwork& network);

  std::size_t size() const noexcept { return modes_.size(); }
  const ModeIndex& operator[](std::size_t m) const { return modes_[m]; }
  auto begin() const { return modes_.begin(); }
  auto end() const { return modes_.end(); }

  /// Mode number of `mode`; throws Error("unknown-mode") when absent.
  int slot(const ModeIndex& mode) const;
  bool contains(const ModeIndex& mode) const;

 private:
  std::vector<ModeIndex> modes_;
};

/// Symplectic form for `modes` modes: direct sum of [[0, 1], [-1, 0]].
Eigen::MatrixXd symplectic_form(int modes);

/// Linear moment equations d<x>/dt = A<x>, dV/dt = AV + VA^T + D.
class QuadraticGenerator {
 public:
  QuadraticGenerator(Eigen::MatrixXd drift, Eigen::MatrixXd diffusion, ModeTable modes);

  const Eigen::MatrixXd& drift() const noexcept { return drift_; }
  const Eigen::MatrixXd& diffusion() const noexcept { return diffusion_; }
  const ModeTable& modes() const noexcept { return modes_; }
  int dimension() const noexcept { return static_cast<int>(drift_.rows()); }

 private:
  Eigen::MatrixXd drift_;
  Eigen::MatrixXd diffusion_;
  ModeTable modes_;
};

QuadraticGenerator build_generator(const ValidatedNetwork& network);

/// Optical part of a cascaded network written as collective decays plus a
/// coherent exchange term. Indices run over cavity positions.
struct CascadeDecomposition {
  /// One collective jump c = sum_k coeff[k] a_k per chain (singletons included).
  std::vector<Eigen::VectorXd> jumps;
  /// H_eff = sum_{jk} hamiltonian(j, k) a_j^dag a_k (Hermitian).
  Eigen::MatrixXcd hamiltonian;
};

/// Throws Error("unsupported-coupling") when the network has reversible edges.
CascadeDecomposition cascade_decomposition(const ValidatedNetwork& network);

/// Rebuilds the generator with the optical damping and cascaded terms taken
/// from `decomposition` instead of the per-edge drift/diffusion rules.
QuadraticGenerator generator_from_decomposition(const ValidatedNetwork& network,
                                                const CascadeDecomposition& decomposition);

}  // namespace optoarray
