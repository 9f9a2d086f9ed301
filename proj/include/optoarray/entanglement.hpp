#pragma once

#include <Eigen/Dense>
#include <complex>

#include "optoarray/dynamics.hpp"

namespace optoarray {

/// Covariance of one mode pair in block form [[A, C], [C^T, B]].
struct TwoModeBlock {
  Eigen::Matrix2d gamma_A;
  Eigen::Matrix2d gamma_B;
  Eigen::Matrix2d gamma_C;

  Eigen::Matrix4d full() const;
  static TwoModeBlock from_full(const Eigen::Matrix4d& full);
};

struct NegativityResult {
  double Gamma = 0.0;  // (det A + det B)/2 - det C
  double f = 0.0;      // Gamma - sqrt(Gamma^2 - det full)
  double E_N = 0.0;    // -ln(f)/2 when f < 1, else 0
};

/// Rows/columns (2m1, 2m1+1, 2m2, 2m2+1) of sigma rearranged as a block.
TwoModeBlock extract_two_mode(const Eigen::MatrixXd& sigma, int mode1, int mode2);
TwoModeBlock extract_two_mode(const CovarianceState& state, const ModeTable& modes,
                              const ModeIndex& m1, const ModeIndex& m2);

/// Logarithmic negativity from block determinants. With the vacuum-identity
/// convention f is the squared smallest symplectic eigenvalue of the
/// partially transposed block. Throws Error("nonphysical-block") when the
/// radicand is negative beyond tolerance.
NegativityResult log_negativity(const TwoModeBlock& block);

enum class CorrelationForm {
  Pair,    // <c_j c_k>
  Mixed,   // <c_j c_k^dag>
  Number,  // <c_j^dag c_j>
};

/// Second-order moment of the mode operators assuming zero means (the
/// linearised, displaced frame). Number form ignores k.
std::complex<double> mode_correlation(const Eigen::MatrixXd& sigma, int j, int k,
                                      CorrelationForm form);
std::complex<double> mode_correlation(const CovarianceState& state, const ModeTable& modes,
                                      const ModeIndex& j, const ModeIndex& k,
                                      CorrelationForm form);

}  // namespace optoarray
