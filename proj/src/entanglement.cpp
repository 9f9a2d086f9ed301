#include "optoarray/entanglement.hpp"

#include <cmath>
#include <sstream>

#include "optoarray/tolerances.hpp"

namespace optoarray {

Eigen::Matrix4d TwoModeBlock::full() const {
  Eigen::Matrix4d g;
  g << gamma_A, gamma_C, gamma_C.transpose(), gamma_B;
  return g;
}

TwoModeBlock TwoModeBlock::from_full(const Eigen::Matrix4d& full) {
  return {full.topLeftCorner<2, 2>(), full.bottomRightCorner<2, 2>(),
          full.topRightCorner<2, 2>()};
}

TwoModeBlock extract_two_mode(const Eigen::MatrixXd& sigma, int mode1, int mode2) {
  const int modes = static_cast<int>(sigma.rows() / 2);
  if (mode1 == mode2) throw Error("identical-modes", "a two-mode block needs two distinct modes");
  if (mode1 < 0 || mode2 < 0 || mode1 >= modes || mode2 >= modes) {
    throw Error("unknown-mode", "mode number out of range");
  }
  const int idx[4] = {2 * mode1, 2 * mode1 + 1, 2 * mode2, 2 * mode2 + 1};
  Eigen::Matrix4d g;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) g(r, c) = sigma(idx[r], idx[c]);
  }
  return TwoModeBlock::from_full(g);
}

TwoModeBlock extract_two_mode(const CovarianceState& state, const ModeTable& modes,
                              const ModeIndex& m1, const ModeIndex& m2) {
  if (m1 == m2) throw Error("identical-modes", "a two-mode block needs two distinct modes");
  return extract_two_mode(state.sigma, modes.slot(m1), modes.slot(m2));
}

NegativityResult log_negativity(const TwoModeBlock& block) {
  NegativityResult r;
  const TwoModeBlock mirrored{block.gamma_B, block.gamma_A, block.gamma_C.transpose()};
  // averaging over both mode orders makes the result exactly swap-symmetric
  const double det_full = 0.5 * (block.full().determinant() + mirrored.full().determinant());
  r.Gamma = 0.5 * (block.gamma_A.determinant() + block.gamma_B.determinant()) -
            block.gamma_C.determinant();
  double radicand = r.Gamma * r.Gamma - det_full;
  if (radicand < 0.0) {
    if (radicand < -tolerance::radicand * std::max(1.0, r.Gamma * r.Gamma)) {
      std::ostringstream os;
      os << "Gamma^2 - det(gamma) = " << radicand << " is negative; block is not physical";
      throw Error("nonphysical-block", os.str());
    }
    radicand = 0.0;
  }
  r.f = r.Gamma - std::sqrt(radicand);
  r.E_N = r.f < 1.0 ? -0.5 * std::log(r.f) : 0.0;
  return r;
}

std::complex<double> mode_correlation(const Eigen::MatrixXd& sigma, int j, int k,
                                      CorrelationForm form) {
  const int qj = 2 * j, pj = 2 * j + 1;
  if (form == CorrelationForm::Number) {
    return 0.25 * (sigma(qj, qj) + sigma(pj, pj)) - 0.5;
  }
  if (j == k) throw Error("identical-modes", "cross correlations need two distinct modes");
  const int qk = 2 * k, pk = 2 * k + 1;
  if (form == CorrelationForm::Mixed) {
    return 0.25 * std::complex<double>(sigma(qj, qk) + sigma(pj, pk),
                                       sigma(pj, qk) - sigma(qj, pk));
  }
  return 0.25 * std::complex<double>(sigma(qj, qk) - sigma(pj, pk),
                                     sigma(qj, pk) + sigma(pj, qk));
}

std::complex<double> mode_correlation(const CovarianceState& state, const ModeTable& modes,
                                      const ModeIndex& j, const ModeIndex& k,
                                      CorrelationForm form) {
  return mode_correlation(state.sigma, modes.slot(j), modes.slot(k), form);
}

}  // namespace optoarray
