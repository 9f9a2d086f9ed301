#include "support.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace testing {

Eigen::MatrixXd random_symplectic(std::mt19937_64& rng, int modes, double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  const int n = 2 * modes;
  Eigen::MatrixXd h(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) h(i, j) = h(j, i) = normal(rng);
  }
  return (omega(modes) * h).exp();
}

Eigen::MatrixXd random_physical(std::mt19937_64& rng, int modes) {
  std::uniform_real_distribution<double> excess(0.0, 2.0);
  const Eigen::MatrixXd s = random_symplectic(rng, modes, 0.4);
  Eigen::VectorXd nu(2 * modes);
  for (int m = 0; m < modes; ++m) nu(2 * m) = nu(2 * m + 1) = 1.0 + excess(rng);
  const Eigen::MatrixXd v = s * nu.asDiagonal() * s.transpose();
  return 0.5 * (v + v.transpose());
}

double ppt_f(const Eigen::Matrix4d& v) {
  Eigen::Matrix4d flip = Eigen::Matrix4d::Identity();
  flip(3, 3) = -1.0;
  const Eigen::Matrix4d pt = flip * v * flip;
  const Eigen::Matrix4cd m = std::complex<double>(0.0, 1.0) * omega(2) * pt;
  const Eigen::Vector4cd ev = m.eigenvalues();
  double nu = ev.cwiseAbs().minCoeff();
  return nu * nu;
}

}  // namespace testing
