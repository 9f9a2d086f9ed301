#include "optoarray/dynamics.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "optoarray/tolerances.hpp"

namespace optoarray {

namespace {

std::string describe(const StabilityReport& r) {
  std::ostringstream os;
  os << "drift matrix is not Hurwitz (max Re eigenvalue = " << r.max_real_eig
     << "); no steady state exists";
  return os.str();
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

UnstableError::UnstableError(StabilityReport report)
    : Error("unstable-no-steady-state", describe(report)), report_(std::move(report)) {}

double min_physical_eigenvalue(const Eigen::MatrixXd& sigma) {
  const int modes = static_cast<int>(sigma.rows() / 2);
  const Eigen::MatrixXcd h =
      sigma.cast<std::complex<double>>() +
      std::complex<double>(0.0, 1.0) * symplectic_form(modes).cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void require_physical(const Eigen::MatrixXd& sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() % 2 != 0 || !sigma.allFinite()) {
    throw Error("non-physical-state", "covariance must be a finite square matrix of even size");
  }
  const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error("non-physical-state", "covariance matrix is not symmetric");
  }
  const double lowest = min_physical_eigenvalue(sigma);
  if (lowest < -tolerance::physicality) {
    std::ostringstream os;
    os << "covariance violates the uncertainty principle (min eig of sigma + i*Omega = "
       << lowest << ")";
    throw Error("non-physical-state", os.str());
  }
}

CovarianceState initial_state(const ValidatedNetwork& network, InitialState kind) {
  const auto n = static_cast<Eigen::Index>(4 * network.size());
  CovarianceState state;
  state.mean = Eigen::VectorXd::Zero(n);
  state.sigma = Eigen::MatrixXd::Identity(n, n);
  if (kind == InitialState::ThermalMechanics) {
    for (std::size_t i = 0; i < network.size(); ++i) {
      const double v = 2.0 * network.cavities()[i].nbar + 1.0;
      state.sigma(4 * i + 2, 4 * i + 2) = v;
      state.sigma(4 * i + 3, 4 * i + 3) = v;
    }
  }
  return state;
}

Propagator make_propagator(const QuadraticGenerator& gen, double dt) {
  if (!(dt >= 0.0) || !std::isfinite(dt)) {
    throw InvalidParameter("propagation interval must be finite and non-negative");
  }
  const Eigen::MatrixXd& A = gen.drift();
  const Eigen::MatrixXd& D = gen.diffusion();
  const Eigen::Index n = A.rows();

  // Logarithmic-norm bound on how fast exp(+-A t) can grow.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sym(symmetrized(A), Eigen::EigenvaluesOnly);
  const double growth = sym.eigenvalues().cwiseAbs().maxCoeff();
  int doublings = 0;
  double h = dt;
  while (growth * h > 0.5 && doublings < 60) {
    h *= 0.5;
    ++doublings;
  }

  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  block.topLeftCorner(n, n) = A * h;
  block.topRightCorner(n, n) = D * h;
  block.bottomRightCorner(n, n) = -A.transpose() * h;
  const Eigen::MatrixXd e = block.exp();

  Propagator prop;
  prop.dt = dt;
  prop.phi = e.topLeftCorner(n, n);
  prop.noise = symmetrized(e.topRightCorner(n, n) * prop.phi.transpose());
  for (int k = 0; k < doublings; ++k) {
    prop.noise = symmetrized(prop.phi * prop.noise * prop.phi.transpose() + prop.noise);
    prop.phi = (prop.phi * prop.phi).eval();
  }
  return prop;
}

CovarianceState propagate(const Propagator& prop, const CovarianceState& state) {
  CovarianceState next;
  next.t = state.t + prop.dt;
  next.mean = prop.phi * state.mean;
  next.sigma = symmetrized(prop.phi * state.sigma * prop.phi.transpose() + prop.noise);
  return next;
}

std::vector<CovarianceState> evolve(const QuadraticGenerator& gen, const CovarianceState& initial,
                                    std::span<const double> t_grid) {
  const auto n = gen.dimension();
  if (initial.sigma.rows() != n || initial.mean.size() != n) {
    throw Error("shape-mismatch", "initial state does not match the generator dimension");
  }
  require_physical(initial.sigma);
  if (!t_grid.empty() && t_grid.front() < initial.t) {
    throw InvalidParameter("time grid starts before the initial state");
  }
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) throw InvalidParameter("time grid must be strictly increasing");
  }

  std::vector<CovarianceState> out;
  out.reserve(t_grid.size());
  CovarianceState current = initial;
  std::optional<Propagator> cached;
  for (double t : t_grid) {
    const double dt = t - current.t;
    if (dt > 0.0) {
      // Uniform grids reuse one propagator; differences at round-off level
      // are not worth a fresh exponential.
      if (!cached || std::abs(cached->dt - dt) > 1e-12 * std::max(dt, 1e-300)) {
        cached = make_propagator(gen, dt);
      }
      current = propagate(*cached, current);
    }
    current.t = t;
    out.push_back(current);
  }
  return out;
}

std::vector<double> uniform_grid(double t0, double t_max, double dt) {
  if (!(dt > 0.0) || !(t_max >= t0)) throw InvalidParameter("invalid time grid");
  const auto steps = static_cast<long>(std::floor((t_max - t0) / dt + 1e-9));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(steps) + 1);
  for (long i = 0; i <= steps; ++i) grid.push_back(t0 + static_cast<double>(i) * dt);
  return grid;
}

StabilityReport stability(const QuadraticGenerator& gen) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(gen.drift(), false);
  StabilityReport report;
  const auto& ev = solver.eigenvalues();
  report.spectrum.assign(ev.data(), ev.data() + ev.size());
  std::sort(report.spectrum.begin(), report.spectrum.end(),
            [](const auto& a, const auto& b) {
              return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
            });
  report.max_real_eig = report.spectrum.empty() ? 0.0 : report.spectrum.front().real();
  report.hurwitz = report.max_real_eig < 0.0;
  return report;
}

double lyapunov_residual(const QuadraticGenerator& gen, const Eigen::MatrixXd& sigma) {
  const Eigen::MatrixXd& A = gen.drift();
  const Eigen::MatrixXd r = A * sigma + sigma * A.transpose() + gen.diffusion();
  const double scale = gen.diffusion().norm();
  return scale > 0.0 ? r.norm() / scale : r.norm();
}

CovarianceState steady_state(const QuadraticGenerator& gen) {
  StabilityReport report = stability(gen);
  if (!report.hurwitz) throw UnstableError(std::move(report));

  const Eigen::MatrixXd& A = gen.drift();
  const Eigen::Index n = A.rows();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  // vec(A S + S A^T) = (I kron A + A kron I) vec(S) for column-major vec.
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      K.block(i * n, j * n, n, n) += I(i, j) * A;
      K.block(i * n, j * n, n, n) += A(i, j) * I;
    }
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(K);

  Eigen::MatrixXd sigma(n, n);
  Eigen::Map<Eigen::VectorXd>(sigma.data(), n * n) =
      lu.solve(-Eigen::Map<const Eigen::VectorXd>(gen.diffusion().data(), n * n));
  sigma = symmetrized(sigma);
  for (int pass = 0; pass < 2; ++pass) {
    Eigen::MatrixXd r = -(A * sigma + sigma * A.transpose() + gen.diffusion());
    Eigen::MatrixXd delta(n, n);
    Eigen::Map<Eigen::VectorXd>(delta.data(), n * n) =
        lu.solve(Eigen::Map<const Eigen::VectorXd>(r.data(), n * n));
    sigma = symmetrized(sigma + delta);
  }

  CovarianceState out;
  out.t = std::numeric_limits<double>::infinity();
  out.mean = Eigen::VectorXd::Zero(n);
  out.sigma = std::move(sigma);
  return out;
}

StabilityThresholds analytic_stability_bounds(const CavitySpec& c) {
  return {0.5 * std::sqrt(c.kappa * c.mu),
          0.5 * std::sqrt(c.omega_m * c.omega_m + (c.mu * c.mu + c.kappa * c.kappa) / 4.0)};
}

}  // namespace optoarray
