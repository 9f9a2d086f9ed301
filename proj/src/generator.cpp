#include "optoarray/generator.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace optoarray {

namespace {

int q_row(int mode) { return 2 * mode; }
int p_row(int mode) { return 2 * mode + 1; }
int optical_mode(int position) { return 2 * position; }
int mechanical_mode(int position) { return 2 * position + 1; }

// Free rotation, damping, optomechanics and mechanical noise of one cavity.
// Optical damping and vacuum noise are optional so the decomposition route can
// supply them through the collective jumps instead.
void add_local_terms(Eigen::MatrixXd& A, Eigen::MatrixXd& D, const CavitySpec& c, int position,
                     bool optical_damping) {
  const int a = optical_mode(position);
  const int b = mechanical_mode(position);
  const int qa = q_row(a), pa = p_row(a), qb = q_row(b), pb = p_row(b);

  switch (c.regime) {
    case Regime::Full:
      A(qa, pa) += c.detuning;
      A(pa, qa) -= c.detuning;
      A(qb, pb) += c.omega_m;
      A(pb, qb) -= c.omega_m;
      A(pa, qb) -= 2.0 * c.g;
      A(pb, qa) -= 2.0 * c.g;
      break;
    case Regime::BlueRWA:
      A(qa, pb) -= c.g;
      A(pa, qb) -= c.g;
      A(qb, pa) -= c.g;
      A(pb, qa) -= c.g;
      break;
    case Regime::RedRWA:
      A(qa, pb) += c.g;
      A(pa, qb) -= c.g;
      A(qb, pa) += c.g;
      A(pb, qa) -= c.g;
      break;
  }

  if (optical_damping) {
    A(qa, qa) -= c.kappa / 2.0;
    A(pa, pa) -= c.kappa / 2.0;
    D(qa, qa) += c.kappa;
    D(pa, pa) += c.kappa;
  }
  A(qb, qb) -= c.mu / 2.0;
  A(pb, pb) -= c.mu / 2.0;
  const double thermal = c.mu * (2.0 * c.nbar + 1.0);
  D(qb, qb) += thermal;
  D(pb, pb) += thermal;
}

}  // namespace

std::string ModeIndex::name() const {
  return (kind == ModeKind::Optical ? "a" : "b") + std::to_string(cavity);
}

ModeIndex ModeIndex::parse(const std::string& text) {
  if (text.size() < 2 || (text[0] != 'a' && text[0] != 'b')) {
    throw Error("bad-mode-name", "mode name must look like a1 or b2, got '" + text + "'");
  }
  std::size_t used = 0;
  int cavity = 0;
  try {
    cavity = std::stoi(text.substr(1), &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() - 1) {
    throw Error("bad-mode-name", "mode name must look like a1 or b2, got '" + text + "'");
  }
  return {cavity, text[0] == 'a' ? ModeKind::Optical : ModeKind::Mechanical};
}

ModeTable::ModeTable(const ValidatedNetwork& network) {
  for (const auto& c : network.cavities()) {
    modes_.push_back({c.index, ModeKind::Optical});
    modes_.push_back({c.index, ModeKind::Mechanical});
  }
}

int ModeTable::slot(const ModeIndex& mode) const {
  for (std::size_t m = 0; m < modes_.size(); ++m) {
    if (modes_[m] == mode) return static_cast<int>(m);
  }
  throw Error("unknown-mode", "mode " + mode.name() + " is not part of the network");
}

bool ModeTable::contains(const ModeIndex& mode) const {
  for (const auto& m : modes_) {
    if (m == mode) return true;
  }
  return false;
}

Eigen::MatrixXd symplectic_form(int modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (int m = 0; m < modes; ++m) {
    omega(2 * m, 2 * m + 1) = 1.0;
    omega(2 * m + 1, 2 * m) = -1.0;
  }
  return omega;
}

QuadraticGenerator::QuadraticGenerator(Eigen::MatrixXd drift, Eigen::MatrixXd diffusion,
                                       ModeTable modes)
    : drift_(std::move(drift)), diffusion_(std::move(diffusion)), modes_(std::move(modes)) {
  const auto n = static_cast<Eigen::Index>(2 * modes_.size());
  if (drift_.rows() != n || drift_.cols() != n || diffusion_.rows() != n ||
      diffusion_.cols() != n) {
    throw Error("shape-mismatch", "drift/diffusion size does not match the mode table");
  }
  if (!drift_.allFinite() || !diffusion_.allFinite()) {
    throw Error("non-finite-generator", "drift and diffusion must be finite");
  }
  if ((diffusion_ - diffusion_.transpose()).cwiseAbs().maxCoeff() >
      1e-12 * std::max(1.0, diffusion_.cwiseAbs().maxCoeff())) {
    throw Error("asymmetric-diffusion", "diffusion matrix must be symmetric");
  }
}

QuadraticGenerator build_generator(const ValidatedNetwork& network) {
  const auto& spec = network.spec();
  const int n = 4 * static_cast<int>(network.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);

  for (std::size_t i = 0; i < network.size(); ++i) {
    add_local_terms(A, D, spec.cavities[i], static_cast<int>(i), true);
  }

  for (const auto& e : spec.couplings) {
    if (e.kind != CouplingKind::Reversible) continue;
    const int j = optical_mode(spec.position_of(e.from));
    const int k = optical_mode(spec.position_of(e.to));
    A(q_row(j), p_row(k)) += e.chi;
    A(p_row(j), q_row(k)) -= e.chi;
    A(q_row(k), p_row(j)) += e.chi;
    A(p_row(k), q_row(j)) -= e.chi;
  }

  // Every ordered pair j < k inside a cascade chain feeds forward, including
  // the skip edges (1 -> 3) implied by a single shared output line.
  for (const auto& chain : cascade_chains(network)) {
    for (std::size_t x = 0; x < chain.size(); ++x) {
      for (std::size_t y = x + 1; y < chain.size(); ++y) {
        const double rate =
            std::sqrt(spec.cavities[chain[x]].kappa * spec.cavities[chain[y]].kappa);
        const int j = optical_mode(chain[x]);
        const int k = optical_mode(chain[y]);
        A(q_row(k), q_row(j)) -= rate;
        A(p_row(k), p_row(j)) -= rate;
        D(q_row(j), q_row(k)) += rate;
        D(q_row(k), q_row(j)) += rate;
        D(p_row(j), p_row(k)) += rate;
        D(p_row(k), p_row(j)) += rate;
      }
    }
  }

  return QuadraticGenerator(std::move(A), std::move(D), ModeTable(network));
}

CascadeDecomposition cascade_decomposition(const ValidatedNetwork& network) {
  if (network.has_reversible()) {
    throw Error("unsupported-coupling",
                "cascade decomposition requires a network without reversible edges");
  }
  const auto& spec = network.spec();
  const auto n = static_cast<Eigen::Index>(network.size());
  CascadeDecomposition out;
  out.hamiltonian = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& chain : cascade_chains(network)) {
    Eigen::VectorXd jump = Eigen::VectorXd::Zero(n);
    for (int pos : chain) jump(pos) = std::sqrt(spec.cavities[pos].kappa);
    for (std::size_t x = 0; x < chain.size(); ++x) {
      for (std::size_t y = x + 1; y < chain.size(); ++y) {
        const int j = chain[x], k = chain[y];
        // (i/2) sqrt(k_j k_k) (a_j^dag a_k - a_k^dag a_j)
        const std::complex<double> h(0.0, 0.5 * jump(j) * jump(k));
        out.hamiltonian(j, k) += h;
        out.hamiltonian(k, j) -= h;
      }
    }
    out.jumps.push_back(std::move(jump));
  }
  return out;
}

QuadraticGenerator generator_from_decomposition(const ValidatedNetwork& network,
                                                const CascadeDecomposition& decomposition) {
  const auto& spec = network.spec();
  const int cavities = static_cast<int>(network.size());
  const int n = 4 * cavities;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < cavities; ++i) add_local_terms(A, D, spec.cavities[i], i, false);

  // Passive optical dynamics da/dt = M a with M = -iH - (1/2) sum_c l^* l^T.
  using namespace std::complex_literals;
  Eigen::MatrixXcd M = -1i * decomposition.hamiltonian;
  for (const auto& l : decomposition.jumps) {
    M -= 0.5 * (l.cast<std::complex<double>>().conjugate() * l.cast<std::complex<double>>().transpose());
  }
  for (int j = 0; j < cavities; ++j) {
    for (int k = 0; k < cavities; ++k) {
      const int mj = optical_mode(j), mk = optical_mode(k);
      const std::complex<double> m = M(j, k);
      A(q_row(mj), q_row(mk)) += m.real();
      A(q_row(mj), p_row(mk)) -= m.imag();
      A(p_row(mj), q_row(mk)) += m.imag();
      A(p_row(mj), p_row(mk)) += m.real();

      std::complex<double> c = 0.0;
      for (const auto& l : decomposition.jumps) c += std::conj(std::complex<double>(l(j))) * l(k);
      D(q_row(mj), q_row(mk)) += c.real();
      D(q_row(mj), p_row(mk)) -= c.imag();
      D(p_row(mj), q_row(mk)) += c.imag();
      D(p_row(mj), p_row(mk)) += c.real();
    }
  }
  return QuadraticGenerator(std::move(A), std::move(D), ModeTable(network));
}

}  // namespace optoarray
