#include "optoarray/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <string>

#include "optoarray/dynamics.hpp"
#include "optoarray/generator.hpp"

namespace optoarray::fock {

namespace {

using cd = std::complex<double>;
constexpr double convergence_tolerance = 1e-4;

std::size_t required_dimension(std::size_t modes, int cutoff, std::size_t budget) {
  std::size_t dim = 1;
  for (std::size_t m = 0; m < modes; ++m) {
    dim *= static_cast<std::size_t>(cutoff + 1);
    if (dim > budget) {
      // keep multiplying only to report the full requirement
      std::size_t full = dim;
      for (std::size_t r = m + 1; r < modes; ++r) full *= static_cast<std::size_t>(cutoff + 1);
      throw Error("dimension-budget-exceeded",
                  "truncated Hilbert space needs dimension " + std::to_string(full) +
                      " but the budget is " + std::to_string(budget));
    }
  }
  return dim;
}

// Annihilation operator of mode m on the product basis, first mode most
// significant.
SparseOp lowering_operator(int mode, int modes, int cutoff, int dim) {
  const int levels = cutoff + 1;
  int stride = 1;
  for (int r = mode + 1; r < modes; ++r) stride *= levels;
  std::vector<Eigen::Triplet<cd>> entries;
  for (int s = 0; s < dim; ++s) {
    const int n = (s / stride) % levels;
    if (n > 0) entries.emplace_back(s - stride, s, std::sqrt(static_cast<double>(n)));
  }
  SparseOp op(dim, dim);
  op.setFromTriplets(entries.begin(), entries.end());
  return op;
}

SparseOp adjoint(const SparseOp& op) { return SparseOp(op.adjoint()); }

// tr(O rho) without forming O rho.
cd expectation(const SparseOp& op, const Eigen::MatrixXcd& rho) {
  cd acc{0.0, 0.0};
  for (int c = 0; c < op.outerSize(); ++c) {
    for (SparseOp::InnerIterator it(op, c); it; ++it) acc += it.value() * rho(c, it.row());
  }
  return acc;
}

// Integer weights w per mode such that every coherent term and every feed term
// conserves sum_m w_m n_m. Jumps then shift that charge uniformly, so rho stays
// block diagonal in it and the products can skip the empty blocks. Among
// weights in {-1, 0, 1} the one with the fewest structurally nonzero entries
// wins; all zeros is always admissible.
std::vector<int> conserved_charge(const ValidatedNetwork& network, int cutoff, int dim) {
  const int modes = static_cast<int>(2 * network.size());
  std::vector<std::vector<int>> constraints;
  auto constrain = [&](std::initializer_list<std::pair<int, int>> terms) {
    std::vector<int> row(modes, 0);
    for (auto [m, c] : terms) row[m] += c;
    constraints.push_back(std::move(row));
  };
  const auto& cav = network.cavities();
  for (int p = 0; p < static_cast<int>(cav.size()); ++p) {
    const int a = 2 * p, b = 2 * p + 1;
    switch (cav[p].regime) {
      case Regime::Full: constrain({{a, 1}}); constrain({{b, 1}}); break;
      case Regime::BlueRWA: constrain({{a, 1}, {b, 1}}); break;
      case Regime::RedRWA: constrain({{a, 1}, {b, -1}}); break;
    }
  }
  for (const auto& e : network.couplings()) {
    if (e.kind != CouplingKind::Reversible) continue;
    constrain({{2 * network.spec().position_of(e.from), 1}, {2 * network.spec().position_of(e.to), -1}});
  }
  for (const auto& chain : cascade_chains(network)) {
    for (std::size_t x = 1; x < chain.size(); ++x) constrain({{2 * chain[0], 1}, {2 * chain[x], -1}});
  }

  const int levels = cutoff + 1;
  auto charges_for = [&](const std::vector<int>& w) {
    std::vector<int> q(dim, 0);
    for (int s = 0; s < dim; ++s) {
      int rest = s, total = 0;
      for (int m = modes - 1; m >= 0; --m) {
        total += w[m] * (rest % levels);
        rest /= levels;
      }
      q[s] = total;
    }
    return q;
  };
  std::vector<int> best_q(dim, 0);
  double best_cost = static_cast<double>(dim) * dim;
  std::vector<int> w(modes, -1);
  for (;;) {
    const bool admissible = std::all_of(constraints.begin(), constraints.end(), [&](const auto& c) {
      int dot = 0;
      for (int m = 0; m < modes; ++m) dot += c[m] * w[m];
      return dot == 0;
    });
    if (admissible) {
      const auto q = charges_for(w);
      std::map<int, double> sizes;
      for (int v : q) sizes[v] += 1.0;
      double cost = 0.0;
      for (const auto& [_, n] : sizes) cost += n * n;
      if (cost < best_cost) {
        best_cost = cost;
        best_q = q;
      }
    }
    int m = 0;
    while (m < modes && w[m] == 1) w[m++] = -1;
    if (m == modes) break;
    ++w[m];
  }
  return best_q;
}

}  // namespace

Liouvillian::Liouvillian(const ValidatedNetwork& network, int cutoff, std::size_t budget)
    : cutoff_(cutoff) {
  if (cutoff < 2) throw InvalidParameter("cutoff must be at least 2");
  const int modes = static_cast<int>(2 * network.size());
  dimension_ = static_cast<int>(required_dimension(modes, cutoff, budget));
  for (int m = 0; m < modes; ++m) {
    lowering_.push_back(lowering_operator(m, modes, cutoff, dimension_));
  }

  const auto& cav = network.cavities();
  auto a = [&](std::size_t p) -> const SparseOp& { return lowering_[2 * p]; };
  auto b = [&](std::size_t p) -> const SparseOp& { return lowering_[2 * p + 1]; };

  SparseOp H(dimension_, dimension_);
  std::vector<SparseOp> jump_ops;
  for (std::size_t p = 0; p < cav.size(); ++p) {
    const auto& c = cav[p];
    const SparseOp ad = adjoint(a(p)), bd = adjoint(b(p));
    switch (c.regime) {
      case Regime::Full:
        H += c.detuning * (ad * a(p)) + c.omega_m * (bd * b(p)) +
             c.g * (SparseOp(a(p) + ad) * SparseOp(b(p) + bd));
        break;
      case Regime::BlueRWA:
        H += c.g * (a(p) * b(p) + ad * bd);
        break;
      case Regime::RedRWA:
        H += c.g * (ad * b(p) + a(p) * bd);
        break;
    }
    jump_ops.push_back(std::sqrt(c.kappa) * a(p));
    jump_ops.push_back(std::sqrt(c.mu * (c.nbar + 1.0)) * b(p));
    if (c.nbar > 0.0) jump_ops.push_back(std::sqrt(c.mu * c.nbar) * bd);
  }
  for (const auto& e : network.couplings()) {
    if (e.kind != CouplingKind::Reversible) continue;
    const auto j = static_cast<std::size_t>(network.spec().position_of(e.from));
    const auto k = static_cast<std::size_t>(network.spec().position_of(e.to));
    const SparseOp hop = adjoint(a(j)) * a(k);
    H += e.chi * (hop + adjoint(hop));
  }

  SparseOp K = cd(0.0, -1.0) * H;
  for (const auto& L : jump_ops) K -= 0.5 * (adjoint(L) * L);
  for (const auto& chain : cascade_chains(network)) {
    for (std::size_t x = 0; x < chain.size(); ++x) {
      for (std::size_t y = x + 1; y < chain.size(); ++y) {
        const auto j = static_cast<std::size_t>(chain[x]), k = static_cast<std::size_t>(chain[y]);
        const double rate = std::sqrt(cav[j].kappa * cav[k].kappa);
        feeds_.push_back({rate, static_cast<int>(2 * j), static_cast<int>(2 * k)});
        K -= rate * (adjoint(a(k)) * a(j));
      }
    }
  }
  K.prune(cd(0.0, 0.0));
  charge_ = conserved_charge(network, cutoff, dimension_);
  effective_ = Entries(K, charge_);
  for (const auto& L : jump_ops) jumps_.emplace_back(L);
  for (const auto& a_m : lowering_) ladders_.emplace_back(a_m);
  const auto [lo, hi] = std::minmax_element(charge_.begin(), charge_.end());
  q_min_ = *lo;
  sectors_.assign(static_cast<std::size_t>(*hi - *lo + 1), {});
  for (int state = 0; state < dimension_; ++state) sectors_[charge_[state] - q_min_].push_back(state);
}

Liouvillian::Entries::Entries(const SparseOp& op, const std::vector<int>& charge) {
  struct Entry {
    int row, col;
    cd value;
  };
  std::vector<Entry> all;
  for (Eigen::Index j = 0; j < op.outerSize(); ++j) {
    for (SparseOp::InnerIterator it(op, j); it; ++it) {
      if (it.value() != cd(0.0, 0.0)) all.push_back({static_cast<int>(it.row()), static_cast<int>(j), it.value()});
    }
  }
  std::stable_sort(all.begin(), all.end(),
                   [&](const Entry& x, const Entry& y) { return charge[x.col] < charge[y.col]; });
  const auto [lo, hi] = std::minmax_element(charge.begin(), charge.end());
  q_min = *lo;
  bucket.assign(static_cast<std::size_t>(*hi - *lo + 2), 0);
  for (const auto& e : all) {
    row.push_back(e.row);
    col.push_back(e.col);
    re.push_back(e.value.real());
    im.push_back(e.value.imag());
    ++bucket[static_cast<std::size_t>(charge[e.col] - q_min + 1)];
  }
  for (std::size_t i = 1; i < bucket.size(); ++i) bucket[i] += bucket[i - 1];
}

namespace {

// out += scale * S * X where the nonzero rows of column c of X all carry
// charge charge[c] + offset. Each column is handled on its own, so the working
// set stays in cache; complex products are spelled out in reals.
void add_left_product(const Liouvillian::Entries& S, const Eigen::MatrixXcd& X,
                      const std::vector<int>& charge, int offset, double scale,
                      Eigen::MatrixXcd& out) {
  const Eigen::Index n = X.rows();
  const int* row = S.row.data();
  const int* col = S.col.data();
  const double* sre = S.re.data();
  const double* sim = S.im.data();
  const int buckets = static_cast<int>(S.bucket.size()) - 1;
  for (Eigen::Index c = 0; c < X.cols(); ++c) {
    const int b = charge[c] + offset - S.q_min;
    if (b < 0 || b >= buckets) continue;
    const double* x = reinterpret_cast<const double*>(X.data() + c * n);
    double* y = reinterpret_cast<double*>(out.data() + c * n);
    for (std::size_t k = S.bucket[b]; k < S.bucket[b + 1]; ++k) {
      const double vr = scale * sre[k], vi = scale * sim[k];
      const double xr = x[2 * col[k]], xi = x[2 * col[k] + 1];
      y[2 * row[k]] += vr * xr - vi * xi;
      y[2 * row[k] + 1] += vr * xi + vi * xr;
    }
  }
}

}  // namespace

Liouvillian::Ladder::Ladder(const SparseOp& op) : source(op.rows(), -1), value(op.rows()) {
  for (Eigen::Index j = 0; j < op.outerSize(); ++j) {
    for (SparseOp::InnerIterator it(op, j); it; ++it) {
      if (it.value() == cd(0.0, 0.0)) continue;
      if (source[it.row()] >= 0) throw Error("oracle-internal", "ladder operator has a full row");
      source[it.row()] = static_cast<int>(j);
      value[it.row()] = it.value();
    }
  }
}

void Liouvillian::add_sandwich(const Ladder& left, const Ladder& right, double scale,
                               const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const {
  // (left rho right^dag)(r, c) = left(r, i) rho(i, j) conj(right(c, j)) with
  // i, j the single source states of r and c. Both operators shift the charge
  // by the same amount, so r only ranges over the sector of c.
  for (Eigen::Index c = 0; c < rho.cols(); ++c) {
    const int j = right.source[c];
    if (j < 0) continue;
    const int sector = charge_[c] - q_min_;
    if (sector < 0 || sector >= static_cast<int>(sectors_.size())) continue;
    const cd weight = scale * std::conj(right.value[c]);
    const cd* x = rho.data() + static_cast<Eigen::Index>(j) * rho.rows();
    cd* y = out.data() + c * out.rows();
    for (int r : sectors_[sector]) {
      const int i = left.source[r];
      if (i >= 0) y[r] += left.value[r] * weight * x[i];
    }
  }
}

Eigen::MatrixXcd Liouvillian::apply(const Eigen::MatrixXcd& rho) const {
  // For Hermitian rho the right-hand side is P + P^dag with
  // P = K rho + (1/2) sum L rho L^dag + sum_f rate a_j rho a_k^dag.
  const Eigen::Index n = rho.rows();
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(n, n);
  add_left_product(effective_, rho, charge_, 0, 1.0, P);
  for (const auto& L : jumps_) add_sandwich(L, L, 0.5, rho, P);
  for (const auto& f : feeds_) {
    add_sandwich(ladders_[f.source], ladders_[f.target], f.rate, rho, P);
  }
  Eigen::MatrixXcd out = P.adjoint();
  out += P;
  return out;
}

Liouvillian build_liouvillian(const ValidatedNetwork& network, const TruncationSpec& trunc) {
  return Liouvillian(network, trunc.cutoff, trunc.budget);
}

DensityState initial_density(const ValidatedNetwork& network, const Liouvillian& liouvillian) {
  const int levels = liouvillian.cutoff() + 1;
  Eigen::VectorXd diag = Eigen::VectorXd::Ones(1);
  for (const auto& c : network.cavities()) {
    for (int kind = 0; kind < 2; ++kind) {
      Eigen::VectorXd pops = Eigen::VectorXd::Zero(levels);
      const bool thermal = kind == 1 && c.nbar > 0.0 &&
                           network.spec().initial_state == InitialState::ThermalMechanics;
      if (thermal) {
        const double ratio = c.nbar / (c.nbar + 1.0);
        for (int n = 0; n < levels; ++n) pops(n) = std::pow(ratio, n);
        pops /= pops.sum();
      } else {
        pops(0) = 1.0;
      }
      Eigen::VectorXd next(diag.size() * levels);
      for (Eigen::Index i = 0; i < diag.size(); ++i) {
        next.segment(i * levels, levels) = diag(i) * pops;
      }
      diag = std::move(next);
    }
  }
  DensityState state;
  state.rho = diag.cast<cd>().asDiagonal();
  return state;
}

MomentTable moments(const Liouvillian& liouvillian, const DensityState& state) {
  const int modes = liouvillian.modes();
  std::vector<cd> first(modes);
  Eigen::MatrixXcd pair(modes, modes), number(modes, modes);
  for (int m = 0; m < modes; ++m) {
    const SparseOp& am = liouvillian.lowering(m);
    first[m] = expectation(am, state.rho);
    for (int n = m; n < modes; ++n) {
      const SparseOp& an = liouvillian.lowering(n);
      pair(m, n) = pair(n, m) = expectation(SparseOp(am * an), state.rho);
      number(m, n) = expectation(SparseOp(adjoint(am) * an), state.rho);
      number(n, m) = std::conj(number(m, n));
    }
  }

  // x = c a + conj(c) a^dag with c = 1 for q and c = -i for p.
  const cd coeff[2] = {cd(1.0, 0.0), cd(0.0, -1.0)};
  MomentTable out;
  out.t = state.t;
  out.mean.resize(2 * modes);
  out.second.resize(2 * modes, 2 * modes);
  for (int u = 0; u < 2 * modes; ++u) {
    const int m = u / 2;
    const cd cu = coeff[u % 2];
    out.mean(u) = 2.0 * (cu * first[m]).real();
    for (int v = 0; v < 2 * modes; ++v) {
      const int n = v / 2;
      const cd cv = coeff[v % 2];
      const cd xx = cu * cv * pair(m, n) +
                    cu * std::conj(cv) * (number(n, m) + (m == n ? 1.0 : 0.0)) +
                    std::conj(cu) * cv * number(m, n) +
                    std::conj(cu) * std::conj(cv) * std::conj(pair(m, n));
      out.second(u, v) = xx.real();
    }
  }
  return out;
}

double max_step(const ValidatedNetwork& network) {
  const auto gen = build_generator(network);
  double rate = 0.0;
  for (const auto& ev : stability(gen).spectrum) rate = std::max(rate, std::abs(ev));
  for (const auto& c : network.cavities()) {
    rate = std::max(rate, c.kappa);
    if (c.regime == Regime::Full) rate = std::max({rate, c.omega_m, std::abs(c.detuning)});
  }
  return 0.01 / std::max(rate, 1e-12);
}

std::vector<MomentTable> integrate_at_cutoff(const ValidatedNetwork& network, int cutoff,
                                             std::size_t budget, std::span<const double> t_grid) {
  if (t_grid.empty()) return {};
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!std::isfinite(t_grid[i]) || t_grid[i] < 0.0 || (i > 0 && t_grid[i] < t_grid[i - 1])) {
      throw InvalidParameter("time grid must be finite, non-negative and non-decreasing");
    }
  }
  const Liouvillian L(network, cutoff, budget);
  const double h_max = max_step(network);
  DensityState state = initial_density(network, L);

  std::vector<MomentTable> out;
  out.reserve(t_grid.size());
  for (double target : t_grid) {
    const double span = target - state.t;
    if (span > 0.0) {
      const auto steps = static_cast<long>(std::ceil(span / h_max - 1e-9));
      const double h = span / static_cast<double>(steps);
      Eigen::MatrixXcd& rho = state.rho;
      Eigen::MatrixXcd k, stage, acc;
      for (long s = 0; s < steps; ++s) {
        k = L.apply(rho);
        acc = k;
        stage.noalias() = rho + (0.5 * h) * k;
        k = L.apply(stage);
        acc += 2.0 * k;
        stage.noalias() = rho + (0.5 * h) * k;
        k = L.apply(stage);
        acc += 2.0 * k;
        stage.noalias() = rho + h * k;
        k = L.apply(stage);
        acc += k;
        stage.noalias() = rho + (h / 6.0) * acc;
        rho.noalias() = 0.5 * (stage + stage.adjoint());
      }
      state.t = target;
    }
    const double trace_error = std::abs(state.rho.trace() - 1.0);
    if (trace_error > 1e-8) {
      throw Error("oracle-trace-drift",
                  "density matrix trace drifted by " + std::to_string(trace_error));
    }
    out.push_back(moments(L, state));
  }
  return out;
}

std::vector<MomentTable> integrate_oracle(const ValidatedNetwork& network,
                                          const TruncationSpec& trunc,
                                          std::span<const double> t_grid) {
  if (trunc.convergence_step < 1) throw InvalidParameter("convergence step must be positive");
  const auto coarse = integrate_at_cutoff(network, trunc.cutoff, trunc.budget, t_grid);
  auto fine =
      integrate_at_cutoff(network, trunc.cutoff + trunc.convergence_step, trunc.budget, t_grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < fine.size(); ++i) {
    worst = std::max(worst, (fine[i].mean - coarse[i].mean).cwiseAbs().maxCoeff());
    worst = std::max(worst, (fine[i].second - coarse[i].second).cwiseAbs().maxCoeff());
  }
  if (!(worst < convergence_tolerance)) {
    throw Error("oracle-not-converged",
                "moments changed by " + std::to_string(worst) + " between cutoffs " +
                    std::to_string(trunc.cutoff) + " and " +
                    std::to_string(trunc.cutoff + trunc.convergence_step) +
                    "; increase the cutoff");
  }
  return fine;
}

std::vector<MomentComparison> compare_with_gaussian(const ValidatedNetwork& network,
                                                    const TruncationSpec& trunc,
                                                    std::span<const double> t_grid) {
  const auto oracle = integrate_oracle(network, trunc, t_grid);
  const auto gen = build_generator(network);
  const auto gaussian = evolve(gen, initial_state(network, network.spec().initial_state), t_grid);
  std::vector<MomentComparison> out;
  for (std::size_t i = 0; i < oracle.size(); ++i) {
    MomentComparison row;
    row.t = oracle[i].t;
    row.oracle = oracle[i].covariance();
    row.gaussian = gaussian[i].sigma;
    row.max_abs_diff = (row.oracle - row.gaussian).cwiseAbs().maxCoeff();
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace optoarray::fock
