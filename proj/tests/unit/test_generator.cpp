#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>
#include <unsupported/Eigen/MatrixFunctions>

#include "optoarray/dynamics.hpp"
#include "support.hpp"

using namespace optoarray;
using testing::cavity;

namespace {

QuadraticGenerator generator_of(const NetworkSpec& spec) { return build_generator(validate(spec)); }

NetworkSpec random_network(std::mt19937_64& rng, int n, bool cascade) {
  std::uniform_real_distribution<double> u(0.05, 1.5);
  std::uniform_int_distribution<int> pick(0, 2);
  std::vector<CavitySpec> cavities;
  std::vector<CouplingSpec> couplings;
  const bool full = pick(rng) == 0;
  for (int k = 1; k <= n; ++k) {
    auto c = cavity(k, full ? Regime::Full : (pick(rng) == 1 ? Regime::BlueRWA : Regime::RedRWA),
                    u(rng), 5 * u(rng), 5 * u(rng));
    c.kappa = u(rng);
    c.mu = 0.1 * u(rng);
    c.nbar = u(rng);
    cavities.push_back(c);
    if (k > 1) {
      couplings.push_back(cascade ? testing::cascaded(k - 1, k) : testing::reversible(k - 1, k, u(rng)));
    }
  }
  return testing::network(cavities, couplings);
}

}  // namespace

TEST_CASE("mode table and labels") {
  const auto gen = generator_of(testing::network(
      {cavity(1, Regime::RedRWA, 0.1), cavity(2, Regime::RedRWA, 0.1)}, {testing::cascaded(1, 2)}));
  REQUIRE(gen.modes().size() == 4);
  CHECK(gen.modes()[0].name() == "a1");
  CHECK(gen.modes()[1].name() == "b1");
  CHECK(gen.modes()[3].name() == "b2");
  CHECK(gen.modes().slot(ModeIndex::parse("a2")) == 2);
  CHECK_THROWS_AS(gen.modes().slot(ModeIndex::parse("b7")), Error);
  CHECK(gen.dimension() == 8);
}

TEST_CASE("undriven cavity relaxes to vacuum") {
  auto c = cavity(1, Regime::Full, 0.0, 3.0, 0.0);
  c.kappa = 0.7;
  const auto gen = generator_of(testing::network({c}));
  CHECK(gen.drift().block(0, 0, 2, 2).isApprox(-0.35 * Eigen::Matrix2d::Identity(), 1e-15));
  CHECK(gen.diffusion().block(0, 0, 2, 2).isApprox(0.7 * Eigen::Matrix2d::Identity(), 1e-15));
  const auto ss = steady_state(gen);
  CHECK((ss.sigma.block(0, 0, 2, 2) - Eigen::Matrix2d::Identity()).norm() < 1e-12);
}

TEST_CASE("mechanical mode relaxes to its thermal occupation") {
  auto c = cavity(1, Regime::Full, 0.0, 3.0, 0.0);
  c.nbar = 1.7;
  const auto ss = steady_state(generator_of(testing::network({c})));
  CHECK((ss.sigma.block(2, 2, 2, 2) - 4.4 * Eigen::Matrix2d::Identity()).norm() < 1e-10);
}

TEST_CASE("two empty cascaded cavities satisfy the vacuum identity") {
  auto c1 = cavity(1, Regime::Full, 0.0, 1.0, 0.0);
  auto c2 = cavity(2, Regime::Full, 0.0, 1.0, 0.0);
  c1.kappa = 0.8;
  c2.kappa = 1.3;
  const auto gen = generator_of(testing::network({c1, c2}, {testing::cascaded(1, 2)}));
  const Eigen::MatrixXd& A = gen.drift();
  const Eigen::MatrixXd& D = gen.diffusion();
  const double s = std::sqrt(0.8 * 1.3);
  CHECK(A(4, 0) == doctest::Approx(-s));
  CHECK(A(5, 1) == doctest::Approx(-s));
  CHECK(A(0, 4) == 0.0);
  CHECK(D(0, 4) == doctest::Approx(s));
  CHECK(D(5, 1) == doctest::Approx(s));
  CHECK((A + A.transpose() + D).norm() < 1e-14);
  const auto ss = steady_state(gen);
  CHECK((ss.sigma - Eigen::MatrixXd::Identity(8, 8)).norm() < 1e-10);
}

TEST_CASE("normative drift blocks") {
  const double g = 0.3, delta = 2.0, w = 5.0;
  SUBCASE("full regime") {
    auto c = cavity(1, Regime::Full, g, w, delta);
    const Eigen::MatrixXd A = generator_of(testing::network({c})).drift();
    CHECK(A(0, 1) == doctest::Approx(delta));
    CHECK(A(1, 0) == doctest::Approx(-delta));
    CHECK(A(2, 3) == doctest::Approx(w));
    CHECK(A(3, 2) == doctest::Approx(-w));
    CHECK(A(1, 2) == doctest::Approx(-2 * g));
    CHECK(A(3, 0) == doctest::Approx(-2 * g));
    CHECK(A(0, 3) == 0.0);
    CHECK(A(2, 1) == 0.0);
    CHECK(A(0, 0) == doctest::Approx(-0.5));
    CHECK(A(2, 2) == doctest::Approx(-0.005));
  }
  SUBCASE("blue sideband") {
    const Eigen::MatrixXd A = generator_of(testing::network({cavity(1, Regime::BlueRWA, g, w, delta)})).drift();
    CHECK(A(0, 3) == doctest::Approx(-g));
    CHECK(A(1, 2) == doctest::Approx(-g));
    CHECK(A(2, 1) == doctest::Approx(-g));
    CHECK(A(3, 0) == doctest::Approx(-g));
    CHECK(A(0, 1) == 0.0);
    CHECK(A(2, 3) == 0.0);
  }
  SUBCASE("red sideband") {
    const Eigen::MatrixXd A = generator_of(testing::network({cavity(1, Regime::RedRWA, g, w, delta)})).drift();
    CHECK(A(0, 3) == doctest::Approx(g));
    CHECK(A(1, 2) == doctest::Approx(-g));
    CHECK(A(2, 1) == doctest::Approx(g));
    CHECK(A(3, 0) == doctest::Approx(-g));
  }
  SUBCASE("reversible hopping") {
    const Eigen::MatrixXd A = generator_of(testing::network({cavity(1, Regime::RedRWA, g), cavity(2, Regime::RedRWA, g)},
                                                            {testing::reversible(1, 2, 0.7)}))
                                  .drift();
    CHECK(A(0, 5) == doctest::Approx(0.7));
    CHECK(A(1, 4) == doctest::Approx(-0.7));
    CHECK(A(4, 1) == doctest::Approx(0.7));
    CHECK(A(5, 0) == doctest::Approx(-0.7));
  }
}

TEST_CASE("diffusion is positive semidefinite") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const auto gen = generator_of(random_network(rng, 1 + i % 4, i % 2 == 0));
    const Eigen::MatrixXd& D = gen.diffusion();
    CHECK((D - D.transpose()).norm() == 0.0);
    CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(D).eigenvalues().minCoeff() >= -1e-12);
  }
}

TEST_CASE("undamped part of a reversible network generates a symplectic flow") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 30; ++i) {
    auto spec = random_network(rng, 1 + i % 3, false);
    for (auto& c : spec.cavities) {
      if (c.regime == Regime::BlueRWA) c.regime = Regime::RedRWA;
    }
    const auto v = validate(spec);
    const auto gen = build_generator(v);
    Eigen::MatrixXd H = gen.drift();
    for (std::size_t k = 0; k < v.size(); ++k) {
      const auto& c = v.cavities()[k];
      for (int r = 0; r < 2; ++r) {
        H(4 * k + r, 4 * k + r) += c.kappa / 2;
        H(4 * k + 2 + r, 4 * k + 2 + r) += c.mu / 2;
      }
    }
    const Eigen::MatrixXd W = testing::omega(static_cast<int>(gen.modes().size()));
    CHECK((H * W + W * H.transpose()).norm() < 1e-12);
    const Eigen::MatrixXd S = (0.3 * H).exp();
    CHECK((S * W * S.transpose() - W).norm() < 1e-10);
  }
}

TEST_CASE("hopping blocks are bidirectional and cascade blocks one-way") {
  std::mt19937_64 rng(5);
  const auto rev = generator_of(random_network(rng, 3, false)).drift();
  const auto cas = generator_of(random_network(rng, 3, true)).drift();
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      if (j == k) continue;
      const Eigen::Matrix2d jk = rev.block(4 * j, 4 * k, 2, 2);
      const Eigen::Matrix2d kj = rev.block(4 * k, 4 * j, 2, 2);
      CHECK((jk + kj.transpose()).norm() < 1e-15);
      if (j < k) CHECK(cas.block(4 * j, 4 * k, 4, 4).norm() == 0.0);
      else CHECK(cas.block(4 * j, 4 * k, 2, 2).norm() > 0.0);
    }
  }
}

TEST_CASE("cascade decomposition examples") {
  auto c1 = cavity(1, Regime::RedRWA, 0.1);
  auto c2 = cavity(2, Regime::RedRWA, 0.2);
  auto c3 = cavity(3, Regime::BlueRWA, 0.05);
  c1.kappa = 0.5;
  c2.kappa = 2.0;
  c3.kappa = 1.5;

  const auto one = cascade_decomposition(validate(testing::network({c1})));
  REQUIRE(one.jumps.size() == 1);
  CHECK(one.jumps[0](0) == doctest::Approx(std::sqrt(0.5)));
  CHECK(one.hamiltonian.norm() == 0.0);

  const auto two = cascade_decomposition(validate(testing::network({c1, c2}, {testing::cascaded(1, 2)})));
  REQUIRE(two.jumps.size() == 1);
  CHECK(two.jumps[0](0) == doctest::Approx(std::sqrt(0.5)));
  CHECK(two.jumps[0](1) == doctest::Approx(std::sqrt(2.0)));
  CHECK(two.hamiltonian(0, 1).imag() == doctest::Approx(0.5));
  CHECK(two.hamiltonian(1, 0).imag() == doctest::Approx(-0.5));
  CHECK(two.hamiltonian(0, 1).real() == 0.0);

  const auto three = cascade_decomposition(validate(
      testing::network({c1, c2, c3}, {testing::cascaded(1, 2), testing::cascaded(2, 3)})));
  int terms = 0;
  for (int j = 0; j < 3; ++j) {
    for (int k = j + 1; k < 3; ++k) {
      const double kj = std::sqrt(std::vector{0.5, 2.0, 1.5}[j] * std::vector{0.5, 2.0, 1.5}[k]);
      CHECK(three.hamiltonian(j, k).imag() == doctest::Approx(kj / 2));
      if (std::abs(three.hamiltonian(j, k)) > 0) ++terms;
    }
  }
  CHECK(terms == 3);
  CHECK((three.hamiltonian - three.hamiltonian.adjoint()).norm() < 1e-15);
}

TEST_CASE("generator from the cascade decomposition matches the per-edge rules") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 50; ++i) {
    const auto v = validate(random_network(rng, 1 + i % 4, true));
    const auto direct = build_generator(v);
    const auto rebuilt = generator_from_decomposition(v, cascade_decomposition(v));
    CHECK((direct.drift() - rebuilt.drift()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((direct.diffusion() - rebuilt.diffusion()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("cascade decomposition refuses reversible edges") {
  const auto v = validate(testing::network({cavity(1, Regime::RedRWA, 0.1), cavity(2, Regime::RedRWA, 0.1)},
                                           {testing::reversible(1, 2, 1.0)}));
  try {
    cascade_decomposition(v);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == "unsupported-coupling");
  }
}

TEST_CASE("purely optical cascaded networks stay in vacuum") {
  std::vector<CavitySpec> cavities;
  for (int k = 1; k <= 3; ++k) {
    auto c = cavity(k, Regime::RedRWA, 0.0);
    c.kappa = 0.4 * k;
    cavities.push_back(c);
  }
  const auto ss = steady_state(generator_of(testing::network(cavities, {testing::cascaded(1, 2), testing::cascaded(2, 3)})));
  CHECK((ss.sigma - Eigen::MatrixXd::Identity(12, 12)).norm() < 1e-9);
}
