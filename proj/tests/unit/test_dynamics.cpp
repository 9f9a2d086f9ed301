#include <doctest.h>

#include <cmath>

#include "optoarray/entanglement.hpp"
#include "optoarray/scenario.hpp"
#include "support.hpp"

using namespace optoarray;
using testing::cavity;

namespace {

QuadraticGenerator generator_of(const NetworkSpec& spec) { return build_generator(validate(spec)); }

NetworkSpec blue_red(double g1, double g2) {
  return testing::network({cavity(1, Regime::BlueRWA, g1), cavity(2, Regime::RedRWA, g2)},
                          {testing::reversible(1, 2, 1.0)});
}

}  // namespace

TEST_CASE("uniform grid includes both ends") {
  const auto grid = uniform_grid(0.0, 1.0, 0.1);
  REQUIRE(grid.size() == 11);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == doctest::Approx(1.0));
}

TEST_CASE("undriven cavity stays in vacuum") {
  const auto spec = testing::network({cavity(1, Regime::Full, 0.0, 4.0, 1.0)});
  const auto v = validate(spec);
  const auto states = evolve(build_generator(v), initial_state(v, InitialState::VacuumAll),
                             uniform_grid(0.0, 20.0, 0.5));
  for (const auto& s : states) CHECK((s.sigma - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-12);
}

TEST_CASE("mechanical mode heats up exponentially from vacuum") {
  auto c = cavity(1, Regime::Full, 0.0, 4.0, 1.0);
  c.mu = 0.3;
  c.nbar = 2.5;
  const auto v = validate(testing::network({c}));
  const auto states = evolve(build_generator(v), initial_state(v, InitialState::VacuumAll),
                             uniform_grid(0.0, 10.0, 0.25));
  for (const auto& s : states) {
    const double expected = 1.0 + 2 * 2.5 * (1.0 - std::exp(-0.3 * s.t));
    CHECK(s.sigma(2, 2) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(s.sigma(3, 3) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("fig2 parameters entangle the first two mechanical modes") {
  const auto s = ScenarioCatalog().load("fig2");
  const auto v = validate(s.network);
  const auto gen = build_generator(v);
  const auto states = evolve(gen, initial_state(v, v.spec().initial_state), uniform_grid(0.0, 10.0, 0.05));
  double best = 0.0;
  for (const auto& st : states) best = std::max(best, log_negativity(extract_two_mode(st.sigma, 1, 3)).E_N);
  CHECK(best > 0.0);
}

TEST_CASE("initial state must be physical") {
  const auto v = validate(testing::network({cavity(1, Regime::RedRWA, 0.1)}));
  CovarianceState bad = initial_state(v, InitialState::VacuumAll);
  bad.sigma *= 0.5;
  try {
    evolve(build_generator(v), bad, uniform_grid(0.0, 1.0, 0.5));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == "non-physical-state");
  }
}

TEST_CASE("steady-state examples") {
  CHECK((steady_state(generator_of(testing::network({cavity(1, Regime::Full, 0.0, 2.0, 0.0)}))).sigma -
         Eigen::MatrixXd::Identity(4, 4))
            .norm() < 1e-10);
  auto hot = cavity(1, Regime::Full, 0.0, 2.0, 0.0);
  hot.nbar = 2.0;
  const auto ss = steady_state(generator_of(testing::network({hot})));
  CHECK((ss.sigma.block(2, 2, 2, 2) - 5.0 * Eigen::Matrix2d::Identity()).norm() < 1e-10);

  const auto point = steady_state(generator_of(blue_red(0.02, 0.1)));
  CHECK(log_negativity(extract_two_mode(point.sigma, 1, 3)).E_N > 0.0);
}

TEST_CASE("steady state meets the residual bound") {
  const auto gen = generator_of(blue_red(0.04, 0.3));
  const auto ss = steady_state(gen);
  CHECK(lyapunov_residual(gen, ss.sigma) <= 1e-10);
  CHECK(ss.mean.isZero());
}

TEST_CASE("unstable generator has no steady state") {
  const auto gen = generator_of(testing::network({cavity(1, Regime::BlueRWA, 0.2)}));
  try {
    steady_state(gen);
    FAIL("expected an error");
  } catch (const UnstableError& e) {
    CHECK(e.code() == "unstable-no-steady-state");
    CHECK_FALSE(e.report().hurwitz);
    CHECK(e.report().max_real_eig > 0.0);
  }
}

TEST_CASE("stability examples") {
  auto empty = cavity(1, Regime::Full, 0.0, 3.0, 0.0);
  empty.mu = 2.0;
  const auto report = stability(generator_of(testing::network({empty})));
  CHECK(report.hurwitz);
  CHECK(report.max_real_eig == doctest::Approx(-0.5));
  CHECK(report.spectrum.size() == 4);

  CHECK_FALSE(stability(generator_of(testing::network({cavity(1, Regime::BlueRWA, 0.051)}))).hurwitz);
  CHECK(stability(generator_of(testing::network({cavity(1, Regime::BlueRWA, 0.049)}))).hurwitz);

  auto red = cavity(1, Regime::Full, 0.5, 200.0, 200.0);
  const auto bounds = analytic_stability_bounds(red);
  CHECK(red.g < bounds.red);
  CHECK(stability(generator_of(testing::network({red}))).hurwitz);
}

TEST_CASE("blue-sideband stability flips at the analytic threshold") {
  const auto bounds = analytic_stability_bounds(cavity(1, Regime::BlueRWA, 0.0));
  for (double g = 0.0; g <= 0.1; g += 0.0025) {
    const bool hurwitz = stability(generator_of(testing::network({cavity(1, Regime::BlueRWA, g)}))).hurwitz;
    if (std::abs(g - bounds.blue) > 1e-9) CHECK(hurwitz == (g < bounds.blue));
  }
}

TEST_CASE("analytic stability bounds") {
  auto c = cavity(1, Regime::Full, 0.0, 200.0, 200.0);
  auto b = analytic_stability_bounds(c);
  CHECK(b.blue == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(b.red == doctest::Approx(0.5 * std::sqrt(200.0 * 200.0 + (0.0001 + 1.0) / 4)).epsilon(1e-14));
  CHECK(b.red == doctest::Approx(100.0).epsilon(1e-5));
  c.mu = 1e-12;
  CHECK(analytic_stability_bounds(c).blue < 1e-6);
}

TEST_CASE("one double step equals two single steps") {
  const auto s = ScenarioCatalog().load("fig2");
  const auto v = validate(s.network);
  const auto gen = build_generator(v);
  const auto start = initial_state(v, InitialState::ThermalMechanics);
  for (double dt : {0.01, 0.1, 1.0}) {
    const auto once = propagate(make_propagator(gen, 2 * dt), start);
    const auto half = make_propagator(gen, dt);
    const auto twice = propagate(half, propagate(half, start));
    CHECK((once.sigma - twice.sigma).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("evolution preserves physicality and reaches the steady state") {
  const auto v = validate(blue_red(0.03, 0.2));
  const auto gen = build_generator(v);
  const auto report = stability(gen);
  const double horizon = 40.0 / std::abs(report.max_real_eig);
  auto grid = uniform_grid(0.0, 200.0, 1.0);
  grid.push_back(horizon);
  const auto states = evolve(gen, initial_state(v, InitialState::ThermalMechanics), grid);
  for (const auto& s : states) CHECK(min_physical_eigenvalue(s.sigma) >= -1e-9);
  CHECK((states.back().sigma - steady_state(gen).sigma).norm() <= 1e-8);
}

TEST_CASE("means follow the drift") {
  const auto v = validate(testing::network({cavity(1, Regime::Full, 0.0, 3.0, 2.0)}));
  CovarianceState start = initial_state(v, InitialState::VacuumAll);
  start.mean(0) = 1.0;
  const auto end = evolve(build_generator(v), start, std::vector<double>{0.0, 0.7}).back();
  const double decay = std::exp(-0.5 * 0.7);
  CHECK(end.mean(0) == doctest::Approx(decay * std::cos(2.0 * 0.7)).epsilon(1e-12));
  CHECK(end.mean(1) == doctest::Approx(-decay * std::sin(2.0 * 0.7)).epsilon(1e-12));
}
