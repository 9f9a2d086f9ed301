#include <doctest.h>

#include "optoarray/sweep.hpp"
#include "support.hpp"

using namespace optoarray;
using testing::cavity;

namespace {

NetworkSpec blue_red() {
  return testing::network({cavity(1, Regime::BlueRWA, 0.02), cavity(2, Regime::RedRWA, 0.1)},
                          {testing::reversible(1, 2, 1.0)});
}

std::string code_of(NetworkSpec spec, const std::string& path) {
  try {
    apply_parameter(spec, path, 1.0);
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

}  // namespace

TEST_CASE("parameter paths") {
  auto spec = blue_red();
  apply_parameter(spec, "cavity[1].g", 0.3);
  CHECK(spec.cavities[1].g == 0.3);
  apply_parameter(spec, "cavity[*].nbar", 1.5);
  CHECK(spec.cavities[0].nbar == 1.5);
  CHECK(spec.cavities[1].nbar == 1.5);
  apply_parameter(spec, "coupling[0].chi", 0.2);
  CHECK(spec.couplings[0].chi == 0.2);
  apply_parameter(spec, "cavity[0].detuning", 3.0);
  CHECK(spec.cavities[0].detuning == 3.0);

  CHECK(code_of(blue_red(), "cavity[2].g") == "unresolvable-path");
  CHECK(code_of(blue_red(), "cavity[0].colour") == "unresolvable-path");
  CHECK(code_of(blue_red(), "coupling[0].kappa") == "unresolvable-path");
  CHECK(code_of(blue_red(), "coupling[3].chi") == "unresolvable-path");
  CHECK(code_of(blue_red(), "nonsense") == "unresolvable-path");
}

TEST_CASE("observable parsing and labels") {
  CHECK(Observable::parse_pair("b1:b2").columns() == std::vector<std::string>{"EN_b1_b2"});
  CHECK(Observable::parse_pair("EN_a1_b3").label() == "EN_a1_b3");
  CHECK(Observable::correlation("a1a2dag").columns() ==
        std::vector<std::string>{"re_a1a2dag", "im_a1a2dag"});
  CHECK(Observable::correlation("b2b1").form == CorrelationForm::Pair);
  CHECK(Observable::correlation("b1dagb1").form == CorrelationForm::Number);
  CHECK_THROWS_AS(Observable::correlation("x1y2"), Error);
  CHECK_THROWS_AS(Observable::parse_pair("b1"), Error);
}

TEST_CASE("default observables for three cavities") {
  std::vector<CavitySpec> cavities;
  for (int k = 1; k <= 3; ++k) cavities.push_back(cavity(k, Regime::Full, 0.5, 200, 200));
  const auto v = validate(testing::network(cavities, {testing::reversible(1, 2, 1), testing::reversible(2, 3, 1)}));
  std::vector<std::string> labels;
  for (const auto& o : default_observables(v)) labels.push_back(o.label());
  CHECK(labels == std::vector<std::string>{"EN_b1_b2", "EN_b1_b3", "EN_b2_b3", "EN_a1_b2", "EN_a1_b3",
                                           "EN_a2_b1", "EN_a2_b3", "EN_a3_b1", "EN_a3_b2"});
}

TEST_CASE("unstable points are recorded instead of aborting") {
  SweepSpec sweep;
  sweep.axes = {{"cavity[0].g", {0.01, 0.2, 0.03}}};
  sweep.observables = {Observable::parse_pair("b1:b2")};
  const auto result = run_sweep(blue_red(), sweep);
  REQUIRE(result.rows.size() == 3);
  CHECK(result.rows[0].values.has_value());
  CHECK_FALSE(result.rows[1].values.has_value());
  CHECK(result.rows[2].values.has_value());
  const std::string csv = to_csv(result.to_table());
  CHECK(csv.rfind("cavity[0].g,EN_b1_b2\n", 0) == 0);
  CHECK(csv.find("0.20000000000000001,unstable\n") != std::string::npos);
}

TEST_CASE("sweep output does not depend on the number of jobs") {
  SweepSpec sweep;
  sweep.axes = {{"coupling[0].chi", {0.2, 0.5, 1.0}}, {"cavity[1].g", {0.05, 0.1, 0.2, 0.3}}};
  sweep.observables = {Observable::parse_pair("b1:b2"), Observable::correlation("a1a2dag")};
  const std::string serial = to_csv(run_sweep(blue_red(), sweep, 1).to_table());
  CHECK(serial == to_csv(run_sweep(blue_red(), sweep, 4).to_table()));
  CHECK(serial == to_csv(run_sweep(blue_red(), sweep, 32).to_table()));

  sweep.evaluation = AtTimes{{0.0, 5.0, 10.0}};
  const auto timed = run_sweep(blue_red(), sweep, 3);
  CHECK(timed.has_time);
  CHECK(timed.rows.size() == 36);
  CHECK(to_csv(timed.to_table()) == to_csv(run_sweep(blue_red(), sweep, 1).to_table()));
}

TEST_CASE("maximum over time picks the largest sampled value") {
  SweepSpec sweep;
  sweep.axes = {{"cavity[1].g", {0.1}}};
  sweep.observables = {Observable::parse_pair("b1:b2")};
  sweep.evaluation = MaxOverTime{50.0, 1.0};
  const double best = run_sweep(blue_red(), sweep).rows[0].values->at(0);
  sweep.evaluation = AtTimes{uniform_grid(0.0, 50.0, 1.0)};
  double expected = 0.0;
  for (const auto& row : run_sweep(blue_red(), sweep).rows) expected = std::max(expected, row.values->at(0));
  CHECK(best == expected);
}

TEST_CASE("csv formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(-1.5e-20) == "-1.5000000000000001e-20");
  Table t;
  t.header = {"x", "y"};
  t.rows = {{1.0, std::string("unstable")}};
  CHECK(to_csv(t) == "x,y\n1,unstable\n");
}
