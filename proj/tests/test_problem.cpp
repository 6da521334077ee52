#include <doctest.h>

#include <cmath>
#include <memory>

#include "efp/errors.hpp"
#include "efp/parallel.hpp"
#include "efp/problem.hpp"
#include "efp/rng.hpp"

using namespace efp;

namespace {
Problem two_squared(double y0, double y1) {
  return Problem({ScalarLoss::squared(y0), ScalarLoss::squared(y1)},
                 std::make_shared<LinearFeatures>(std::vector<double>{1.0, 1.0}, 1),
                 0.1, 0.1);
}
}  // namespace

TEST_CASE("f0_value at tracked averages") {
  const Problem p1 = Problem({ScalarLoss::squared(1.0)},
                             LinearFeatures::first_coordinate(1), 0.1, 0.1);
  CHECK(f0_value(p1, std::vector<double>{1.0}) == doctest::Approx(0.0));

  const Problem p2 = two_squared(0.0, 2.0);
  CHECK(f0_value(p2, std::vector<double>{0.0, 2.0}) == doctest::Approx(0.0));
  CHECK(f0_value(p2, std::vector<double>{1.0, 1.0}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(f0_value(p2, std::vector<double>{1.0}), ConfigError);
}

TEST_CASE("f0_value propagates domain errors") {
  const Problem p = Problem({ScalarLoss::neg_log()},
                            LinearFeatures::first_coordinate(1), 0.1, 0.1);
  CHECK_THROWS_AS(f0_value(p, std::vector<double>{0.0}), DomainError);
}

TEST_CASE("predictor value over particles") {
  std::vector<double> x(3, 0.0);
  RngStream rng(41);
  for (double& v : x) v = rng.normal();
  NeuronFeatures neuron(x, 3);
  Ensemble zero(1, 3);
  CHECK(predictor_value(zero, neuron, 0) == doctest::Approx(0.0));

  LinearFeatures ident({1.0}, 1);
  Ensemble two(2, 1);
  two.particle(0)[0] = 1.0;
  two.particle(1)[0] = 3.0;
  CHECK(predictor_value(two, ident, 0) == doctest::Approx(2.0));
}

TEST_CASE("predictor matches the brute-force summation oracle") {
  RngStream rng(42);
  std::vector<double> x(4);
  for (double& v : x) v = rng.normal();
  NeuronFeatures neuron(x, 4);
  const Ensemble ens = Ensemble::gaussian(100, 4, 1.0, 7, 0);

  double brute = 0.0;
  for (std::size_t r = 0; r < ens.size(); ++r)
    brute += neuron.value_one(0, ens.particle(r));
  brute /= static_cast<double>(ens.size());

  CHECK(predictor_value(ens, neuron, 0) == brute);
}

TEST_CASE("empirical averages are thread-count invariant") {
  RngStream rng(43);
  std::vector<double> inputs(10 * 2);
  for (double& v : inputs) v = rng.normal();
  auto fam = std::make_shared<NeuronFeatures>(inputs, 2);
  const Ensemble ens = Ensemble::gaussian(333, 2, 1.0, 9, 0);

  const std::size_t saved = max_threads();
  set_max_threads(1);
  const std::vector<double> serial = empirical_averages(ens, *fam);
  set_max_threads(4);
  const std::vector<double> parallel = empirical_averages(ens, *fam);
  set_max_threads(saved);

  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i)
    CHECK(serial[i] == parallel[i]);
}

TEST_CASE("problem construction validates invariants") {
  auto feat = LinearFeatures::first_coordinate(1);
  CHECK_THROWS_AS(Problem({}, feat, 0.1, 0.1), ConfigError);
  CHECK_THROWS_AS(Problem({ScalarLoss::squared(0.0), ScalarLoss::squared(1.0)},
                          feat, 0.1, 0.1),
                  ConfigError);
  CHECK_THROWS_AS(Problem({ScalarLoss::squared(0.0)}, feat, 0.0, 0.1), ConfigError);
  CHECK_THROWS_AS(Problem({ScalarLoss::squared(0.0)}, feat, 0.1, -1.0), ConfigError);
  CHECK_THROWS_AS(Problem({ScalarLoss::squared(0.0)}, nullptr, 0.1, 0.1), ConfigError);
}

TEST_CASE("neg-log coefficients clamp tiny averages") {
  const Problem p = Problem({ScalarLoss::neg_log()},
                            LinearFeatures::first_coordinate(1), 0.1, 0.1);
  const std::vector<double> g = p.coeffs_from_averages(std::vector<double>{0.0});
  CHECK(g[0] == doctest::Approx(-1e12));
  const std::vector<double> g2 = p.coeffs_from_averages(std::vector<double>{0.5});
  CHECK(g2[0] == doctest::Approx(-2.0));
}

TEST_CASE("ensemble particle accounting") {
  Ensemble::reset_peak();
  const long long before = Ensemble::live_particles();
  {
    Ensemble a(10, 2);
    CHECK(Ensemble::live_particles() == before + 10);
    Ensemble b = a;  // copy adds
    CHECK(Ensemble::live_particles() == before + 20);
    Ensemble c = std::move(a);  // move transfers
    CHECK(Ensemble::live_particles() == before + 20);
    (void)b;
    (void)c;
  }
  CHECK(Ensemble::live_particles() == before);
}
