#include <doctest.h>

#include <cmath>

#include "efp/errors.hpp"
#include "efp/loss.hpp"
#include "efp/rng.hpp"
#include "oracles.hpp"

using namespace efp;

TEST_CASE("squared loss values and derivatives") {
  const ScalarLoss l = ScalarLoss::squared(1.0);
  CHECK(l.value(3.0) == doctest::Approx(2.0));
  CHECK(l.deriv(3.0) == doctest::Approx(2.0));
  CHECK(l.second_deriv(3.0) == doctest::Approx(1.0));

  const ScalarLoss z = ScalarLoss::squared(0.0);
  CHECK(z.value(0.0) == 0.0);
  CHECK(z.deriv(0.0) == 0.0);
  CHECK(z.second_deriv(0.0) == 1.0);
}

TEST_CASE("logistic loss at zero") {
  const ScalarLoss l = ScalarLoss::logistic(1.0);
  CHECK(l.value(0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(l.deriv(0.0) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(l.second_deriv(0.0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK_THROWS_AS(ScalarLoss::logistic(0.5), ConfigError);
}

TEST_CASE("neg-log loss domain") {
  const ScalarLoss l = ScalarLoss::neg_log();
  CHECK(l.value(1.0) == doctest::Approx(0.0));
  CHECK(l.deriv(2.0) == doctest::Approx(-0.5));
  CHECK(l.second_deriv(2.0) == doctest::Approx(0.25));
  CHECK_THROWS_AS(l.value(0.0), DomainError);
  CHECK_THROWS_AS(l.value(-1.0), DomainError);
  CHECK_THROWS_AS(l.deriv(0.0), DomainError);
}

TEST_CASE("conjugate closed forms and domain errors") {
  CHECK(ScalarLoss::squared(1.0).conjugate(2.0) == doctest::Approx(4.0));
  CHECK(ScalarLoss::squared(0.0).conjugate(0.0) == doctest::Approx(0.0));
  CHECK(ScalarLoss::neg_log().conjugate(-1.0) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(ScalarLoss::neg_log().conjugate(0.0), DomainError);
  CHECK_THROWS_AS(ScalarLoss::neg_log().conjugate(1.0), DomainError);
  CHECK_THROWS_AS(ScalarLoss::logistic(1.0).conjugate(0.5), DomainError);
  CHECK_THROWS_AS(ScalarLoss::logistic(1.0).conjugate(-1.5), DomainError);
  // Endpoints of the logistic conjugate domain give the limit value 0.
  CHECK(ScalarLoss::logistic(1.0).conjugate(0.0) == doctest::Approx(0.0));
  CHECK(ScalarLoss::logistic(1.0).conjugate(-1.0) == doctest::Approx(0.0));
  CHECK(ScalarLoss::logistic(-1.0).conjugate(1.0) == doctest::Approx(0.0));
}

TEST_CASE("conjugates match the grid sup oracle") {
  RngStream rng(17);
  for (int k = 0; k < 100; ++k) {
    const double y = rng.uniform() < 0.5 ? -1.0 : 1.0;

    const ScalarLoss sq = ScalarLoss::squared(y);
    const double g_sq = 4.0 * (rng.uniform() - 0.5);
    const double oracle_sq = test::grid_sup_conjugate(
        [&](double z) { return sq.value(z); }, g_sq, -10.0, 10.0, 1e-4);
    CHECK(std::abs(sq.conjugate(g_sq) - oracle_sq) <= 1e-6);

    const ScalarLoss lg = ScalarLoss::logistic(y);
    const double g_lg = -y * (0.05 + 0.9 * rng.uniform());
    const double oracle_lg = test::grid_sup_conjugate(
        [&](double z) { return lg.value(z); }, g_lg, -10.0, 10.0, 1e-4);
    CHECK(std::abs(lg.conjugate(g_lg) - oracle_lg) <= 1e-6);

    const ScalarLoss nl = ScalarLoss::neg_log();
    const double g_nl = -(0.1 + 4.9 * rng.uniform());
    const double oracle_nl = test::grid_sup_conjugate(
        [&](double z) { return nl.value(z); }, g_nl, 1e-4, 10.0, 1e-4);
    CHECK(std::abs(nl.conjugate(g_nl) - oracle_nl) <= 1e-6);
  }
}

TEST_CASE("midpoint convexity over random pairs") {
  RngStream rng(18);
  for (int k = 0; k < 1000; ++k) {
    const double y = rng.uniform() < 0.5 ? -1.0 : 1.0;
    const double z1 = 6.0 * (rng.uniform() - 0.5);
    const double z2 = 6.0 * (rng.uniform() - 0.5);
    const double mid = 0.5 * (z1 + z2);

    const ScalarLoss sq = ScalarLoss::squared(y);
    CHECK(sq.value(mid) <= 0.5 * (sq.value(z1) + sq.value(z2)) + 1e-12);
    const ScalarLoss lg = ScalarLoss::logistic(y);
    CHECK(lg.value(mid) <= 0.5 * (lg.value(z1) + lg.value(z2)) + 1e-12);

    const double p1 = 1e-3 + 5.0 * rng.uniform();
    const double p2 = 1e-3 + 5.0 * rng.uniform();
    const ScalarLoss nl = ScalarLoss::neg_log();
    CHECK(nl.value(0.5 * (p1 + p2)) <= 0.5 * (nl.value(p1) + nl.value(p2)) + 1e-12);
  }
}

TEST_CASE("Fenchel-Young equality at l'(z)") {
  RngStream rng(19);
  for (int k = 0; k < 1000; ++k) {
    const double y = rng.uniform() < 0.5 ? -1.0 : 1.0;
    const double z = 6.0 * (rng.uniform() - 0.5);

    for (const ScalarLoss& l : {ScalarLoss::squared(y), ScalarLoss::logistic(y)}) {
      const double g = l.deriv(z);
      CHECK(std::abs(l.value(z) + l.conjugate(g) - z * g) <= 1e-10);
    }
    const double zp = 1e-2 + 5.0 * rng.uniform();
    const ScalarLoss nl = ScalarLoss::neg_log();
    const double g = nl.deriv(zp);
    CHECK(std::abs(nl.value(zp) + nl.conjugate(g) - zp * g) <= 1e-10);
  }
}

TEST_CASE("second derivative is nonnegative on the domain") {
  RngStream rng(20);
  for (int k = 0; k < 200; ++k) {
    const double z = 8.0 * (rng.uniform() - 0.5);
    CHECK(ScalarLoss::squared(0.3).second_deriv(z) >= 0.0);
    CHECK(ScalarLoss::logistic(-1.0).second_deriv(z) >= 0.0);
    CHECK(ScalarLoss::neg_log().second_deriv(std::abs(z) + 1e-3) >= 0.0);
  }
}
