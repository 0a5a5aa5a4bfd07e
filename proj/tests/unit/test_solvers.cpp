#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "condlight/conditional_stats.hpp"
#include "condlight/solvers.hpp"

using namespace condlight;
namespace sv = condlight::solvers;

TEST_CASE("weak-squeezing optimal threshold") {
  const auto r = sv::x0_min();
  CHECK(r.feasible);
  CHECK(r.solution == doctest::Approx(0.4248).epsilon(1e-4 / 0.4248));
  CHECK(std::abs(r.residual) <= 1e-10);
  CHECK(r.bracket_lo <= r.solution);
  CHECK(r.solution <= r.bracket_hi);

  // Same point from the detector-aware route at unit efficiency.
  const auto general = sv::x0_min(DetectorModel::ideal());
  CHECK(general.solution == doctest::Approx(r.solution).epsilon(1e-10));
  // Q / lambda changes sign there.
  CHECK(weak_squeezing_q_slope(r.solution - 1e-3, DetectorModel::ideal()) > 0.0);
  CHECK(weak_squeezing_q_slope(r.solution + 1e-3, DetectorModel::ideal()) < 0.0);
}

TEST_CASE("threshold for a prescribed Q") {
  const auto s = Squeezing::from_lambda(0.25);
  const auto r = sv::solve_x0_for_q(s, -0.216, DetectorModel::ideal());
  REQUIRE(r.feasible);
  CHECK(r.solution == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(mandel_q(s, AcceptanceWindow::threshold(r.solution), DetectorModel::ideal()) ==
        doctest::Approx(-0.216).epsilon(1e-12));

  CHECK_FALSE(sv::solve_x0_for_q(s, 0.5, DetectorModel::ideal()).feasible);
  CHECK_FALSE(sv::solve_x0_for_q(Squeezing::from_lambda(0.3), 0.0, DetectorModel(0.45)).feasible);
  CHECK_THROWS_AS(sv::solve_x0_for_q(Squeezing::from_lambda(0.0), 0.0, DetectorModel::ideal()),
                  std::invalid_argument);
}

TEST_CASE("threshold solutions reproduce their targets") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 60; ++i) {
    const double lambda = 0.02 + 0.9 * u(rng);
    const double eta = 0.6 + 0.4 * u(rng);
    const DetectorModel d(eta);
    const auto s = Squeezing::from_lambda(lambda);
    const double q_hi = mandel_q(s, AcceptanceWindow::threshold(0.0), d);
    const double q_lo = mandel_q(s, AcceptanceWindow::threshold(6.0), d);
    const double target = q_lo + (q_hi - q_lo) * (0.05 + 0.9 * u(rng));
    const auto r = sv::solve_x0_for_q(s, target, d);
    REQUIRE(r.feasible);
    CHECK(r.solution >= r.bracket_lo);
    CHECK(r.solution <= r.bracket_hi);
    CHECK(mandel_q(s, AcceptanceWindow::threshold(r.solution), d) ==
          doctest::Approx(target).epsilon(1e-10).scale(1e-3));
  }
}

TEST_CASE("optimal squeezing for a negative Q target is interior and stable") {
  const auto a = sv::optimal_lambda(-0.05, DetectorModel::ideal());
  REQUIRE(a.feasible);
  CHECK_FALSE(a.boundary_supremum);
  REQUIRE(a.objective.has_value());

  const auto c_at = [](double lambda) {
    const auto s = Squeezing::from_lambda(lambda);
    const auto x = sv::solve_x0_for_q(s, -0.05, DetectorModel::ideal());
    return acceptance_probability(s, AcceptanceWindow::threshold(x.solution), DetectorModel::ideal());
  };
  CHECK(*a.objective >= c_at(a.solution - 0.01));
  CHECK(*a.objective >= c_at(a.solution + 0.01));
  CHECK(*a.objective == doctest::Approx(c_at(a.solution)).epsilon(1e-12));

  sv::OptimalLambdaOptions finer;
  finer.scan_points = 80;
  const auto b = sv::optimal_lambda(-0.05, DetectorModel::ideal(), finer);
  CHECK(b.solution == doctest::Approx(a.solution).epsilon(1e-4));
}

TEST_CASE("zero Q target peaks in the weak-squeezing limit") {
  const auto r = sv::optimal_lambda(0.0, DetectorModel::ideal());
  CHECK(r.feasible);
  CHECK(r.boundary_supremum);
  REQUIRE(r.objective.has_value());
  CHECK(*r.objective == doctest::Approx(0.548).epsilon(0.005 / 0.548));
}

TEST_CASE("lower efficiency lowers the best generation probability") {
  double prev = 1.0;
  for (double eta : {1.0, 0.9, 0.8, 0.7, 0.6}) {
    const auto r = sv::optimal_lambda(-0.05, DetectorModel(eta));
    REQUIRE(r.feasible);
    CHECK(*r.objective < prev);
    prev = *r.objective;
  }
  CHECK_FALSE(sv::optimal_lambda(-0.05, DetectorModel(0.45)).feasible);
}

TEST_CASE("efficiency threshold") {
  CHECK(sv::eta_threshold(0.0) == 0.5);
  CHECK(sv::eta_threshold(0.5) == doctest::Approx(2.0 / 3.0));
  CHECK(sv::eta_threshold(1.0) == doctest::Approx(0.75));
  CHECK_THROWS_AS(sv::eta_threshold(-1.0), std::invalid_argument);
  for (double n_bar : {0.0, 0.5, 1.0}) {
    const double th = sv::eta_threshold(n_bar);
    CHECK(sv::x0_min(DetectorModel(th + 0.02, n_bar)).feasible);
    CHECK_FALSE(sv::x0_min(DetectorModel(th - 0.02, n_bar)).feasible);
  }
}
