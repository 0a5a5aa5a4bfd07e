#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "condlight/special_functions.hpp"
#include "support/mp_oracles.hpp"

namespace sf = condlight::sf;
namespace ref = testing_oracles;

TEST_CASE("erf and erfc match the high-precision series on a dense grid") {
  double worst_erf = 0.0;
  double worst_erfc = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double x = -6.0 + 12.0 * i / 1000;
    const ref::mp e = ref::erf_series(ref::mp(x));
    const double erf_ref = static_cast<double>(e);
    const double erfc_ref = static_cast<double>(1 - e);
    worst_erf = std::max(worst_erf, std::abs(sf::erf(x) - erf_ref));
    worst_erfc = std::max(worst_erfc, std::abs(sf::erfc(x) - erfc_ref) / erfc_ref);
  }
  CHECK(worst_erf <= 1e-15);
  CHECK(worst_erfc <= 1e-13);
}

TEST_CASE("erfcx is exp(x^2) erfc(x) without overflow") {
  for (double x : {-3.0, -1.0, -0.1, 0.0, 0.3, 1.0, 2.5, 4.9, 5.0, 5.1, 6.0, 8.0}) {
    const ref::mp xm(x);
    const double expected = static_cast<double>(exp(xm * xm) * ref::erfc_series(xm));
    CHECK(sf::erfcx(x) == doctest::Approx(expected).epsilon(1e-13));
  }
  // Far tail: erfcx(x) ~ 1/(sqrt(pi) x) (1 - 1/(2x^2) + 3/(4x^4)).
  for (double x : {30.0, 1e3, 1e6}) {
    const double series = 1.0 / (sf::kSqrtPi * x) * (1.0 - 0.5 / (x * x) + 0.75 / (x * x * x * x));
    CHECK(sf::erfcx(x) == doctest::Approx(series).epsilon(1e-9));
  }
}

TEST_CASE("eigenfunctions agree with the explicit Hermite expansion") {
  for (double x : {0.0, 1.3, -2.7, 4.0}) {
    const auto table = sf::oscillator_eigenfunctions(x, 20);
    REQUIRE(table.n_max() == 20);
    for (int n = 0; n <= 20; ++n) {
      const double expected = static_cast<double>(ref::eigenfunction(n, ref::mp(x)));
      CHECK(table[n] == doctest::Approx(expected).epsilon(1e-13).scale(1e-3));
      CHECK(sf::oscillator_eigenfunction(n, x) == doctest::Approx(table[n]).epsilon(1e-15));
    }
  }
}

TEST_CASE("eigenfunctions are orthonormal") {
  // Trapezoid rule is spectrally accurate for these rapidly decaying integrands.
  constexpr double h = 0.01;
  constexpr int n_max = 40;
  std::vector<std::vector<double>> rows;
  for (double x = -20.0; x <= 20.0 + 1e-12; x += h) {
    rows.push_back(sf::oscillator_eigenfunctions(x, n_max).values);
  }
  double worst = 0.0;
  for (int m = 0; m <= n_max; m += 3) {
    for (int n = m; n <= n_max; n += 2) {
      double sum = 0.0;
      for (const auto& r : rows) sum += r[m] * r[n];
      worst = std::max(worst, std::abs(sum * h - (m == n ? 1.0 : 0.0)));
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("high orders stay finite, bounded and normalized") {
  constexpr int n_max = 500;
  constexpr double h = 0.005;
  double norm = 0.0;
  for (double x = -40.0; x <= 40.0; x += h) {
    const auto t = sf::oscillator_eigenfunctions(x, n_max);
    for (double v : t.values) {
      REQUIRE(std::isfinite(v));
      REQUIRE(std::abs(v) <= 0.7511255444649425);  // pi^(-1/4)
    }
    norm += t[n_max] * t[n_max] * h;
  }
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("fock quadrature density is the squared eigenfunction") {
  for (int n : {0, 1, 7, 30}) {
    for (double x : {-1.5, 0.2, 3.0}) {
      const double psi = sf::oscillator_eigenfunction(n, x);
      CHECK(sf::fock_quadrature_pdf(n, x) == doctest::Approx(psi * psi).epsilon(1e-14));
    }
  }
}

TEST_CASE("gaussian two-sided tail") {
  CHECK(sf::gaussian_tail_two_sided(0.5, 0.0) == 1.0);
  CHECK(sf::gaussian_tail_two_sided(0.5, 1.0) == doctest::Approx(std::erfc(1.0)).epsilon(1e-15));
  CHECK(sf::gaussian_tail_two_sided(2.0, 1.0) == doctest::Approx(std::erfc(0.5)).epsilon(1e-15));
  CHECK_THROWS_AS(sf::gaussian_tail_two_sided(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(sf::gaussian_tail_two_sided(1.0, -0.1), std::invalid_argument);
}

TEST_CASE("log factorials") {
  const auto table = sf::log_factorial_table(200);
  REQUIRE(table.size() == 201);
  CHECK(table[0] == 0.0);
  CHECK(table[1] == 0.0);
  double acc = 0.0;
  for (int n = 1; n <= 200; ++n) {
    acc += std::log(static_cast<double>(n));
    CHECK(table[n] == doctest::Approx(acc).epsilon(1e-13));
    CHECK(sf::log_factorial(n) == table[n]);
  }
  CHECK_THROWS_AS(sf::log_factorial(-1), std::invalid_argument);
}

TEST_CASE("invalid orders are rejected") {
  CHECK_THROWS_AS(sf::oscillator_eigenfunctions(0.0, -1), std::invalid_argument);
  CHECK_THROWS_AS(sf::oscillator_eigenfunction(-2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(sf::fock_quadrature_pdf(-1, 0.0), std::invalid_argument);
}
