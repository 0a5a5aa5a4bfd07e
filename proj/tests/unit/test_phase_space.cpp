#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "condlight/conditional_stats.hpp"
#include "condlight/phase_space.hpp"
#include "condlight/special_functions.hpp"
#include "support/mp_oracles.hpp"

using namespace condlight;
namespace ps = condlight::phase_space;
namespace ref = testing_oracles;

namespace {

std::vector<double> conditional(double lambda, double x0, double eta = 1.0) {
  return photon_distribution(Squeezing::from_lambda(lambda), AcceptanceWindow::threshold(x0),
                             DetectorModel(eta), 1e-14)
      .p;
}

// 2 pi int_0^R f(r) r dr by composite Simpson.
template <class F>
double radial_integral(F f, double r_max, int panels = 4000) {
  const double h = r_max / panels;
  double sum = 0.0;
  for (int i = 0; i <= panels; ++i) {
    const double r = i * h;
    const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    sum += w * f(r) * r;
  }
  return 2 * sf::kPi * sum * h / 3;
}

}  // namespace

TEST_CASE("vacuum") {
  const std::vector<double> vac{1.0};
  for (double r : {0.0, 0.5, 2.0}) {
    CHECK(ps::husimi(vac, r) == doctest::Approx(std::exp(-r * r) / sf::kPi).epsilon(1e-15));
    CHECK(ps::wigner(vac, r) == doctest::Approx(std::exp(-r * r) / sf::kPi).epsilon(1e-15));
  }
}

TEST_CASE("single photon has a negative Wigner origin") {
  const std::vector<double> one{0.0, 1.0};
  CHECK(ps::wigner(one, 0.0) == doctest::Approx(-1.0 / sf::kPi).epsilon(1e-15));
  CHECK(ps::husimi(one, 0.0) == 0.0);
  CHECK(ps::husimi(one, 1.0) == doctest::Approx(std::exp(-1.0) / sf::kPi).epsilon(1e-15));
}

TEST_CASE("thermal state closed forms") {
  for (double lambda : {0.1, 0.25, 0.8}) {
    const auto p = conditional(lambda, 0.0);
    const double k = (1 - lambda) / (1 + lambda);
    for (double r : {0.0, 0.7, 1.5, 3.0}) {
      CHECK(ps::wigner(p, r) ==
            doctest::Approx(k / sf::kPi * std::exp(-k * r * r)).epsilon(1e-11).scale(1e-14));
      CHECK(ps::husimi(p, r) ==
            doctest::Approx((1 - lambda) / sf::kPi * std::exp(-(1 - lambda) * r * r))
                .epsilon(1e-11)
                .scale(1e-14));
    }
  }
}

TEST_CASE("conditional-state profiles match the explicit Laguerre expansion") {
  for (double x0 : {0.0, 2.0, 3.0}) {
    const auto p = conditional(0.25, x0);
    for (double r : {0.0, 0.4, 1.1, 2.5, 4.0}) {
      CHECK(ps::wigner(p, r) == doctest::Approx(ref::wigner(p, r)).epsilon(1e-12).scale(1e-14));
      CHECK(ps::husimi(p, r) == doctest::Approx(ref::husimi(p, r)).epsilon(1e-12).scale(1e-14));
    }
  }
}

TEST_CASE("quasidistributions are normalized") {
  const auto p = conditional(0.5, 2.0, 0.8);
  CHECK(radial_integral([&](double r) { return ps::wigner(p, r); }, 12.0) ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(radial_integral([&](double r) { return ps::husimi(p, r); }, 12.0) ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("conditional Wigner function stays nonnegative") {
  for (double lambda : {0.1, 0.25, 0.5, 0.8}) {
    for (double x0 : {0.0, 1.0, 2.0, 3.0}) {
      const auto p = conditional(lambda, x0);
      double lowest = 1.0;
      for (int i = 0; i <= 600; ++i) lowest = std::min(lowest, ps::wigner(p, 6.0 * i / 600));
      CAPTURE(lambda);
      CAPTURE(x0);
      CHECK(lowest >= -1e-9);
    }
  }
}

TEST_CASE("Husimi dip at the origin for a high threshold") {
  const auto p = conditional(0.25, 2.0);
  const auto radii = ps::uniform_radii(4.0, 201);
  const auto profile = ps::husimi_profile(p, radii);
  REQUIRE(profile.values.size() == 201);
  const double peak = *std::max_element(profile.values.begin(), profile.values.end());
  CHECK(profile.values.front() < peak);

  const auto flat = ps::husimi_profile(conditional(0.25, 0.0), radii);
  CHECK(flat.values.front() == *std::max_element(flat.values.begin(), flat.values.end()));
}

TEST_CASE("input validation") {
  const std::vector<double> bad{0.5, 0.2};
  CHECK_THROWS_AS(ps::husimi(bad, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ps::wigner(std::vector<double>{1.0}, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(ps::wigner(std::vector<double>{1.2, -0.2}, 0.0), std::invalid_argument);
  const std::vector<double> radii{0.5, 1.0};
  CHECK_THROWS_AS(ps::wigner_profile(std::vector<double>{1.0}, radii), std::invalid_argument);
  CHECK_THROWS_AS(ps::uniform_radii(1.0, 1), std::invalid_argument);
}
