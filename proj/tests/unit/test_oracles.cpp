#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "condlight/conditional_stats.hpp"
#include "condlight/oracles.hpp"

using namespace condlight;
namespace orc = condlight::oracles;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double normal_cdf(double x, double variance) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0 * variance));
}

}  // namespace

TEST_CASE("quadrature agrees with the ideal recurrence") {
  for (double x0 : {0.0, 0.5, 1.0, 2.0, 3.0}) {
    const auto q = qn_ideal(30, x0);
    for (int n = 0; n <= 30; n += 3) {
      CHECK(std::abs(orc::qn_quadrature(n, AcceptanceWindow::threshold(x0), DetectorModel::ideal()) -
                     q[n]) <= 1e-9);
    }
  }
}

TEST_CASE("quadrature agrees with the imperfect-detector series") {
  for (double eta : {0.6, 0.8}) {
    for (double n_bar : {0.0, 0.4}) {
      const DetectorModel d(eta, n_bar);
      const auto q = qn_imperfect(20, 1.5, d);
      for (int n = 0; n <= 20; n += 4) {
        CHECK(std::abs(orc::qn_quadrature(n, AcceptanceWindow::threshold(1.5), d) - q[n]) <= 1e-8);
      }
    }
  }
}

TEST_CASE("interval windows integrate consistently") {
  const auto two_sided = AcceptanceWindow::intervals({{-kInf, -1.2}, {1.2, kInf}});
  const auto threshold = AcceptanceWindow::threshold(1.2);
  for (int n : {0, 3, 10}) {
    CHECK(orc::qn_quadrature(n, two_sided, DetectorModel::ideal()) ==
          doctest::Approx(orc::qn_quadrature(n, threshold, DetectorModel::ideal())).epsilon(1e-10));
    const DetectorModel d(0.7);
    CHECK(orc::qn_quadrature(n, two_sided, d) ==
          doctest::Approx(orc::qn_quadrature(n, threshold, d)).epsilon(1e-9));
  }
  // A window and its complement cover the line.
  const auto inner = AcceptanceWindow::intervals({{-1.2, 1.2}});
  CHECK(orc::qn_quadrature(5, inner, DetectorModel::ideal()) +
            orc::qn_quadrature(5, threshold, DetectorModel::ideal()) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(orc::qn_quadrature(-1, threshold, DetectorModel::ideal()), std::invalid_argument);
}

TEST_CASE("sampled idler quadratures follow the Gaussian marginal") {
  struct Case {
    double lambda, eta, n_bar;
  };
  for (const auto c : {Case{0.25, 1.0, 0.0}, Case{0.6, 0.7, 0.0}, Case{0.4, 0.8, 1.0}}) {
    constexpr std::uint64_t shots = 200000;
    auto xs = orc::sample_detected_quadratures(Squeezing::from_lambda(c.lambda),
                                               DetectorModel(c.eta, c.n_bar), shots, 42);
    std::sort(xs.begin(), xs.end());
    const double variance = c.eta * (1 + c.lambda) / (2 * (1 - c.lambda)) +
                            (1 - c.eta) * (1 + 2 * c.n_bar) / 2;
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double f = normal_cdf(xs[i], variance);
      d = std::max({d, f - static_cast<double>(i) / shots, static_cast<double>(i + 1) / shots - f});
    }
    // Kolmogorov-Smirnov critical value at the 0.1% level.
    CHECK(d < 1.95 / std::sqrt(static_cast<double>(shots)));
  }
}

TEST_CASE("simulation is reproducible and independent of worker count") {
  const auto s = Squeezing::from_lambda(0.3);
  const auto w = AcceptanceWindow::threshold(1.0);
  const DetectorModel d(0.8);
  const auto a = orc::monte_carlo_experiment(s, w, d, 100000, 9, 1);
  const auto b = orc::monte_carlo_experiment(s, w, d, 100000, 9, 4);
  const auto c = orc::monte_carlo_experiment(s, w, d, 100000, 10, 3);
  CHECK(a.counts == b.counts);
  CHECK(a.empirical_Q == b.empirical_Q);
  CHECK(a.counts != c.counts);
  CHECK(a.seed == 9);
  CHECK(a.shots == 100000);

  const auto xa = orc::sample_detected_quadratures(s, d, 50000, 5, 1);
  const auto xb = orc::sample_detected_quadratures(s, d, 50000, 5, 3);
  CHECK(xa == xb);
}

TEST_CASE("simulation agrees with the analytic pipeline") {
  struct Case {
    double lambda, x0, eta;
  };
  for (const auto c : {Case{0.25, 0.0, 1.0}, Case{0.25, 2.0, 1.0}, Case{0.4, 1.0, 0.7}}) {
    const auto s = Squeezing::from_lambda(c.lambda);
    const auto w = AcceptanceWindow::threshold(c.x0);
    const DetectorModel d(c.eta);
    const auto mc = orc::monte_carlo_experiment(s, w, d, 300000, 2024);
    const auto st = photon_distribution(s, w, d, 1e-12);
    CAPTURE(c.x0);
    REQUIRE(mc.empirical_Q.has_value());
    CHECK(std::abs(mc.empirical_C - st.acceptance_probability) <=
          4 * std::max(mc.standard_errors.acceptance_probability, 1e-15));
    CHECK(std::abs(mc.empirical_mean - st.mean_n) <= 4 * mc.standard_errors.mean);
    CHECK(std::abs(*mc.empirical_Q - *st.mandel_q) <= 4 * mc.standard_errors.mandel_q);
    for (std::size_t n = 0; n < std::min<std::size_t>(mc.empirical_p.size(), 5); ++n) {
      CHECK(std::abs(mc.empirical_p[n] - st.p[n]) <= 4 * mc.standard_errors.p[n] + 1e-12);
    }
    CHECK_FALSE(mc.warning.has_value());
  }
}

TEST_CASE("few accepted shots raise a warning") {
  const auto mc = orc::monte_carlo_experiment(Squeezing::from_lambda(0.1),
                                              AcceptanceWindow::threshold(6.0),
                                              DetectorModel::ideal(), 2000, 1);
  CHECK(mc.warning.has_value());
  CHECK_THROWS_AS(orc::monte_carlo_experiment(Squeezing::from_lambda(0.1),
                                              AcceptanceWindow::threshold(1.0),
                                              DetectorModel::ideal(), 0, 1),
                  std::invalid_argument);
}
