#include "condlight/conditional_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "condlight/special_functions.hpp"

namespace condlight {

namespace {

void require_threshold(const AcceptanceWindow& w, const char* who) {
  if (!w.is_threshold()) {
    throw std::invalid_argument(std::string(who) +
                                ": interval windows are only supported by the quadrature oracle");
  }
}

void require_x0(double x0, const char* who) {
  if (!(x0 >= 0.0) || !std::isfinite(x0)) {
    throw std::invalid_argument(std::string(who) + ": x0 must be finite and >= 0");
  }
}

// Argument z of C = erfc(z) for a vacuum auxiliary mode.
double acceptance_argument(double lambda, double x0, double eta) {
  return x0 * std::sqrt((1.0 - lambda) / (1.0 + (2.0 * eta - 1.0) * lambda));
}

// exp(-z^2) / erfc(z) without underflow.
double gaussian_to_tail_ratio(double z) { return 1.0 / sf::erfcx(z); }

double clamp_probability(double v) { return std::clamp(v, 0.0, 1.0); }

// sqrt(2/n) psi_{n-1}(x0) psi_n(x0), the ideal-detector increment q_n - q_{n-1}.
std::vector<double> ideal_increments(int n_max, double x0) {
  std::vector<double> delta(static_cast<std::size_t>(n_max) + 1, 0.0);
  if (n_max == 0) return delta;
  const auto psi = sf::oscillator_eigenfunctions(x0, n_max);
  for (int n = 1; n <= n_max; ++n) {
    delta[n] = std::sqrt(2.0 / n) * psi[n - 1] * psi[n];
  }
  return delta;
}

double generating_function(double lambda, const AcceptanceWindow& w, const DetectorModel& d) {
  return acceptance_probability(Squeezing::from_lambda(lambda), w, d) / (1.0 - lambda);
}

}  // namespace

// ---------------------------------------------------------------------------
// Domain types

Squeezing Squeezing::from_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0)) {
    throw std::invalid_argument("Squeezing: lambda must lie in [0, 1), got " +
                                std::to_string(lambda));
  }
  return Squeezing(lambda, std::nullopt);
}

Squeezing Squeezing::from_r(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument("Squeezing: r must be finite and >= 0");
  }
  const double t = std::tanh(r);
  const double lambda = t * t;
  if (!(lambda < 1.0)) {
    throw std::invalid_argument("Squeezing: r too large, tanh^2 r rounds to 1");
  }
  return Squeezing(lambda, r);
}

AcceptanceWindow AcceptanceWindow::threshold(double x0) {
  require_x0(x0, "AcceptanceWindow");
  AcceptanceWindow w;
  w.x0_ = x0;
  return w;
}

AcceptanceWindow AcceptanceWindow::intervals(std::vector<Interval> intervals) {
  if (intervals.empty()) {
    throw std::invalid_argument("AcceptanceWindow: at least one interval is required");
  }
  for (const auto& iv : intervals) {
    if (std::isnan(iv.lo) || std::isnan(iv.hi) || !(iv.lo < iv.hi)) {
      throw std::invalid_argument("AcceptanceWindow: each interval needs lo < hi");
    }
  }
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (std::size_t i = 1; i < intervals.size(); ++i) {
    if (intervals[i].lo < intervals[i - 1].hi) {
      throw std::invalid_argument("AcceptanceWindow: intervals must be disjoint");
    }
  }
  AcceptanceWindow w;
  w.intervals_ = std::move(intervals);
  return w;
}

bool AcceptanceWindow::contains(double x) const {
  if (is_threshold()) return std::abs(x) > x0_;
  return std::any_of(intervals_.begin(), intervals_.end(),
                     [x](const Interval& iv) { return iv.lo < x && x < iv.hi; });
}

DetectorModel::DetectorModel(double eta, double n_bar) : eta_(eta), n_bar_(n_bar) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("DetectorModel: eta must lie in (0, 1], got " +
                                std::to_string(eta));
  }
  if (!(n_bar >= 0.0) || !std::isfinite(n_bar)) {
    throw std::invalid_argument("DetectorModel: n_bar must be finite and >= 0");
  }
}

VacuumEquivalent vacuum_equivalent(double x0, const DetectorModel& detector) {
  const double scale = 1.0 + 2.0 * detector.n_bar() * (1.0 - detector.eta());
  if (scale == 1.0) return {x0, detector.eta()};
  return {x0 / std::sqrt(scale), detector.eta() / scale};
}

// ---------------------------------------------------------------------------
// Acceptance probability and q_n

double idler_quadrature_variance(const Squeezing& s, const DetectorModel& detector) {
  const double lambda = s.lambda();
  const double eta = detector.eta();
  const double nb = detector.n_bar();
  return (1.0 + 2.0 * nb * (1.0 - eta) + lambda * (2.0 * eta * (1.0 + nb) - 1.0 - 2.0 * nb)) /
         (2.0 * (1.0 - lambda));
}

double acceptance_probability(const Squeezing& s, const AcceptanceWindow& w) {
  require_threshold(w, "acceptance_probability");
  const double lambda = s.lambda();
  return sf::erfc(w.x0() * std::sqrt((1.0 - lambda) / (1.0 + lambda)));
}

double acceptance_probability(const Squeezing& s, const AcceptanceWindow& w,
                              const DetectorModel& detector) {
  require_threshold(w, "acceptance_probability");
  if (detector.n_bar() == 0.0) {
    return sf::erfc(acceptance_argument(s.lambda(), w.x0(), detector.eta()));
  }
  return sf::gaussian_tail_two_sided(idler_quadrature_variance(s, detector), w.x0());
}

std::vector<double> qn_ideal(int n_max, double x0) {
  if (n_max < 0) throw std::invalid_argument("qn_ideal: n_max must be >= 0");
  require_x0(x0, "qn_ideal");
  const auto delta = ideal_increments(n_max, x0);
  std::vector<double> q(delta.size());
  q[0] = sf::erfc(x0);
  for (std::size_t n = 1; n < q.size(); ++n) {
    q[n] = clamp_probability(q[n - 1] + delta[n]);
  }
  return q;
}

std::vector<double> qn_imperfect(int n_max, double x0, const DetectorModel& detector) {
  if (n_max < 0) throw std::invalid_argument("qn_imperfect: n_max must be >= 0");
  require_x0(x0, "qn_imperfect");
  const auto eff = vacuum_equivalent(x0, detector);
  if (eff.eta == 1.0) return qn_ideal(n_max, eff.x0);

  // Loss turns |n> into a binomial mixture of |m>, so the increment is the
  // ideal increment delta_m weighted by binom(n-1, m-1) eta^m (1-eta)^(n-m).
  const auto delta = ideal_increments(n_max, eff.x0);
  const auto log_fact = sf::log_factorial_table(n_max);
  const double log_eta = std::log(eff.eta);
  const double log_loss = std::log1p(-eff.eta);
  constexpr double kNegligible = -745.0;

  std::vector<double> q(delta.size());
  q[0] = sf::erfc(eff.x0);
  for (int n = 1; n <= n_max; ++n) {
    double increment = 0.0;
    for (int m = 1; m <= n; ++m) {
      const double log_w = log_fact[n - 1] - log_fact[m - 1] - log_fact[n - m] + m * log_eta +
                           (n - m) * log_loss;
      if (log_w < kNegligible) continue;
      increment += std::exp(log_w) * delta[m];
    }
    q[n] = clamp_probability(q[n - 1] + increment);
  }
  return q;
}

// ---------------------------------------------------------------------------
// Closed-form moments

namespace closed_form {

double mean_ideal(double lambda, double x0) {
  if (lambda == 0.0) return 0.0;
  const double z = x0 * std::sqrt((1.0 - lambda) / (1.0 + lambda));
  const double ratio = gaussian_to_tail_ratio(z);
  return lambda / (1.0 - lambda) +
         2.0 * lambda * x0 * ratio /
             (sf::kSqrtPi * std::sqrt((1.0 - lambda) * std::pow(1.0 + lambda, 3)));
}

double second_factorial_ideal(double lambda, double x0) {
  if (lambda == 0.0) return 0.0;
  const double one_m = 1.0 - lambda;
  const double one_p = 1.0 + lambda;
  const double z = x0 * std::sqrt(one_m / one_p);
  const double ratio = gaussian_to_tail_ratio(z);
  const double bracket = (1.0 + 4.0 * lambda) / (1.0 - lambda * lambda) +
                         2.0 * x0 * x0 / (one_p * one_p);
  return 2.0 * lambda * lambda / (one_m * one_m) +
         std::sqrt(one_m / one_p) * 2.0 * x0 * lambda * lambda /
             (sf::kSqrtPi * (1.0 - lambda * lambda)) * bracket * ratio;
}

double mean_lossy(double lambda, double x0, double eta) {
  if (lambda == 0.0) return 0.0;
  const double one_m = 1.0 - lambda;
  const double denom = 1.0 + (2.0 * eta - 1.0) * lambda;
  const double ratio = gaussian_to_tail_ratio(acceptance_argument(lambda, x0, eta));
  return lambda / one_m +
         2.0 * eta * lambda * x0 * ratio / (sf::kSqrtPi * std::sqrt(one_m * std::pow(denom, 3)));
}

double second_factorial_lossy(double lambda, double x0, double eta) {
  if (lambda == 0.0) return 0.0;
  const double one_m = 1.0 - lambda;
  const double denom = 1.0 + (2.0 * eta - 1.0) * lambda;
  const double ratio = gaussian_to_tail_ratio(acceptance_argument(lambda, x0, eta));
  const double prefactor = 2.0 * eta * x0 * lambda * lambda * ratio /
                           (sf::kSqrtPi * std::sqrt(one_m * std::pow(denom, 3)));
  const double bracket = (4.0 - 3.0 * eta + 4.0 * (2.0 * eta - 1.0) * lambda) / (one_m * denom) +
                         2.0 * eta * x0 * x0 / (denom * denom);
  return 2.0 * lambda * lambda / (one_m * one_m) + prefactor * bracket;
}

}  // namespace closed_form

double mean_photon(const Squeezing& s, const AcceptanceWindow& w, const DetectorModel& detector) {
  require_threshold(w, "mean_photon");
  if (detector.is_ideal()) return closed_form::mean_ideal(s.lambda(), w.x0());
  const auto eff = vacuum_equivalent(w.x0(), detector);
  return closed_form::mean_lossy(s.lambda(), eff.x0, eff.eta);
}

double second_factorial_moment(const Squeezing& s, const AcceptanceWindow& w,
                               const DetectorModel& detector) {
  require_threshold(w, "second_factorial_moment");
  if (detector.is_ideal()) return closed_form::second_factorial_ideal(s.lambda(), w.x0());
  const auto eff = vacuum_equivalent(w.x0(), detector);
  return closed_form::second_factorial_lossy(s.lambda(), eff.x0, eff.eta);
}

double mandel_q(const Squeezing& s, const AcceptanceWindow& w, const DetectorModel& detector) {
  if (s.lambda() == 0.0) {
    throw std::domain_error("mandel_q: undefined at lambda = 0 (vacuum signal has zero mean)");
  }
  const double mean = mean_photon(s, w, detector);
  const double f2 = second_factorial_moment(s, w, detector);
  return (f2 - mean * mean) / mean;
}

double weak_squeezing_q_slope(double x0, const DetectorModel& detector) {
  require_x0(x0, "weak_squeezing_q_slope");
  const auto eff = vacuum_equivalent(x0, detector);
  const double eta = eff.eta;
  const double g = 2.0 * eff.x0 * gaussian_to_tail_ratio(eff.x0) / sf::kSqrtPi;
  // <n> ~ lambda a and <:n^2:> ~ lambda^2 b as lambda -> 0.
  const double a = 1.0 + eta * g;
  const double b = 2.0 + eta * g * (4.0 - 3.0 * eta + 2.0 * eta * eff.x0 * eff.x0);
  return (b - a * a) / a;
}

double moment_via_generating(int k, const Squeezing& s, const AcceptanceWindow& w,
                             const DetectorModel& detector, MomentOrdering ordering) {
  if (k < 0 || k > 2) {
    throw std::invalid_argument("moment_via_generating: k must be 0, 1 or 2");
  }
  require_threshold(w, "moment_via_generating");
  if (k == 0) return 1.0;

  constexpr double h = 1e-4;
  const double lambda = s.lambda();
  if (lambda - h < 0.0 || lambda + h >= 1.0) {
    throw std::domain_error("moment_via_generating: lambda too close to 0 or 1 for the stencil");
  }
  const auto g = [&](double l) { return generating_function(l, w, detector); };
  const double g0 = g(lambda);

  const auto d1 = [&](double step) { return (g(lambda + step) - g(lambda - step)) / (2.0 * step); };
  const auto d2 = [&](double step) {
    return (g(lambda + step) - 2.0 * g0 + g(lambda - step)) / (step * step);
  };
  const double g1 = (4.0 * d1(0.5 * h) - d1(h)) / 3.0;

  if (k == 1) return lambda * g1 / g0;

  const double g2 = (4.0 * d2(0.5 * h) - d2(h)) / 3.0;
  if (ordering == MomentOrdering::normal) return lambda * lambda * g2 / g0;
  return (lambda * g1 + lambda * lambda * g2) / g0;
}

// ---------------------------------------------------------------------------
// Photon-number distribution

double ConditionalStatistics::distribution_mean() const {
  double sum = 0.0;
  for (std::size_t n = 1; n < p.size(); ++n) sum += static_cast<double>(n) * p[n];
  return sum;
}

double ConditionalStatistics::distribution_second_factorial() const {
  double sum = 0.0;
  for (std::size_t n = 2; n < p.size(); ++n) {
    sum += static_cast<double>(n) * static_cast<double>(n - 1) * p[n];
  }
  return sum;
}

std::optional<double> ConditionalStatistics::distribution_mandel_q() const {
  const double mean = distribution_mean();
  if (mean == 0.0) return std::nullopt;
  return (distribution_second_factorial() - mean * mean) / mean;
}

ConditionalStatistics photon_distribution(const Squeezing& s, const AcceptanceWindow& w,
                                          const DetectorModel& detector, double tol,
                                          int fock_cap) {
  require_threshold(w, "photon_distribution");
  if (!(tol > 0.0 && tol <= 1e-3)) {
    throw std::invalid_argument("photon_distribution: tol must lie in (0, 1e-3]");
  }
  const double lambda = s.lambda();
  const auto eff = vacuum_equivalent(w.x0(), detector);

  ConditionalStatistics stats;
  if (lambda == 0.0) {
    stats.p = {1.0};
    stats.q = qn_imperfect(0, w.x0(), detector);
    stats.acceptance_probability = stats.q[0];
    return stats;
  }

  const double z = acceptance_argument(lambda, eff.x0, eff.eta);
  const double log_c = std::log(sf::erfcx(z)) - z * z;
  const double log_lambda = std::log(lambda);
  const double needed = std::ceil((std::log(tol) + log_c) / log_lambda) - 1.0;
  if (!std::isfinite(needed) || needed > static_cast<double>(fock_cap)) {
    throw NonConvergenceError("photon_distribution: truncation needs more than " +
                              std::to_string(fock_cap) + " Fock states");
  }
  const int n_max = std::max(0, static_cast<int>(needed));

  stats.q = qn_imperfect(n_max, w.x0(), detector);
  stats.p.resize(stats.q.size());
  const double log_one_m = std::log1p(-lambda);
  for (int n = 0; n <= n_max; ++n) {
    stats.p[n] = std::exp(log_one_m + n * log_lambda - log_c) * stats.q[n];
  }
  stats.acceptance_probability = acceptance_probability(s, w, detector);
  stats.truncation_error_bound = std::exp((n_max + 1) * log_lambda - log_c);
  stats.mean_n = mean_photon(s, w, detector);
  stats.second_factorial = second_factorial_moment(s, w, detector);
  stats.mandel_q = (stats.second_factorial - stats.mean_n * stats.mean_n) / stats.mean_n;
  return stats;
}

}  // namespace condlight
