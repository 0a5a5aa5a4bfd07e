#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "condlight/conditional_stats.hpp"
#include "condlight/errors.hpp"

/// Verification routes that share no code path with the recurrences and
/// closed forms: direct quadrature of the defining integrals, and a
/// shot-by-shot simulation of the heralding experiment.
namespace condlight::oracles {

class QuadratureError : public NonConvergenceError {
 public:
  using NonConvergenceError::NonConvergenceError;
};

/// q_n = P(detected quadrature in window | idler in |n>).
///
/// Ideal detector: integral of psi_n(x)^2 over the window. Imperfect
/// detector: the detected quadrature is sqrt(eta) x' + noise with noise
/// variance (1 - eta)(1 + 2 n_bar)/2, so
///   q_n = integral psi_n(x')^2 P(sqrt(eta) x' + noise in window) dx',
/// where the inner Gaussian window probability is exact. Integration runs
/// over +-max(20, x0 + 15) in unit panels with adaptive Gauss-Kronrod. Throws
/// QuadratureError when the error estimate exceeds the target (1e-10 ideal,
/// 1e-8 smeared).
double qn_quadrature(int n, const AcceptanceWindow& w, const DetectorModel& detector);

struct StandardErrors {
  double acceptance_probability = 0.0;
  double mean = 0.0;
  double mandel_q = 0.0;
  /// Binomial standard error of each empirical_p entry.
  std::vector<double> p;
};

struct MonteCarloResult {
  std::uint64_t shots = 0;
  std::uint64_t accepted = 0;
  std::uint64_t seed = 0;
  /// Histogram of the signal photon number over accepted shots.
  std::vector<std::uint64_t> counts;
  std::vector<double> empirical_p;
  double empirical_C = 0.0;
  double empirical_mean = 0.0;
  /// Empty when fewer than two photons were ever accepted.
  std::optional<double> empirical_Q;
  StandardErrors standard_errors;
  /// Set when fewer than 100 shots were accepted.
  std::optional<std::string> warning;
};

/// Per shot: draw the pair photon number n from (1 - lambda) lambda^n, draw
/// the ideal idler quadrature x' from psi_n^2 (rejection sampling against a
/// N(0, n + 1) envelope), mix in the auxiliary mode,
///   x = sqrt(eta) x' + sqrt(1 - eta) x_aux,  Var(x_aux) = (1 + 2 n_bar)/2,
/// and record n when x falls inside the window.
///
/// Shots are processed in fixed-size chunks, each with its own engine seeded
/// from (seed, chunk index). Any worker count gives bit-identical results;
/// workers = 0 means hardware concurrency.
MonteCarloResult monte_carlo_experiment(const Squeezing& s, const AcceptanceWindow& w,
                                        const DetectorModel& detector, std::uint64_t shots,
                                        std::uint64_t seed, unsigned workers = 0);

/// Detected idler quadratures of every shot, before acceptance, using the
/// same per-chunk streams as monte_carlo_experiment.
std::vector<double> sample_detected_quadratures(const Squeezing& s, const DetectorModel& detector,
                                                std::uint64_t shots, std::uint64_t seed,
                                                unsigned workers = 0);

}  // namespace condlight::oracles
