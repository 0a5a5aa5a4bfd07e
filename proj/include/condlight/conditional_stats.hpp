#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "condlight/errors.hpp"

/// Photon statistics of the signal mode of a two-mode squeezed vacuum,
/// heralded by a phase-randomized homodyne measurement on the idler that
/// accepts |x| > x0.
///
/// Conventions: quadratures are x = (a + a^dagger)/sqrt(2), so the vacuum
/// variance is 1/2. The source is parameterized by lambda = tanh^2 r. All
/// statistics follow from the acceptance probability C(lambda), which is the
/// generating function (1 - lambda) sum_n lambda^n q_n of the per-Fock-state
/// acceptance probabilities q_n.
namespace condlight {

/// Two-mode squeezing strength, lambda = tanh^2 r in [0, 1).
class Squeezing {
 public:
  static Squeezing from_lambda(double lambda);
  static Squeezing from_r(double r);

  double lambda() const { return lambda_; }
  std::optional<double> r() const { return r_; }

 private:
  Squeezing(double lambda, std::optional<double> r) : lambda_(lambda), r_(r) {}

  double lambda_;
  std::optional<double> r_;
};

/// Open interval (lo, hi); either end may be infinite.
struct Interval {
  double lo;
  double hi;
};

/// Region of accepted idler quadratures.
///
/// The analytic path only handles the threshold form |x| > x0. The interval
/// form exists so that the quadrature oracle can integrate arbitrary windows.
class AcceptanceWindow {
 public:
  static AcceptanceWindow threshold(double x0);
  /// Intervals must be disjoint with lo < hi; they are stored sorted.
  static AcceptanceWindow intervals(std::vector<Interval> intervals);

  bool is_threshold() const { return intervals_.empty(); }
  double x0() const { return x0_; }
  const std::vector<Interval>& general_intervals() const { return intervals_; }

  bool contains(double x) const;

 private:
  double x0_ = 0.0;
  std::vector<Interval> intervals_;
};

/// Homodyne detector of efficiency eta whose unused port carries a thermal
/// auxiliary mode with n_bar mean photons.
class DetectorModel {
 public:
  DetectorModel(double eta, double n_bar = 0.0);
  static DetectorModel ideal() { return DetectorModel(1.0, 0.0); }

  double eta() const { return eta_; }
  double n_bar() const { return n_bar_; }
  bool is_ideal() const { return eta_ == 1.0 && n_bar_ == 0.0; }

 private:
  double eta_;
  double n_bar_;
};

/// A thermal auxiliary mode is equivalent to a vacuum auxiliary mode with a
/// rescaled efficiency and threshold:
///   s = 1 + 2 n_bar (1 - eta),  eta' = eta / s,  x0' = x0 / sqrt(s).
/// Both setups share the same generating function C(lambda), so every
/// statistic agrees.
struct VacuumEquivalent {
  double x0;
  double eta;
};
VacuumEquivalent vacuum_equivalent(double x0, const DetectorModel& detector);

/// Variance of the detected idler quadrature (same for every phase).
double idler_quadrature_variance(const Squeezing& s, const DetectorModel& detector);

/// C(lambda, x0) for an ideal detector. Rejects interval windows.
double acceptance_probability(const Squeezing& s, const AcceptanceWindow& w);

/// C(lambda, x0, eta, n_bar) = 1 - erf(x0 / sqrt(2 V)) with V the detected
/// idler variance.
double acceptance_probability(const Squeezing& s, const AcceptanceWindow& w,
                              const DetectorModel& detector);

/// q_0 .. q_{n_max} for an ideal detector.
std::vector<double> qn_ideal(int n_max, double x0);

/// q_0 .. q_{n_max} for an imperfect detector. Thermal auxiliary modes are
/// mapped through vacuum_equivalent().
std::vector<double> qn_imperfect(int n_max, double x0, const DetectorModel& detector);

struct ConditionalStatistics {
  std::vector<double> p;
  std::vector<double> q;
  double acceptance_probability = 1.0;
  /// Closed-form moments.
  double mean_n = 0.0;
  double second_factorial = 0.0;
  /// Empty when lambda = 0 (vacuum signal, Q is 0/0).
  std::optional<double> mandel_q;
  /// Upper bound on the probability mass beyond p.back().
  double truncation_error_bound = 0.0;

  std::size_t n_max() const { return p.size() - 1; }

  /// Moments recomputed from the truncated distribution.
  double distribution_mean() const;
  double distribution_second_factorial() const;
  std::optional<double> distribution_mandel_q() const;
};

inline constexpr int kDefaultFockCap = 10000;

/// p_n = (1 - lambda) lambda^n q_n / C, truncated at the least N_max with
/// lambda^{N_max+1} / C <= tol (valid because q_n <= 1). tol must lie in
/// (0, 1e-3]. Throws NonConvergenceError if N_max would exceed fock_cap or C
/// underflows.
ConditionalStatistics photon_distribution(const Squeezing& s, const AcceptanceWindow& w,
                                          const DetectorModel& detector, double tol,
                                          int fock_cap = kDefaultFockCap);

double mean_photon(const Squeezing& s, const AcceptanceWindow& w, const DetectorModel& detector);

/// <:n^2:> = <n(n-1)>.
double second_factorial_moment(const Squeezing& s, const AcceptanceWindow& w,
                               const DetectorModel& detector);

/// Mandel Q = (<:n^2:> - <n>^2) / <n>. Throws std::domain_error at lambda = 0.
double mandel_q(const Squeezing& s, const AcceptanceWindow& w, const DetectorModel& detector);

/// lim_{lambda -> 0} Q / lambda at fixed x0.
///
/// Q itself vanishes linearly in lambda, so naive evaluation at tiny lambda
/// only sees rounding noise. The sign of this slope decides whether weakly
/// squeezed light can be sub-Poissonian at threshold x0.
double weak_squeezing_q_slope(double x0, const DetectorModel& detector);

enum class MomentOrdering { raw, normal };

/// Moments from the generating function G(lambda) = C(lambda) / (1 - lambda):
///   raw:    <n^k>   = (lambda d/dlambda)^k G / G
///   normal: <:n^k:> = lambda^k G^(k) / G
/// by central differences (h = 1e-4, one Richardson step). k must be 0, 1 or
/// 2. Throws std::domain_error when lambda -/+ 2h leaves [0, 1). This is an
/// independent check on the closed forms, not a production path.
double moment_via_generating(int k, const Squeezing& s, const AcceptanceWindow& w,
                             const DetectorModel& detector, MomentOrdering ordering);

/// Closed forms with explicit parameters. The ideal-detector variants and
/// the lossy (vacuum auxiliary) variants are written independently so the
/// eta = 1 limit can be checked against each other.
namespace closed_form {

double mean_ideal(double lambda, double x0);
double second_factorial_ideal(double lambda, double x0);
double mean_lossy(double lambda, double x0, double eta);
double second_factorial_lossy(double lambda, double x0, double eta);

}  // namespace closed_form

}  // namespace condlight
