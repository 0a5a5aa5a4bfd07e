#pragma once

#include <optional>

#include "condlight/conditional_stats.hpp"

/// Threshold and optimization problems built on the closed-form statistics.
namespace condlight::solvers {

struct SolveReport {
  double solution = 0.0;
  double residual = 0.0;
  int iterations = 0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  bool feasible = false;
  /// Objective at the solution (optimal_lambda: the generation probability).
  std::optional<double> objective;
  /// optimal_lambda only: the supremum sits at lambda -> 0 and is not attained.
  bool boundary_supremum = false;
};

/// Largest x0 the threshold search will try before declaring a target
/// unreachable.
inline constexpr double kMaxThreshold = 4096.0;

/// x0 with Q(lambda, x0, detector) = q_target. Q decreases with x0, so the
/// root is bracketed on [0, x_hi] with x_hi doubled from 4 up to
/// kMaxThreshold. Infeasible when Q stays above the target everywhere on that
/// range, or when the target exceeds the thermal value Q(x0 = 0).
SolveReport solve_x0_for_q(const Squeezing& s, double q_target, const DetectorModel& detector);

/// Threshold at which weakly squeezed light (lambda -> 0) turns Poissonian:
/// the root of (1 + 2 x0 g)^2 = 2 + 2 x0 (1 + 2 x0^2) g, with
/// g = exp(-x0^2) / (sqrt(pi) erfc(x0)). Bracketed on [0, 2].
SolveReport x0_min();

/// Same limit for an imperfect detector: the root in x0 of
/// weak_squeezing_q_slope(x0, detector). Infeasible when the slope stays
/// positive (eta at or below threshold).
SolveReport x0_min(const DetectorModel& detector);

struct OptimalLambdaOptions {
  int scan_points = 50;
  double lambda_lo = 1e-3;
  double lambda_hi = 0.999;
};

/// Maximizes lambda -> C(lambda, x0*(lambda)) where x0* solves
/// Q = q_target. A coarse scan over lambda locates the best cell; the peak
/// is refined with Brent's method. Several local maxima in the scan trigger a
/// refined scan around each before the final refinement. When the best scan
/// point is the smallest lambda and q_target = 0, the supremum is the
/// lambda -> 0 limit erfc(x0_min) and boundary_supremum is set.
SolveReport optimal_lambda(double q_target, const DetectorModel& detector,
                           const OptimalLambdaOptions& options = {});

/// eta_th = (1 + 2 n_bar) / (2 + 2 n_bar).
double eta_threshold(double n_bar);

}  // namespace condlight::solvers
