#include "condlight/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "condlight/special_functions.hpp"

namespace condlight::solvers {

namespace {

constexpr std::uintmax_t kMaxRootIterations = 200;

struct RelativeTolerance {
  double rel;
  bool operator()(double a, double b) const {
    return std::abs(b - a) <= rel * std::max(1.0, std::abs(a));
  }
};

// Bracketed TOMS 748 solve; reports whichever bracket end has the smaller
// residual.
template <class F>
SolveReport bracketed_root(F f, double lo, double hi, double f_lo, double f_hi, double rel_tol) {
  std::uintmax_t iterations = kMaxRootIterations;
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi,
                                                        RelativeTolerance{rel_tol}, iterations);
  const double fa = f(a);
  const double fb = f(b);
  SolveReport report;
  report.solution = std::abs(fa) <= std::abs(fb) ? a : b;
  report.residual = std::abs(fa) <= std::abs(fb) ? fa : fb;
  report.iterations = static_cast<int>(iterations);
  report.bracket_lo = a;
  report.bracket_hi = b;
  report.feasible = true;
  return report;
}

double x0_min_equation(double x0) {
  const double g = 1.0 / (sf::kSqrtPi * sf::erfcx(x0));
  const double lhs = 1.0 + 2.0 * x0 * g;
  return lhs * lhs - 2.0 - 2.0 * x0 * (1.0 + 2.0 * x0 * x0) * g;
}

// Generation probability at the threshold that yields q_target; zero when the
// target is unreachable at this lambda.
struct ContourPoint {
  double lambda;
  double probability;
  SolveReport threshold;
};

ContourPoint contour_point(double lambda, double q_target, const DetectorModel& d) {
  const auto s = Squeezing::from_lambda(lambda);
  auto threshold = solve_x0_for_q(s, q_target, d);
  const double c = threshold.feasible
                       ? acceptance_probability(s, AcceptanceWindow::threshold(threshold.solution), d)
                       : 0.0;
  return {lambda, c, threshold};
}

std::vector<ContourPoint> scan(double lo, double hi, int points, double q_target,
                               const DetectorModel& d) {
  std::vector<ContourPoint> out;
  out.reserve(points);
  for (int i = 0; i < points; ++i) {
    const double lambda = lo + (hi - lo) * i / (points - 1);
    out.push_back(contour_point(lambda, q_target, d));
  }
  return out;
}

std::vector<std::size_t> local_maxima(const std::vector<ContourPoint>& pts) {
  std::vector<std::size_t> peaks;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double c = pts[i].probability;
    if (c <= 0.0) continue;
    const bool left = i == 0 || c > pts[i - 1].probability;
    const bool right = i + 1 == pts.size() || c >= pts[i + 1].probability;
    if (left && right) peaks.push_back(i);
  }
  return peaks;
}

}  // namespace

SolveReport solve_x0_for_q(const Squeezing& s, double q_target, const DetectorModel& detector) {
  if (s.lambda() == 0.0) {
    throw std::invalid_argument("solve_x0_for_q: lambda must be > 0");
  }
  if (!(q_target >= -1.0) || !std::isfinite(q_target)) {
    throw std::invalid_argument("solve_x0_for_q: q_target must be finite and >= -1");
  }
  const auto f = [&](double x0) {
    return mandel_q(s, AcceptanceWindow::threshold(x0), detector) - q_target;
  };

  SolveReport report;
  const double f0 = f(0.0);
  if (f0 <= 0.0) {
    // Q(0) is the thermal maximum; a larger target cannot be reached.
    report.feasible = f0 == 0.0;
    report.residual = f0;
    return report;
  }

  double lo = 0.0;
  double f_lo = f0;
  double hi = 4.0;
  double f_hi = f(hi);
  int expansions = 0;
  while (f_hi > 0.0) {
    if (hi >= kMaxThreshold) {
      report.solution = hi;
      report.residual = f_hi;
      report.iterations = expansions;
      report.bracket_lo = lo;
      report.bracket_hi = hi;
      report.feasible = false;
      return report;
    }
    lo = hi;
    f_lo = f_hi;
    hi *= 2.0;
    f_hi = f(hi);
    ++expansions;
  }
  if (f_hi == 0.0) {
    report.solution = report.bracket_lo = report.bracket_hi = hi;
    report.iterations = expansions;
    report.feasible = true;
    return report;
  }
  report = bracketed_root(f, lo, hi, f_lo, f_hi, 1e-13);
  report.iterations += expansions;
  return report;
}

SolveReport x0_min() {
  constexpr double lo = 0.0;
  constexpr double hi = 2.0;
  constexpr int kScan = 200;
  int sign_changes = 0;
  double prev = x0_min_equation(lo);
  for (int i = 1; i <= kScan; ++i) {
    const double cur = x0_min_equation(lo + (hi - lo) * i / kScan);
    if ((prev < 0.0) != (cur < 0.0)) ++sign_changes;
    prev = cur;
  }
  if (sign_changes != 1) {
    throw std::logic_error("x0_min: expected a single root on [0, 2]");
  }
  return bracketed_root(x0_min_equation, lo, hi, x0_min_equation(lo), x0_min_equation(hi),
                        4.0 * std::numeric_limits<double>::epsilon());
}

SolveReport x0_min(const DetectorModel& detector) {
  const auto f = [&](double x0) { return weak_squeezing_q_slope(x0, detector); };
  double lo = 0.0;
  double f_lo = f(lo);
  double hi = 2.0;
  double f_hi = f(hi);
  while (f_hi > 0.0) {
    if (hi >= kMaxThreshold) {
      SolveReport report;
      report.solution = hi;
      report.residual = f_hi;
      report.bracket_lo = lo;
      report.bracket_hi = hi;
      return report;
    }
    lo = hi;
    f_lo = f_hi;
    hi *= 2.0;
    f_hi = f(hi);
  }
  return bracketed_root(f, lo, hi, f_lo, f_hi, 4.0 * std::numeric_limits<double>::epsilon());
}

SolveReport optimal_lambda(double q_target, const DetectorModel& detector,
                           const OptimalLambdaOptions& options) {
  if (options.scan_points < 3 || !(options.lambda_lo > 0.0) ||
      !(options.lambda_hi < 1.0 && options.lambda_hi > options.lambda_lo)) {
    throw std::invalid_argument("optimal_lambda: invalid scan options");
  }
  auto pts = scan(options.lambda_lo, options.lambda_hi, options.scan_points, q_target, detector);
  int evaluations = options.scan_points;

  SolveReport report;
  auto peaks = local_maxima(pts);
  if (peaks.empty()) {
    report.feasible = false;
    report.iterations = evaluations;
    report.bracket_lo = options.lambda_lo;
    report.bracket_hi = options.lambda_hi;
    return report;
  }

  // Cell [lo, hi] around the best peak, refined when the scan is multimodal.
  const auto cell = [&](std::size_t i) {
    const double lo = pts[i == 0 ? 0 : i - 1].lambda;
    const double hi = pts[std::min(i + 1, pts.size() - 1)].lambda;
    return std::pair{lo, hi};
  };
  std::size_t best = *std::max_element(peaks.begin(), peaks.end(), [&](auto a, auto b) {
    return pts[a].probability < pts[b].probability;
  });
  if (peaks.size() > 1) {
    std::vector<ContourPoint> refined;
    for (auto i : peaks) {
      const auto [lo, hi] = cell(i);
      auto local = scan(lo, hi, 21, q_target, detector);
      evaluations += 21;
      refined.insert(refined.end(), local.begin(), local.end());
    }
    std::sort(refined.begin(), refined.end(),
              [](const auto& a, const auto& b) { return a.lambda < b.lambda; });
    pts = std::move(refined);
    peaks = local_maxima(pts);
    best = *std::max_element(peaks.begin(), peaks.end(), [&](auto a, auto b) {
      return pts[a].probability < pts[b].probability;
    });
  }

  if (best == 0 && pts[0].lambda == options.lambda_lo) {
    report.boundary_supremum = true;
    report.feasible = true;
    report.iterations = evaluations;
    report.bracket_lo = 0.0;
    report.bracket_hi = pts[1].lambda;
    if (q_target == 0.0) {
      // Q -> 0 as lambda -> 0, so the Q = 0 contour ends at the weak-squeezing threshold.
      const auto limit = x0_min(detector);
      if (limit.feasible) {
        report.solution = 0.0;
        report.residual = limit.residual;
        report.objective = acceptance_probability(
            Squeezing::from_lambda(0.0), AcceptanceWindow::threshold(limit.solution), detector);
        return report;
      }
    }
    report.solution = pts[0].lambda;
    report.residual = pts[0].threshold.residual;
    report.objective = pts[0].probability;
    return report;
  }
  if (best + 1 == pts.size() && pts[best].lambda == options.lambda_hi) {
    report.boundary_supremum = true;
    report.feasible = true;
    report.iterations = evaluations;
    report.solution = pts[best].lambda;
    report.residual = pts[best].threshold.residual;
    report.objective = pts[best].probability;
    report.bracket_lo = pts[best - 1].lambda;
    report.bracket_hi = pts[best].lambda;
    return report;
  }

  const auto [lo, hi] = cell(best);
  std::uintmax_t brent_iterations = 200;
  const auto [lambda_star, neg_c] = boost::math::tools::brent_find_minima(
      [&](double l) { return -contour_point(l, q_target, detector).probability; }, lo, hi,
      std::numeric_limits<double>::digits / 2, brent_iterations);
  const auto at = contour_point(lambda_star, q_target, detector);

  report.solution = lambda_star;
  report.objective = -neg_c;
  report.residual = at.threshold.residual;
  report.feasible = at.threshold.feasible;
  report.iterations = evaluations + static_cast<int>(brent_iterations);
  report.bracket_lo = lo;
  report.bracket_hi = hi;
  return report;
}

double eta_threshold(double n_bar) {
  if (!(n_bar >= 0.0) || !std::isfinite(n_bar)) {
    throw std::invalid_argument("eta_threshold: n_bar must be finite and >= 0");
  }
  return (1.0 + 2.0 * n_bar) / (2.0 + 2.0 * n_bar);
}

}  // namespace condlight::solvers
