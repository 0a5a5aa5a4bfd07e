#include "condlight/phase_space.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "condlight/special_functions.hpp"

namespace condlight::phase_space {

namespace {

void validate_distribution(std::span<const double> p, const char* who) {
  if (p.empty()) throw std::invalid_argument(std::string(who) + ": empty distribution");
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string(who) + ": probabilities must be finite and >= 0");
    }
    sum += v;
  }
  // Truncated distributions lose at most 1e-3 of their mass.
  if (sum < 1.0 - 1e-3 || sum > 1.0 + 1e-9) {
    throw std::invalid_argument(std::string(who) + ": distribution is not normalized");
  }
}

void validate_radius(double r, const char* who) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument(std::string(who) + ": r must be finite and >= 0");
  }
}

double husimi_sum(std::span<const double> p, double r) {
  if (r == 0.0) return p[0] / sf::kPi;
  const double r2 = r * r;
  const double log_r2 = std::log(r2);
  double sum = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    if (p[n] == 0.0) continue;
    const double nn = static_cast<double>(n);
    sum += std::exp(std::log(p[n]) + nn * log_r2 - std::lgamma(nn + 1.0) - r2);
  }
  return sum / sf::kPi;
}

// sum_n p_n (-1)^n exp(-y/2) L_n(y) with y = 2 r^2. The weighted Laguerre
// functions are bounded by 1 in magnitude; the recurrence runs on unscaled
// L_n and is rescaled whenever it grows large, so exp(-y/2) never underflows
// ahead of time.
double wigner_sum(std::span<const double> p, double r) {
  const double y = 2.0 * r * r;
  double log_scale = -0.5 * y;
  double prev = 0.0;
  double cur = 1.0;
  double sum = p[0] * std::exp(log_scale) * cur;
  for (std::size_t n = 1; n < p.size(); ++n) {
    const double k = static_cast<double>(n - 1);
    const double next = ((2.0 * k + 1.0 - y) * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
    if (std::abs(cur) > 1e150) {
      prev *= 1e-150;
      cur *= 1e-150;
      log_scale += 150.0 * std::log(10.0);
    }
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    sum += sign * p[n] * cur * std::exp(log_scale);
  }
  return sum / sf::kPi;
}

}  // namespace

double husimi(std::span<const double> p, double r) {
  validate_distribution(p, "husimi");
  validate_radius(r, "husimi");
  return husimi_sum(p, r);
}

double wigner(std::span<const double> p, double r) {
  validate_distribution(p, "wigner");
  validate_radius(r, "wigner");
  return wigner_sum(p, r);
}

namespace {

template <class Fn>
RadialGrid profile(std::span<const double> p, std::span<const double> radii, Fn fn,
                   const char* who) {
  validate_distribution(p, who);
  if (radii.empty() || radii.front() != 0.0) {
    throw std::invalid_argument(std::string(who) + ": radii must start at 0");
  }
  RadialGrid grid;
  grid.radii.assign(radii.begin(), radii.end());
  grid.values.reserve(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    validate_radius(radii[i], who);
    if (i > 0 && !(radii[i] > radii[i - 1])) {
      throw std::invalid_argument(std::string(who) + ": radii must be strictly increasing");
    }
    grid.values.push_back(fn(p, radii[i]));
  }
  return grid;
}

}  // namespace

RadialGrid husimi_profile(std::span<const double> p, std::span<const double> radii) {
  return profile(p, radii, husimi_sum, "husimi_profile");
}

RadialGrid wigner_profile(std::span<const double> p, std::span<const double> radii) {
  return profile(p, radii, wigner_sum, "wigner_profile");
}

std::vector<double> uniform_radii(double r_max, std::size_t count) {
  if (count < 2 || !(r_max > 0.0)) {
    throw std::invalid_argument("uniform_radii: need count >= 2 and r_max > 0");
  }
  std::vector<double> radii(count);
  for (std::size_t i = 0; i < count; ++i) {
    radii[i] = r_max * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return radii;
}

}  // namespace condlight::phase_space
