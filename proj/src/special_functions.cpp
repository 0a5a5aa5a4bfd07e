#include "condlight/special_functions.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace condlight::sf {

namespace {

constexpr double kPiQuarterRoot = 0.75112554446494248286;  // pi^{-1/4}

// Continued fraction of erfc for x >= kFractionCutover, modified Lentz:
//   sqrt(pi) erfcx(x) = 1 / (x + (1/2) / (x + 1 / (x + (3/2) / (x + ...))))
double erfcx_continued_fraction(double x) {
  constexpr double kTiny = 1e-300;
  double f = x;
  double c = x;
  double d = 0.0;
  for (int k = 1; k < 500; ++k) {
    const double a = 0.5 * k;
    d = x + a * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = x + a / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 / (kSqrtPi * f);
}

constexpr double kFractionCutover = 5.0;

}  // namespace

double erf(double x) { return std::erf(x); }

double erfc(double x) { return std::erfc(x); }

double erfcx(double x) {
  if (x < 0.0) {
    return 2.0 * std::exp(x * x) - erfcx(-x);
  }
  if (x < kFractionCutover) {
    return std::exp(x * x) * std::erfc(x);
  }
  return erfcx_continued_fraction(x);
}

OscillatorEigenfunctionTable oscillator_eigenfunctions(double x, int n_max) {
  if (n_max < 0) {
    throw std::invalid_argument("oscillator_eigenfunctions: n_max must be >= 0, got " +
                                std::to_string(n_max));
  }
  OscillatorEigenfunctionTable table;
  table.x = x;
  table.values.resize(static_cast<std::size_t>(n_max) + 1);
  table.values[0] = kPiQuarterRoot * std::exp(-0.5 * x * x);
  if (n_max >= 1) {
    table.values[1] = std::sqrt(2.0) * x * table.values[0];
  }
  for (int n = 2; n <= n_max; ++n) {
    const double nn = n;
    table.values[n] = x * std::sqrt(2.0 / nn) * table.values[n - 1] -
                      std::sqrt((nn - 1.0) / nn) * table.values[n - 2];
  }
  return table;
}

double oscillator_eigenfunction(int n, double x) {
  if (n < 0) {
    throw std::invalid_argument("oscillator_eigenfunction: n must be >= 0");
  }
  double prev = 0.0;
  double cur = kPiQuarterRoot * std::exp(-0.5 * x * x);
  for (int k = 1; k <= n; ++k) {
    const double kk = k;
    const double next = x * std::sqrt(2.0 / kk) * cur - std::sqrt((kk - 1.0) / kk) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double fock_quadrature_pdf(int n, double x) {
  if (n < 0) {
    throw std::invalid_argument("fock_quadrature_pdf: n must be >= 0");
  }
  const double psi = oscillator_eigenfunction(n, x);
  return psi * psi;
}

double gaussian_tail_two_sided(double variance, double x0) {
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw std::invalid_argument("gaussian_tail_two_sided: variance must be positive and finite");
  }
  if (!(x0 >= 0.0)) {
    throw std::invalid_argument("gaussian_tail_two_sided: x0 must be >= 0");
  }
  return erfc(x0 / std::sqrt(2.0 * variance));
}

double log_factorial(int n) {
  if (n < 0) {
    throw std::invalid_argument("log_factorial: n must be >= 0");
  }
  return std::lgamma(static_cast<double>(n) + 1.0);
}

std::vector<double> log_factorial_table(int n_max) {
  if (n_max < 0) {
    throw std::invalid_argument("log_factorial_table: n_max must be >= 0");
  }
  std::vector<double> table(static_cast<std::size_t>(n_max) + 1, 0.0);
  for (int n = 2; n <= n_max; ++n) {
    table[n] = std::lgamma(static_cast<double>(n) + 1.0);
  }
  return table;
}

}  // namespace condlight::sf
