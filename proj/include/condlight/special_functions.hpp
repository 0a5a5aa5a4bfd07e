#pragma once

#include <cstddef>
#include <vector>

/// Special functions shared by the statistics, phase-space and oracle code.
///
/// Hermite polynomials never appear in raw form. Everything goes through the
/// normalized harmonic-oscillator eigenfunctions
///
///     psi_n(x) = H_n(x) exp(-x^2/2) / sqrt(2^n n! sqrt(pi)),
///
/// which stay O(1) where H_n and 2^n n! overflow individually.
namespace condlight::sf {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrtPi = 1.77245385090551602730;

double erf(double x);
double erfc(double x);

/// Scaled complementary error function exp(x^2) erfc(x). Finite for all x
/// where erfc itself underflows.
double erfcx(double x);

/// psi_0(x) .. psi_{n_max}(x) at a single point.
struct OscillatorEigenfunctionTable {
  double x = 0.0;
  std::vector<double> values;

  std::size_t n_max() const { return values.size() - 1; }
  double operator[](std::size_t n) const { return values[n]; }
};

/// Three-term recurrence
///   psi_n = x sqrt(2/n) psi_{n-1} - sqrt((n-1)/n) psi_{n-2},
///   psi_0 = pi^{-1/4} exp(-x^2/2).
/// Throws std::invalid_argument for n_max < 0. For |x| beyond ~38 the
/// Gaussian factor underflows and every entry is zero.
OscillatorEigenfunctionTable oscillator_eigenfunctions(double x, int n_max);

/// psi_n(x) without materializing the whole table.
double oscillator_eigenfunction(int n, double x);

/// |<x|n>|^2 = psi_n(x)^2, the quadrature density of Fock state |n>. It does
/// not depend on the local-oscillator phase.
double fock_quadrature_pdf(int n, double x);

/// P(|X| > x0) for X ~ N(0, variance).
double gaussian_tail_two_sided(double variance, double x0);

/// log(n!) for n >= 0.
double log_factorial(int n);

/// log(0!), ..., log(n_max!).
std::vector<double> log_factorial_table(int n_max);

}  // namespace condlight::sf
