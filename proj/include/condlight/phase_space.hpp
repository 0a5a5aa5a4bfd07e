#pragma once

#include <cstddef>
#include <span>
#include <vector>

/// Quasidistributions of Fock-diagonal states.
///
/// A state diagonal in the Fock basis carries no phase, so its Husimi and
/// Wigner functions depend only on the distance from the origin. For the
/// Husimi function r = |alpha|; for the Wigner function r^2 = x^2 + p^2 with
/// the vacuum variance 1/2 quadrature convention.
namespace condlight::phase_space {

struct RadialGrid {
  std::vector<double> radii;
  std::vector<double> values;
};

/// W_A(r) = (1/pi) exp(-r^2) sum_n p_n r^{2n} / n!.
double husimi(std::span<const double> p, double r);

/// W(r) = (1/pi) sum_n p_n (-1)^n exp(-r^2) L_n(2 r^2).
double wigner(std::span<const double> p, double r);

RadialGrid husimi_profile(std::span<const double> p, std::span<const double> radii);
RadialGrid wigner_profile(std::span<const double> p, std::span<const double> radii);

/// count >= 2 evenly spaced radii on [0, r_max].
std::vector<double> uniform_radii(double r_max, std::size_t count);

}  // namespace condlight::phase_space
