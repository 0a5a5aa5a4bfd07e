#pragma once

// Reference values in 100-digit arithmetic, built from explicit series and
// polynomial expansions rather than the recurrences used by the library.

#include <cmath>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace testing_oracles {

using mp = boost::multiprecision::cpp_bin_float_100;

inline mp pi() { return boost::math::constants::pi<mp>(); }

/// Maclaurin series of erf; converges for every x, 100 digits absorb the
/// cancellation up to |x| ~ 8.
inline mp erf_series(const mp& x) {
  mp term = x;
  mp sum = x;
  const mp x2 = x * x;
  for (int k = 1; k < 2000; ++k) {
    term *= -x2 / k;
    const mp add = term / (2 * k + 1);
    sum += add;
    if (abs(add) < abs(sum) * mp("1e-90")) break;
  }
  return 2 * sum / sqrt(pi());
}

inline mp erfc_series(const mp& x) { return 1 - erf_series(x); }

/// Coefficients c_k of H_n(x) = sum_k c_k x^k from the explicit sum
/// H_n(x) = n! sum_m (-1)^m (2x)^(n-2m) / (m! (n-2m)!).
inline std::vector<mp> hermite_coefficients(int n) {
  std::vector<mp> c(n + 1, mp(0));
  mp n_fact = 1;
  for (int i = 2; i <= n; ++i) n_fact *= i;
  for (int m = 0; 2 * m <= n; ++m) {
    mp denom = 1;
    for (int i = 2; i <= m; ++i) denom *= i;
    for (int i = 2; i <= n - 2 * m; ++i) denom *= i;
    mp value = n_fact / denom * pow(mp(2), n - 2 * m);
    c[n - 2 * m] = (m % 2 ? -value : value);
  }
  return c;
}

inline mp polynomial(const std::vector<mp>& c, const mp& x) {
  mp acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

/// 1 / sqrt(2^n n! sqrt(pi)).
inline mp eigenfunction_norm(int n) {
  mp v = sqrt(pi());
  for (int i = 1; i <= n; ++i) v *= 2 * i;
  return 1 / sqrt(v);
}

inline mp eigenfunction(int n, const mp& x) {
  return eigenfunction_norm(n) * polynomial(hermite_coefficients(n), x) * exp(-x * x / 2);
}

/// Lower incomplete gamma gamma(a, z) by its positive-term series.
inline mp lower_gamma(const mp& a, const mp& z) {
  if (z == 0) return 0;
  mp term = 1 / a;
  mp sum = term;
  for (int j = 1; j < 5000; ++j) {
    term *= z / (a + j);
    sum += term;
    if (term < sum * mp("1e-95")) break;
  }
  return pow(z, a) * exp(-z) * sum;
}

/// P(|x| > x0) for x distributed as psi_n(x)^2, integrating the squared
/// Hermite polynomial term by term against exp(-x^2).
inline mp qn_ideal(int n, const mp& x0) {
  const auto h = hermite_coefficients(n);
  std::vector<mp> sq(2 * n + 1, mp(0));
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) sq[i + j] += h[i] * h[j];
  }
  mp inner = 0;  // integral over [0, x0] of H_n^2 exp(-x^2)
  for (int k = 0; k <= n; ++k) {
    if (sq[2 * k] == 0) continue;
    inner += sq[2 * k] * lower_gamma(mp(k) + mp(0.5), x0 * x0) / 2;
  }
  const mp norm = eigenfunction_norm(n);
  return 1 - 2 * norm * norm * inner;
}

/// L_n(x) = sum_k C(n, k) (-x)^k / k!.
inline mp laguerre(int n, const mp& x) {
  mp sum = 0;
  mp binom = 1;
  mp power = 1;
  mp fact = 1;
  for (int k = 0; k <= n; ++k) {
    if (k > 0) {
      binom = binom * (n - k + 1) / k;
      power *= -x;
      fact *= k;
    }
    sum += binom * power / fact;
  }
  return sum;
}

inline double wigner(std::span<const double> p, double r) {
  const mp r2 = mp(r) * r;
  mp sum = 0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    const mp term = mp(p[n]) * laguerre(static_cast<int>(n), 2 * r2);
    sum += (n % 2 ? -term : term);
  }
  return static_cast<double>(sum * exp(-r2) / pi());
}

inline double husimi(std::span<const double> p, double r) {
  const mp r2 = mp(r) * r;
  mp sum = 0;
  mp power = 1;
  for (std::size_t n = 0; n < p.size(); ++n) {
    if (n > 0) power *= r2 / n;
    sum += mp(p[n]) * power;
  }
  return static_cast<double>(sum * exp(-r2) / pi());
}

}  // namespace testing_oracles
