#pragma once
// Bessel functions of the first kind, integer order, complex argument.

#include <cmath>
#include <cstdlib>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "brionlab/types.hpp"

namespace brionlab {

inline constexpr int bessel_max_order = 512;
inline constexpr Real bessel_max_arg = 64.0;

namespace detail {

inline void check_bessel_range(int n, Complex z) {
  if (std::abs(n) > bessel_max_order) throw Error("Bessel order outside |n| <= 512");
  if (!(std::abs(z) <= bessel_max_arg)) throw Error("Bessel argument outside |z| <= 64");
}

/// The same series summed with 50 significant digits.
inline Complex bessel_reduced_series_extended(int n, Complex z) {
  using Big = boost::multiprecision::cpp_bin_float_50;
  const Big zr = z.real() / 2, zi = z.imag() / 2;
  const Big qr = zi * zi - zr * zr, qi = -2 * zr * zi;  // -(z/2)^2
  Big tr = 1, ti = 0, sr = 1, si = 0;
  const Big tiny("1e-40");
  for (int k = 0; k < 400; ++k) {
    const Big den = Big(k + 1) * Big(n + k + 1);
    const Big nr = (tr * qr - ti * qi) / den;
    ti = (tr * qi + ti * qr) / den;
    tr = nr;
    sr += tr;
    si += ti;
    if (abs(tr) + abs(ti) <= tiny * (1 + abs(sr) + abs(si))) break;
  }
  return {sr.convert_to<Real>(), si.convert_to<Real>()};
}

/**
 * sum_k (-(z/2)^2)^k n! / ((n+k)! k!), i.e. J_n(z) / ((z/2)^n / n!), for n >= 0.
 * When the terms cancel by more than two digits the sum is redone in extended
 * precision; for real z of size 30 the largest term is about 1e11.
 */
inline Complex bessel_reduced_series(int n, Complex z) {
  const Complex q = -(z * 0.5) * (z * 0.5);
  Complex term{1.0, 0.0};
  Complex sum = term;
  Real magnitude = 1.0;
  for (int k = 0; k < 400; ++k) {
    term *= q / (static_cast<Real>(k + 1) * static_cast<Real>(n + k + 1));
    sum += term;
    magnitude += std::abs(term);
    if (std::abs(term) <= 1e-18 * (1.0 + std::abs(sum))) break;
  }
  if (magnitude > 100.0 * std::abs(sum)) return bessel_reduced_series_extended(n, z);
  return sum;
}

}  // namespace detail

/// Power series with term recurrence; negative orders by J_{-n} = (-1)^n J_n.
inline Complex bessel_j(int n, Complex z) {
  detail::check_bessel_range(n, z);
  if (n < 0) return (n % 2 == 0 ? 1.0 : -1.0) * bessel_j(-n, z);
  if (z == Complex(0.0, 0.0)) return n == 0 ? 1.0 : 0.0;
  Complex lead{1.0, 0.0};
  for (int j = 1; j <= n; ++j) lead *= (z * 0.5) / static_cast<Real>(j);
  return lead * detail::bessel_reduced_series(n, z);
}

/// (1/2pi) int_0^{2pi} exp(i z sin t - i n t) dt by the M-point trapezoid rule.
inline Complex bessel_j_integral(int n, Complex z, int points = 256) {
  Complex sum{0.0, 0.0};
  for (int j = 0; j < points; ++j) {
    const Real t = 2.0 * pi * j / points;
    sum += std::exp(I * z * std::sin(t) - I * static_cast<Real>(n) * t);
  }
  return sum / static_cast<Real>(points);
}

/// sum_{|n| <= N} J_n(z) e^{int}
inline Complex jacobi_anger_partial(Complex z, Real t, int order) {
  if (order < 0) throw Error("truncation order must be >= 0");
  Complex sum{0.0, 0.0};
  for (int n = -order; n <= order; ++n) sum += bessel_j(n, z) * std::exp(I * (static_cast<Real>(n) * t));
  return sum;
}

/**
 * J_n(z) * n! * (2/z)^n. The leading factor (z/2)^n / n! is divided out
 * analytically, so neither it nor n! is ever formed and large n cannot
 * overflow or underflow.
 */
inline Complex asymptotic_ratio(int n, Complex z) {
  if (n < 1) throw Error("asymptotic ratio needs n >= 1");
  if (z == Complex(0.0, 0.0)) throw Error("asymptotic ratio undefined at z = 0");
  detail::check_bessel_range(n, z);
  return detail::bessel_reduced_series(n, z);
}

/// log((z/2)^m / m!) on the principal branch.
inline Complex log_leading_term(int m, Complex z) {
  return static_cast<Real>(m) * std::log(z * 0.5) - std::lgamma(static_cast<Real>(m) + 1.0);
}

}  // namespace brionlab
