#pragma once

#include <algorithm>
#include <cstdlib>
#include <map>
#include <vector>

#include "brionlab/types.hpp"

namespace brionlab {

/**
 * Finite two-sided sum  sum_{k=-N}^{N} c_k e^{ikt}, kept trimmed: the outer
 * pair (c_N, c_{-N}) is dropped while both are below 1e-14 of the largest
 * coefficient.
 */
class TrigPoly {
 public:
  TrigPoly() : coeffs_(1, Complex{0.0, 0.0}) {}

  static TrigPoly constant(Complex c) {
    TrigPoly p;
    p.coeffs_[0] = c;
    return p;
  }

  static TrigPoly from_map(const std::map<int, Complex>& terms) {
    int n = 0;
    for (const auto& [k, c] : terms) n = std::max(n, std::abs(k));
    TrigPoly p;
    p.coeffs_.assign(static_cast<std::size_t>(2 * n + 1), Complex{0.0, 0.0});
    for (const auto& [k, c] : terms) p.coeffs_[static_cast<std::size_t>(k + n)] = c;
    p.trim();
    return p;
  }

  int degree() const { return static_cast<int>(coeffs_.size() / 2); }

  /// c_k, zero outside [-N, N].
  Complex operator[](int k) const {
    const int n = degree();
    if (k < -n || k > n) return {0.0, 0.0};
    return coeffs_[static_cast<std::size_t>(k + n)];
  }

  bool is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](Complex c) { return c == Complex{0.0, 0.0}; });
  }

  Real max_abs() const {
    Real m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
  }

  Complex operator()(Real t) const {
    const int n = degree();
    Complex s{0.0, 0.0};
    for (int k = -n; k <= n; ++k) s += (*this)[k] * std::exp(I * (static_cast<Real>(k) * t));
    return s;
  }

  friend TrigPoly trig_mul(const TrigPoly& a, const TrigPoly& b) {
    const int na = a.degree(), nb = b.degree(), n = na + nb;
    TrigPoly out;
    out.coeffs_.assign(static_cast<std::size_t>(2 * n + 1), Complex{0.0, 0.0});
    for (int i = -na; i <= na; ++i) {
      const Complex ca = a[i];
      if (ca == Complex{0.0, 0.0}) continue;
      for (int j = -nb; j <= nb; ++j) out.coeffs_[static_cast<std::size_t>(i + j + n)] += ca * b[j];
    }
    out.trim();
    return out;
  }

  friend TrigPoly operator+(const TrigPoly& a, const TrigPoly& b) {
    const int n = std::max(a.degree(), b.degree());
    TrigPoly out;
    out.coeffs_.assign(static_cast<std::size_t>(2 * n + 1), Complex{0.0, 0.0});
    for (int k = -n; k <= n; ++k) out.coeffs_[static_cast<std::size_t>(k + n)] = a[k] + b[k];
    out.trim();
    return out;
  }

  friend TrigPoly operator*(Complex s, const TrigPoly& a) {
    TrigPoly out = a;
    for (auto& c : out.coeffs_) c *= s;
    out.trim();
    return out;
  }

 private:
  void trim() {
    const Real cut = 1e-14 * max_abs();
    while (coeffs_.size() > 1 && std::abs(coeffs_.front()) <= cut && std::abs(coeffs_.back()) <= cut) {
      coeffs_.erase(coeffs_.begin());
      coeffs_.pop_back();
    }
  }

  std::vector<Complex> coeffs_;  // index k + N
};

// ---------------------------------------------------------------------------
// Fourier coefficients of periodic functions

/// In-place iterative radix-2 FFT, forward sign e^{-2 pi i jk/M}.
inline void fft(std::vector<Complex>& a) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0) throw Error("FFT size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const Real ang = -2.0 * pi / static_cast<Real>(len);
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const Complex w = std::polar(1.0, ang * static_cast<Real>(k));
        const Complex u = a[i + k], v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
}

/// Coefficients a_n, |n| <= M/2 - 1, of a 2pi-periodic function sampled at t_j = 2 pi j / M.
struct FourierTable {
  int grid = 0;
  std::map<int, Complex> coeffs;

  Complex at(int n) const {
    auto it = coeffs.find(n);
    if (it == coeffs.end()) throw Error("Fourier coefficient outside the computed range");
    return it->second;
  }
  int max_index() const { return grid / 2 - 1; }
};

template <class F>
FourierTable fourier_table(F&& f, int grid) {
  if (grid < 4 || (grid & (grid - 1)) != 0) throw Error("FFT grid must be a power of two >= 4");
  std::vector<Complex> s(static_cast<std::size_t>(grid));
  for (int j = 0; j < grid; ++j) s[static_cast<std::size_t>(j)] = f(2.0 * pi * j / grid);
  fft(s);
  FourierTable t;
  t.grid = grid;
  for (int n = -(grid / 2 - 1); n <= grid / 2 - 1; ++n)
    t.coeffs[n] = s[static_cast<std::size_t>((n + grid) % grid)] / static_cast<Real>(grid);
  return t;
}

/// Doubles the grid (up to max_grid) until |a_{M/2-1}| and |a_{-(M/2-1)}| are below 1e-13 * max(1, max |a_n|).
template <class F>
FourierTable fourier_table_adaptive(F&& f, int grid, int max_grid = 1 << 16) {
  while (true) {
    auto t = fourier_table(f, grid);
    Real peak = 1.0;
    for (const auto& [n, c] : t.coeffs) peak = std::max(peak, std::abs(c));
    const Real tail = std::max(std::abs(t.at(t.max_index())), std::abs(t.at(-t.max_index())));
    if (tail < 1e-13 * peak || grid >= max_grid) return t;
    grid *= 2;
  }
}

}  // namespace brionlab
