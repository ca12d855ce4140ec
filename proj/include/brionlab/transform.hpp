#pragma once
/**
 * @brief Fourier-Laplace transform of polytopes, integral of exp(-2 pi i <x, z>)
 * over P, through the vertex-cone sum, and three independent oracles
 * (axis boxes, simplices through divided differences, Monte Carlo).
 */

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <random>
#include <vector>

#include "brionlab/geometry.hpp"

namespace brionlab {

/// Vertex cones of a polytope, triangulated once and shared by every evaluation.
struct ConeDecomposition {
  std::size_t dim = 0;
  std::vector<Vec> vertices;
  std::vector<std::vector<SimplicialCone>> cones;  // per vertex
  Complex two_pi_i_pow_d;                          // (2 pi i)^d
  Real max_generator_norm = 0.0;
  std::uint64_t seed_hash = 0;                     // order-independent hash of the vertex data

  std::size_t cone_count() const {
    std::size_t n = 0;
    for (const auto& c : cones) n += c.size();
    return n;
  }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline Real unit_real(std::uint64_t bits) { return static_cast<Real>(bits >> 11) * 0x1.0p-53; }

/// FNV-1a over the lexicographically sorted vertex coordinates.
inline std::uint64_t hash_vertices(std::vector<Vec> verts) {
  std::sort(verts.begin(), verts.end(), [](const Vec& a, const Vec& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  });
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& v : verts) {
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      const Real x = v[k] == 0.0 ? 0.0 : v[k];  // fold -0.0
      const auto bits = std::bit_cast<std::uint64_t>(x);
      for (int b = 0; b < 8; ++b) {
        h ^= (bits >> (8 * b)) & 0xffU;
        h *= 0x100000001b3ULL;
      }
    }
  }
  return h;
}

}  // namespace detail

inline ConeDecomposition decompose(const std::vector<TangentCone>& tangent_cones, std::size_t dim) {
  ConeDecomposition c;
  c.dim = dim;
  c.two_pi_i_pow_d = std::pow(Complex(0.0, 2.0 * pi), static_cast<int>(dim));
  for (const auto& k : tangent_cones) {
    c.vertices.push_back(k.apex);
    c.cones.push_back(triangulate_cone(k));
    for (const auto& g : k.generators) c.max_generator_norm = std::max(c.max_generator_norm, g.norm());
  }
  c.seed_hash = detail::hash_vertices(c.vertices);
  return c;
}

inline ConeDecomposition decompose(const Polytope& p) {
  std::vector<TangentCone> ks;
  for (std::size_t v = 0; v < p.size(); ++v) ks.push_back(tangent_cone(p, v));
  return decompose(ks, p.dim());
}

struct TransformValue {
  Complex value;
  Real min_denom = 0.0;  // smallest |<w, z>| over all cone generators
  bool perturbed = false;
  Real err_estimate = 0.0;
};

namespace detail {

struct DirectSum {
  Complex value;
  Real min_denom;
};

inline DirectSum brion_direct(const ConeDecomposition& c, const CVec& z) {
  Complex total{0.0, 0.0};
  Real min_denom = std::numeric_limits<Real>::infinity();
  for (std::size_t v = 0; v < c.vertices.size(); ++v) {
    const Complex phase = std::exp(Complex(0.0, -2.0 * pi) * pair(c.vertices[v], z));
    Complex vertex_sum{0.0, 0.0};
    for (const auto& s : c.cones[v]) {
      Complex denom{1.0, 0.0};
      for (const auto& w : s.generators) {
        const Complex f = pair(w, z);
        min_denom = std::min(min_denom, std::abs(f));
        denom *= f;
      }
      vertex_sum += s.det_abs / denom;
    }
    total += phase * vertex_sum;
  }
  return {total / c.two_pi_i_pow_d, min_denom};
}

/// Same sum in long double, for perturbed points where terms of size (h q)^-d cancel down to O(1).
inline Complex brion_direct_extended(const ConeDecomposition& c, const CVec& z) {
  using LC = std::complex<long double>;
  const long double two_pi = 6.283185307179586476925286766559L;
  LC total{0.0L, 0.0L};
  for (std::size_t v = 0; v < c.vertices.size(); ++v) {
    LC arg{0.0L, 0.0L};
    for (Eigen::Index k = 0; k < z.size(); ++k)
      arg += static_cast<long double>(c.vertices[v][k]) * LC(z[k].real(), z[k].imag());
    const LC phase = std::exp(LC(0.0L, -two_pi) * arg);
    LC vertex_sum{0.0L, 0.0L};
    for (const auto& s : c.cones[v]) {
      LC denom{1.0L, 0.0L};
      for (const auto& w : s.generators) {
        LC f{0.0L, 0.0L};
        for (Eigen::Index k = 0; k < z.size(); ++k) f += static_cast<long double>(w[k]) * LC(z[k].real(), z[k].imag());
        denom *= f;
      }
      vertex_sum += static_cast<long double>(s.det_abs) / denom;
    }
    total += phase * vertex_sum;
  }
  const Complex scale = c.two_pi_i_pow_d;
  const LC r = total / LC(scale.real(), scale.imag());
  return {static_cast<Real>(r.real()), static_cast<Real>(r.imag())};
}

}  // namespace detail

/**
 * Vertex-cone sum. When some factor |<w, z>| drops below 1e-8 * scale
 * (scale = max generator norm * reference |z|), the value is taken from
 * z + h eta at h in {1e-3, 5e-4, 2.5e-4} * reference |z| and Richardson
 * extrapolated to h = 0. eta is a real direction seeded by the vertex data.
 */
inline TransformValue brion_transform(const ConeDecomposition& c, const CVec& z) {
  if (static_cast<std::size_t>(z.size()) != c.dim) throw Error("evaluation point dimension does not match polytope");
  const Real gmax = c.max_generator_norm;
  // Below |z| ~ 1/gmax the direct sum cancels catastrophically, so the reference size never drops under it.
  const Real zref = std::max(inf_norm(z), 1.0 / gmax);
  const Real scale = gmax * zref;
  const Real tau = 1e-8 * scale;

  const auto direct = detail::brion_direct(c, z);
  TransformValue out;
  out.min_denom = direct.min_denom;
  if (direct.min_denom >= tau) {
    out.value = direct.value;
    return out;
  }
  out.perturbed = true;

  constexpr std::array<Real, 3> eps{1e-3, 5e-4, 2.5e-4};
  const auto d = static_cast<Eigen::Index>(c.dim);
  // Quality of a direction: worst ratio |<w, z + h eta>| / (h |w|) over factors and steps.
  auto quality = [&](const Vec& eta) {
    Real q = std::numeric_limits<Real>::infinity();
    for (const auto& cones : c.cones)
      for (const auto& s : cones)
        for (const auto& w : s.generators)
          for (Real e : eps) {
            const Real h = e * zref;
            const Real f = std::abs(pair(w, z) + h * w.dot(eta));
            if (f < tau) return 0.0;
            q = std::min(q, f / (h * w.norm()));
          }
    return q;
  };
  std::uint64_t state = c.seed_hash;
  Vec best;
  Real best_q = -1.0;
  for (int attempt = 0; attempt < 16; ++attempt) {
    Vec eta(d);
    for (Eigen::Index k = 0; k < d; ++k) eta[k] = 2.0 * detail::unit_real(detail::splitmix64(state)) - 1.0;
    if (eta.norm() == 0.0) continue;
    eta.normalize();
    const Real q = quality(eta);
    if (q > best_q) {
      best_q = q;
      best = eta;
    }
  }

  std::array<Complex, 3> f{};
  for (std::size_t k = 0; k < eps.size(); ++k) {
    CVec zp = z;
    for (Eigen::Index j = 0; j < d; ++j) zp[j] += eps[k] * zref * best[j];
    f[k] = detail::brion_direct_extended(c, zp);
  }
  const Complex first = 2.0 * f[2] - f[1];
  out.value = (8.0 * f[2] - 6.0 * f[1] + f[0]) / 3.0;
  out.err_estimate = std::abs(out.value - first);
  return out;
}

inline TransformValue brion_transform(const Polytope& p, const CVec& z) { return brion_transform(decompose(p), z); }

struct ConeValue {
  Complex value;
  bool convergent = false;  // Im <w, z> < 0 for every generator: the cone integral itself converges
};

/// Closed form exp(-2 pi i <apex, z>) / (2 pi i)^d * det / prod <w_l, z>.
inline ConeValue cone_transform(const SimplicialCone& s, const CVec& z) {
  const auto d = s.apex.size();
  if (z.size() != d) throw Error("evaluation point dimension does not match cone");
  Complex denom{1.0, 0.0};
  bool convergent = true;
  for (const auto& w : s.generators) {
    const Complex f = pair(w, z);
    if (std::abs(f) <= 1e-14 * w.norm() * inf_norm(z) || std::abs(f) == 0.0)
      throw Error("cone denominator vanishes at this point; perturb z");
    convergent = convergent && f.imag() < 0.0;
    denom *= f;
  }
  const Complex scale = std::pow(Complex(0.0, 2.0 * pi), static_cast<int>(d));
  return {std::exp(Complex(0.0, -2.0 * pi) * pair(s.apex, z)) / scale * s.det_abs / denom, convergent};
}

/// Product of one-dimensional integrals over [lo_j, hi_j].
inline Complex box_transform_exact(const Vec& lo, const Vec& hi, const CVec& z) {
  if (lo.size() != hi.size() || lo.size() != z.size()) throw Error("box and evaluation point dimensions differ");
  Complex out{1.0, 0.0};
  for (Eigen::Index j = 0; j < lo.size(); ++j) {
    const Complex zeta = z[j];
    if (std::abs(zeta) <= 1e-12) {
      out *= hi[j] - lo[j];
    } else {
      const Complex m(0.0, -2.0 * pi);
      out *= (std::exp(m * lo[j] * zeta) - std::exp(m * hi[j] * zeta)) / (Complex(0.0, 2.0 * pi) * zeta);
    }
  }
  return out;
}

namespace detail {

/// exp[mu_0, ..., mu_d]: Newton table when nodes are separated, otherwise the
/// Taylor series of the bidiagonal (Opitz) matrix, scaled and squared.
inline Complex exp_divided_difference(const std::vector<Complex>& mu) {
  const std::size_t n = mu.size();
  bool confluent = false;
  for (std::size_t i = 0; i < n && !confluent; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(mu[i] - mu[j]) < 1e-6) {
        confluent = true;
        break;
      }

  if (!confluent) {
    std::vector<Complex> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = std::exp(mu[i]);
    for (std::size_t level = 1; level < n; ++level)
      for (std::size_t i = 0; i + level < n; ++i) t[i] = (t[i + 1] - t[i]) / (mu[i + level] - mu[i]);
    return t[0];
  }

  Complex centre{0.0, 0.0};
  for (const auto& m : mu) centre += m;
  centre /= static_cast<Real>(n);
  const auto N = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(N, N);
  Real spread = 0.0;
  for (Eigen::Index i = 0; i < N; ++i) {
    a(i, i) = mu[static_cast<std::size_t>(i)] - centre;
    spread = std::max(spread, std::abs(a(i, i)));
    if (i + 1 < N) a(i, i + 1) = 1.0;
  }
  int squarings = 0;
  while (spread + 1.0 > std::ldexp(1.0, squarings)) ++squarings;
  a /= std::ldexp(1.0, squarings);
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(N, N);
  Eigen::MatrixXcd sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * a / static_cast<Real>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return std::exp(centre) * sum(0, N - 1);
}

}  // namespace detail

/// Integral over the simplex conv(v_0..v_d): |det(v_k - v_0)| * exp[mu_0..mu_d], mu_k = -2 pi i <v_k, z>.
inline Complex simplex_transform_exact(const std::vector<Vec>& vertices, const CVec& z) {
  const auto d = z.size();
  if (vertices.size() != static_cast<std::size_t>(d) + 1) throw Error("a d-simplex needs d+1 vertices");
  Mat m(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    if (vertices[static_cast<std::size_t>(k + 1)].size() != d) throw Error("simplex vertex dimension mismatch");
    m.col(k) = vertices[static_cast<std::size_t>(k + 1)] - vertices[0];
  }
  const Real det = std::abs(m.determinant());
  if (det <= geom_tol) throw Error("degenerate simplex");
  std::vector<Complex> mu;
  for (const auto& v : vertices) mu.push_back(Complex(0.0, -2.0 * pi) * pair(v, z));
  return det * detail::exp_divided_difference(mu);
}

struct MonteCarloResult {
  Complex value;
  Real std_error = 0.0;
};

/**
 * Stratified Monte Carlo over a pulling triangulation of P. Samples are
 * allocated to simplices in proportion to volume (largest remainder); the
 * stream is std::mt19937_64(seed) with explicit bit-level conversions, so
 * results are reproducible across platforms.
 */
inline MonteCarloResult monte_carlo_transform(const Polytope& p, const CVec& z, std::size_t samples,
                                              std::uint64_t seed) {
  if (samples < 1) throw Error("samples must be >= 1");
  if (static_cast<std::size_t>(z.size()) != p.dim()) throw Error("evaluation point dimension does not match polytope");
  const auto simplices = triangulate_polytope(p);
  std::vector<std::vector<Vec>> pts;
  std::vector<Real> vols;
  Real total = 0.0;
  for (const auto& s : simplices) {
    std::vector<Vec> q;
    for (auto i : s) q.push_back(p.vertex(i));
    vols.push_back(simplex_volume(q));
    total += vols.back();
    pts.push_back(std::move(q));
  }

  std::mt19937_64 rng(seed);
  const std::size_t ns = simplices.size();
  const std::size_t dim = p.dim();
  auto draw = [&](const std::vector<Vec>& q) {
    std::vector<Real> e(dim + 1);
    Real sum = 0.0;
    for (auto& x : e) {
      x = -std::log1p(-detail::unit_real(rng()));
      sum += x;
    }
    Vec pt = Vec::Zero(static_cast<Eigen::Index>(dim));
    for (std::size_t k = 0; k <= dim; ++k) pt += (e[k] / sum) * q[k];
    return std::exp(Complex(0.0, -2.0 * pi) * pair(pt, z));
  };

  MonteCarloResult out;
  if (samples < ns) {
    // Too few samples to stratify: pick simplices by volume instead.
    std::vector<Real> cdf(ns);
    Real acc = 0.0;
    for (std::size_t s = 0; s < ns; ++s) cdf[s] = (acc += vols[s] / total);
    Complex sum{0.0, 0.0};
    std::vector<Complex> vals;
    for (std::size_t k = 0; k < samples; ++k) {
      const Real u = detail::unit_real(rng());
      const auto s = static_cast<std::size_t>(std::lower_bound(cdf.begin(), cdf.end() - 1, u) - cdf.begin());
      vals.push_back(total * draw(pts[s]));
      sum += vals.back();
    }
    out.value = sum / static_cast<Real>(samples);
    if (samples > 1) {
      Real var = 0.0;
      for (const auto& v : vals) var += std::norm(v - out.value);
      out.std_error = std::sqrt(var / static_cast<Real>(samples - 1) / static_cast<Real>(samples));
    }
    return out;
  }

  std::vector<std::size_t> alloc(ns, 1);
  std::size_t left = samples - ns;
  std::vector<std::pair<Real, std::size_t>> rem;
  std::size_t used = 0;
  for (std::size_t s = 0; s < ns; ++s) {
    const Real share = static_cast<Real>(left) * vols[s] / total;
    const auto whole = static_cast<std::size_t>(std::floor(share));
    alloc[s] += whole;
    used += whole;
    rem.emplace_back(share - static_cast<Real>(whole), s);
  }
  std::stable_sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; used < left; ++k, ++used) ++alloc[rem[k % ns].second];

  Complex value{0.0, 0.0};
  Real variance = 0.0;
  for (std::size_t s = 0; s < ns; ++s) {
    std::vector<Complex> vals(alloc[s]);
    Complex mean{0.0, 0.0};
    for (auto& v : vals) {
      v = draw(pts[s]);
      mean += v;
    }
    mean /= static_cast<Real>(alloc[s]);
    value += vols[s] * mean;
    if (alloc[s] > 1) {
      Real ss = 0.0;
      for (const auto& v : vals) ss += std::norm(v - mean);
      variance += vols[s] * vols[s] * ss / static_cast<Real>(alloc[s] - 1) / static_cast<Real>(alloc[s]);
    }
  }
  out.value = value;
  out.std_error = std::sqrt(variance);
  return out;
}

}  // namespace brionlab
