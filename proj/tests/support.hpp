#pragma once

#include <random>
#include <vector>

#include "brionlab/brionlab.hpp"

namespace fixtures {

using namespace brionlab;

inline Vec vec(std::initializer_list<Real> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (Real x : xs) v[k++] = x;
  return v;
}

inline Polytope square() { return Polytope::from_vertices({vec({0, 0}), vec({1, 0}), vec({1, 1}), vec({0, 1})}, 2); }

inline Polytope triangle() {
  return Polytope::from_vertices({vec({0, 0}), vec({2, 0.5}), vec({0.3, 1.7})}, 2);
}

inline Polytope box(const Vec& lo, const Vec& hi) {
  const auto d = lo.size();
  std::vector<Vec> pts;
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    Vec v(d);
    for (Eigen::Index k = 0; k < d; ++k) v[k] = (mask >> k) & 1 ? hi[k] : lo[k];
    pts.push_back(v);
  }
  return Polytope::from_vertices(pts, static_cast<std::size_t>(d));
}

inline Polytope cube() { return box(Vec::Zero(3), Vec::Ones(3)); }

inline Polytope pyramid() {
  return Polytope::from_vertices({vec({0, 0, 0}), vec({1, 0, 0}), vec({1, 1, 0}), vec({0, 1, 0}), vec({0.5, 0.5, 1})},
                                 3);
}

/// A plane in R^3 not orthogonal to any coordinate axis.
inline Plane2 generic_plane3() { return Plane2::orthonormalized(vec({1.0, 0.3, 0.2}), vec({0.1, 1.0, -0.4})); }

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  Real uniform(Real a, Real b) { return std::uniform_real_distribution<Real>(a, b)(gen); }
  Vec point(Eigen::Index d, Real a, Real b) {
    Vec v(d);
    for (Eigen::Index k = 0; k < d; ++k) v[k] = uniform(a, b);
    return v;
  }
  CVec frequency(Eigen::Index d, Real re = 2.0, Real im = 0.5) {
    CVec z(d);
    for (Eigen::Index k = 0; k < d; ++k) z[k] = Complex(uniform(-re, re), uniform(-im, im));
    return z;
  }
  /// Random orthogonal matrix with determinant +1.
  Mat rotation(Eigen::Index d) {
    Mat a(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) a(i, j) = uniform(-1, 1);
    Mat q = Eigen::HouseholderQR<Mat>(a).householderQ();
    if (q.determinant() < 0) q.col(0) *= -1.0;
    return q;
  }
  /// Simplex with volume bounded away from zero.
  std::vector<Vec> simplex(Eigen::Index d) {
    while (true) {
      std::vector<Vec> pts;
      for (Eigen::Index k = 0; k <= d; ++k) pts.push_back(point(d, -1, 1));
      if (simplex_volume(pts) > 0.05) return pts;
    }
  }
};

inline Real rel(Complex a, Complex b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

}  // namespace fixtures

namespace fixtures {

/// The seeded random triangle used by the circle-identity checks.
inline brionlab::Polytope random_triangle(std::uint64_t seed = 2718) {
  Rng rng(seed);
  return brionlab::Polytope::from_vertices(rng.simplex(2), 2);
}

}  // namespace fixtures
