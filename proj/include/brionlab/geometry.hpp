#pragma once
/**
 * @brief Convex polytopes given by vertices: facet and edge enumeration,
 * vertex tangent cones, simplicial triangulations of cones and of the body,
 * and plane/rotation helpers.
 *
 * Everything here works at desk scale (n <= 64 vertices, small d) with
 * brute-force combinatorics and an absolute tolerance of 1e-9.
 */

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "brionlab/types.hpp"

namespace brionlab {

struct Edge {
  std::size_t a = 0;
  std::size_t b = 0;  // a < b

  auto operator<=>(const Edge&) const = default;
};

/// Supporting hyperplane {x : <normal, x> = offset}; the polytope lies in <normal, x> <= offset.
struct Facet {
  Vec normal;
  Real offset = 0.0;
  std::vector<std::size_t> vertices;  // sorted
};

namespace detail {

/// Calls fn(indices) for every k-subset of {0,...,n-1} in lexicographic order.
template <class Fn>
void for_each_combination(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(static_cast<const std::vector<std::size_t>&>(idx));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Generalized cross product of the rows of a (d-1) x d matrix.
inline Vec cross_normal(const Mat& rows) {
  const Eigen::Index d = rows.cols();
  Vec n(d);
  if (d == 1) {
    n[0] = 1.0;
    return n;
  }
  Mat minor(d - 1, d - 1);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index c = 0, mc = 0; c < d; ++c) {
      if (c == i) continue;
      minor.col(mc++) = rows.col(c);
    }
    const Real sign = (i % 2 == 0) ? 1.0 : -1.0;
    n[i] = sign * minor.determinant();
  }
  return n;
}

/// Rank with singular values counted above tol * max(1, sigma_max).
inline Eigen::Index numeric_rank(const Mat& m, Real tol = geom_tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& s = svd.singularValues();
  const Real cut = tol * std::max<Real>(1.0, s[0]);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > cut) ++r;
  return r;
}

/// Dimension of the affine hull of the selected points.
inline Eigen::Index affine_dimension(const std::vector<Vec>& pts, const std::vector<std::size_t>& ids) {
  if (ids.size() <= 1) return 0;
  Mat m(static_cast<Eigen::Index>(ids.size() - 1), pts[ids[0]].size());
  for (std::size_t k = 1; k < ids.size(); ++k) m.row(static_cast<Eigen::Index>(k - 1)) = (pts[ids[k]] - pts[ids[0]]).transpose();
  return numeric_rank(m);
}

inline std::vector<std::size_t> sorted_intersection(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline void check_points(const std::vector<Vec>& vertices, std::size_t dim) {
  if (dim < 2) throw Error("dimension must be at least 2");
  if (vertices.size() < dim + 1) throw Error("need at least dim+1 vertices");
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (static_cast<std::size_t>(vertices[i].size()) != dim)
      throw Error("vertex " + std::to_string(i) + " has " + std::to_string(vertices[i].size()) +
                  " coordinates, expected " + std::to_string(dim));
    if (!vertices[i].allFinite()) throw Error("vertex " + std::to_string(i) + " has non-finite coordinates");
  }
  for (std::size_t i = 0; i < vertices.size(); ++i)
    for (std::size_t j = i + 1; j < vertices.size(); ++j)
      if ((vertices[i] - vertices[j]).lpNorm<Eigen::Infinity>() <= geom_tol)
        throw Error("vertices " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
  std::vector<std::size_t> all(vertices.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  if (affine_dimension(vertices, all) != static_cast<Eigen::Index>(dim))
    throw Error("degenerate vertex set: affine hull is not full-dimensional");
}

}  // namespace detail

/**
 * Enumerates facets by testing the hyperplane through every affinely
 * independent d-subset for one-sidedness; coplanar subsets are merged by
 * their incidence sets. Throws if some listed point is not a vertex.
 */
inline std::vector<Facet> enumerate_facets(const std::vector<Vec>& vertices, std::size_t dim) {
  detail::check_points(vertices, dim);
  const std::size_t n = vertices.size();
  const auto d = static_cast<Eigen::Index>(dim);
  std::map<std::vector<std::size_t>, Facet> found;

  detail::for_each_combination(n, dim, [&](const std::vector<std::size_t>& ids) {
    Mat rows(d - 1, d);
    Real scale = 1.0;
    for (Eigen::Index k = 1; k < d; ++k) {
      rows.row(k - 1) = (vertices[ids[static_cast<std::size_t>(k)]] - vertices[ids[0]]).transpose();
      scale *= rows.row(k - 1).norm();
    }
    Vec normal = detail::cross_normal(rows);
    const Real len = normal.norm();
    if (len <= geom_tol * std::max<Real>(1.0, scale)) return;
    normal /= len;
    Real offset = normal.dot(vertices[ids[0]]);
    bool below = true, above = true;
    for (std::size_t i = 0; i < n; ++i) {
      const Real s = normal.dot(vertices[i]) - offset;
      if (s > geom_tol) below = false;
      if (s < -geom_tol) above = false;
    }
    if (!below && !above) return;
    if (!below) {
      normal = -normal;
      offset = -offset;
    }
    std::vector<std::size_t> on;
    for (std::size_t i = 0; i < n; ++i)
      if (std::abs(normal.dot(vertices[i]) - offset) <= geom_tol) on.push_back(i);
    if (found.contains(on)) return;
    found.emplace(on, Facet{normal, offset, on});
  });

  std::vector<Facet> facets;
  facets.reserve(found.size());
  for (auto& [key, f] : found) facets.push_back(std::move(f));

  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Vec> normals;
    for (const auto& f : facets)
      if (std::binary_search(f.vertices.begin(), f.vertices.end(), i)) normals.push_back(f.normal);
    Mat m(static_cast<Eigen::Index>(normals.size()), d);
    for (std::size_t k = 0; k < normals.size(); ++k) m.row(static_cast<Eigen::Index>(k)) = normals[k].transpose();
    if (detail::numeric_rank(m) != d)
      throw Error("vertex " + std::to_string(i) + " is not extreme (lies inside the hull or on a face)");
  }
  return facets;
}

/// Pairs (i, j) whose common facet normals span a space of rank d-1.
inline std::vector<Edge> edges_from_facets(const std::vector<Facet>& facets, std::size_t n, std::size_t dim) {
  std::vector<Edge> edges;
  const auto d = static_cast<Eigen::Index>(dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      std::vector<const Vec*> normals;
      for (const auto& f : facets)
        if (std::binary_search(f.vertices.begin(), f.vertices.end(), i) &&
            std::binary_search(f.vertices.begin(), f.vertices.end(), j))
          normals.push_back(&f.normal);
      if (normals.size() < dim - 1) continue;
      Mat m(static_cast<Eigen::Index>(normals.size()), d);
      for (std::size_t k = 0; k < normals.size(); ++k) m.row(static_cast<Eigen::Index>(k)) = normals[k]->transpose();
      if (detail::numeric_rank(m) == d - 1) edges.push_back({i, j});
    }
  }
  return edges;
}

inline std::vector<Edge> derive_edges(const std::vector<Vec>& vertices, std::size_t dim) {
  return edges_from_facets(enumerate_facets(vertices, dim), vertices.size(), dim);
}

/// A validated full-dimensional convex polytope with its 1-skeleton. Immutable.
class Polytope {
 public:
  /// Validates the vertex set; derives edges when none are given, otherwise checks them against the hull.
  static Polytope from_vertices(std::vector<Vec> vertices, std::size_t dim,
                                std::optional<std::vector<Edge>> edges = std::nullopt) {
    Polytope p;
    p.dim_ = dim;
    p.facets_ = enumerate_facets(vertices, dim);
    auto derived = edges_from_facets(p.facets_, vertices.size(), dim);
    if (edges) {
      std::set<Edge> given;
      for (auto e : *edges) {
        if (e.a == e.b) throw Error("edge (" + std::to_string(e.a) + "," + std::to_string(e.b) + ") is a loop");
        if (e.a >= vertices.size() || e.b >= vertices.size())
          throw Error("edge (" + std::to_string(e.a) + "," + std::to_string(e.b) + ") references a missing vertex");
        if (e.a > e.b) std::swap(e.a, e.b);
        given.insert(e);
      }
      if (!std::equal(given.begin(), given.end(), derived.begin(), derived.end()))
        throw Error("edge list does not match the 1-skeleton of the convex hull");
    }
    p.vertices_ = std::move(vertices);
    p.edges_ = std::move(derived);
    p.neighbors_.assign(p.vertices_.size(), {});
    for (const auto& e : p.edges_) {
      p.neighbors_[e.a].push_back(e.b);
      p.neighbors_[e.b].push_back(e.a);
    }
    for (std::size_t v = 0; v < p.neighbors_.size(); ++v) {
      std::sort(p.neighbors_[v].begin(), p.neighbors_[v].end());
      if (p.neighbors_[v].size() < dim)
        throw Error("vertex " + std::to_string(v) + " has fewer than dim incident edges");
    }
    return p;
  }

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vertices_.size(); }
  const std::vector<Vec>& vertices() const { return vertices_; }
  const Vec& vertex(std::size_t i) const { return vertices_.at(i); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Facet>& facets() const { return facets_; }
  const std::vector<std::size_t>& neighbors(std::size_t v) const { return neighbors_.at(v); }

 private:
  Polytope() = default;

  std::size_t dim_ = 0;
  std::vector<Vec> vertices_;
  std::vector<Edge> edges_;
  std::vector<Facet> facets_;
  std::vector<std::vector<std::size_t>> neighbors_;
};

/// Image of P under x -> A x + c; the edge structure is carried over and re-validated.
inline Polytope affine_image(const Polytope& p, const Mat& a, const Vec& c) {
  std::vector<Vec> verts;
  verts.reserve(p.size());
  for (const auto& v : p.vertices()) verts.push_back(a * v + c);
  return Polytope::from_vertices(std::move(verts), p.dim(), p.edges());
}

inline Polytope translated(const Polytope& p, const Vec& c) {
  return affine_image(p, Mat::Identity(static_cast<Eigen::Index>(p.dim()), static_cast<Eigen::Index>(p.dim())), c);
}

inline Polytope rotated(const Polytope& p, const Mat& r) {
  return affine_image(p, r, Vec::Zero(static_cast<Eigen::Index>(p.dim())));
}

// ---------------------------------------------------------------------------
// Cones

struct TangentCone {
  std::size_t apex_index = 0;
  Vec apex;
  std::vector<Vec> generators;  // u - v for each neighbor u
};

struct SimplicialCone {
  Vec apex;
  std::vector<Vec> generators;  // exactly d
  Real det_abs = 0.0;
  std::vector<std::size_t> generator_ids;  // positions in the parent TangentCone, if any
};

inline Mat generator_matrix(const std::vector<Vec>& gens) {
  Mat w(gens.front().size(), static_cast<Eigen::Index>(gens.size()));
  for (std::size_t k = 0; k < gens.size(); ++k) w.col(static_cast<Eigen::Index>(k)) = gens[k];
  return w;
}

inline Real det_cone(const SimplicialCone& s) { return std::abs(generator_matrix(s.generators).determinant()); }

inline SimplicialCone make_simplicial_cone(Vec apex, std::vector<Vec> generators, std::vector<std::size_t> ids = {}) {
  if (generators.size() != static_cast<std::size_t>(apex.size()))
    throw Error("a simplicial cone needs exactly d generators");
  SimplicialCone s{std::move(apex), std::move(generators), 0.0, std::move(ids)};
  s.det_abs = det_cone(s);
  if (!(s.det_abs > 0.0)) throw Error("simplicial cone generators are linearly dependent");
  return s;
}

inline TangentCone tangent_cone(const Polytope& p, std::size_t v) {
  if (v >= p.size()) throw Error("vertex index " + std::to_string(v) + " out of range");
  TangentCone k{v, p.vertex(v), {}};
  for (auto u : p.neighbors(v)) k.generators.push_back(p.vertex(u) - p.vertex(v));
  return k;
}

namespace detail {

/// Direction a with <a, u> > 0 for every unit generator u, or nullopt if the cone is not pointed.
inline std::optional<Vec> pointing_direction(const std::vector<Vec>& unit) {
  const auto d = unit.front().size();
  auto works = [&](const Vec& a) {
    return std::all_of(unit.begin(), unit.end(), [&](const Vec& u) { return a.dot(u) > geom_tol; });
  };
  Vec a = Vec::Zero(d);
  for (const auto& u : unit) a += u;
  if (a.norm() > geom_tol) {
    a.normalize();
    if (works(a)) return a;
  }
  // Sum of the inward facet normals of the cone lies strictly inside the dual cone.
  a = Vec::Zero(d);
  for_each_combination(unit.size(), static_cast<std::size_t>(d - 1), [&](const std::vector<std::size_t>& ids) {
    Mat rows(d - 1, d);
    for (Eigen::Index k = 0; k < d - 1; ++k) rows.row(k) = unit[ids[static_cast<std::size_t>(k)]].transpose();
    Vec n = cross_normal(rows);
    if (n.norm() <= geom_tol) return;
    n.normalize();
    bool pos = true, neg = true;
    for (const auto& u : unit) {
      const Real s = n.dot(u);
      if (s < -geom_tol) pos = false;
      if (s > geom_tol) neg = false;
    }
    if (pos && !neg) a += n;
    if (neg && !pos) a -= n;
  });
  if (a.norm() > geom_tol) {
    a.normalize();
    if (works(a)) return a;
  }
  return std::nullopt;
}

}  // namespace detail

/**
 * Splits a pointed cone into simplicial cones using only its own generators.
 *
 * The unit generators are cut by the hyperplane <a, x> = 1; the crossing
 * points are placed in input order (the first d spanning ones form the
 * initial simplex) and each later point is joined to every boundary facet
 * it sees. Cells are lifted back to cones over the original generators.
 */
inline std::vector<SimplicialCone> triangulate_cone(const TangentCone& k) {
  const auto& gens = k.generators;
  const auto d = k.apex.size();
  const auto du = static_cast<std::size_t>(d);
  if (gens.size() < du) throw Error("cone has fewer generators than the dimension");
  for (const auto& g : gens)
    if (g.norm() <= geom_tol) throw Error("cone has a zero generator");
  if (detail::numeric_rank(generator_matrix(gens)) != d) throw Error("cone generators do not span the space");

  std::vector<Vec> unit;
  for (const auto& g : gens) unit.push_back(g.normalized());
  const auto a = detail::pointing_direction(unit);
  if (!a) throw Error("cone at vertex " + std::to_string(k.apex_index) + " is not pointed");

  std::vector<Vec> pts;
  for (const auto& u : unit) pts.push_back(u / a->dot(u));

  auto lift = [&](std::vector<std::size_t> ids) {
    std::sort(ids.begin(), ids.end());
    std::vector<Vec> g;
    for (auto i : ids) g.push_back(gens[i]);
    return make_simplicial_cone(k.apex, std::move(g), std::move(ids));
  };

  if (gens.size() == du) {
    std::vector<std::size_t> ids(du);
    for (std::size_t i = 0; i < du; ++i) ids[i] = i;
    return {lift(std::move(ids))};
  }

  // Initial simplex: first generators (in input order) that raise the rank.
  std::vector<std::size_t> initial;
  for (std::size_t i = 0; i < gens.size() && initial.size() < du; ++i) {
    auto trial = initial;
    trial.push_back(i);
    std::vector<Vec> g;
    for (auto j : trial) g.push_back(pts[j]);
    if (detail::numeric_rank(generator_matrix(g)) == static_cast<Eigen::Index>(trial.size())) initial = trial;
  }
  std::vector<std::vector<std::size_t>> cells{initial};

  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (std::find(initial.begin(), initial.end(), i) != initial.end()) continue;
    // Boundary facets: (d-1)-subsets used by exactly one cell; remember the opposite point.
    std::map<std::vector<std::size_t>, std::pair<int, std::size_t>> faces;
    for (const auto& c : cells) {
      for (std::size_t drop = 0; drop < du; ++drop) {
        std::vector<std::size_t> f;
        for (std::size_t j = 0; j < du; ++j)
          if (j != drop) f.push_back(c[j]);
        std::sort(f.begin(), f.end());
        auto& entry = faces[f];
        ++entry.first;
        entry.second = c[drop];
      }
    }
    std::vector<std::vector<std::size_t>> added;
    for (const auto& [f, entry] : faces) {
      if (entry.first != 1) continue;
      Mat rows(d - 1, d);
      for (Eigen::Index r = 0; r < d - 1; ++r) rows.row(r) = pts[f[static_cast<std::size_t>(r)]].transpose();
      Vec n = detail::cross_normal(rows);
      n.normalize();
      if (n.dot(pts[entry.second]) < 0.0) n = -n;
      if (n.dot(pts[i]) < -geom_tol) {
        auto cell = f;
        cell.push_back(i);
        added.push_back(std::move(cell));
      }
    }
    for (auto& c : added) cells.push_back(std::move(c));
  }

  std::vector<SimplicialCone> out;
  out.reserve(cells.size());
  for (auto& c : cells) out.push_back(lift(std::move(c)));
  return out;
}

// ---------------------------------------------------------------------------
// Body triangulation

using SimplexIds = std::vector<std::size_t>;

namespace detail {

inline void pull_face(const Polytope& p, const std::vector<std::size_t>& face, Eigen::Index k,
                      std::vector<SimplexIds>& out, SimplexIds& prefix) {
  if (k == 0) {
    auto s = prefix;
    s.push_back(face.front());
    out.push_back(std::move(s));
    return;
  }
  const std::size_t apex = face.front();
  std::set<std::vector<std::size_t>> subfaces;
  for (const auto& f : p.facets()) {
    auto s = sorted_intersection(face, f.vertices);
    if (s.size() < static_cast<std::size_t>(k) || s == face) continue;
    if (affine_dimension(p.vertices(), s) == k - 1) subfaces.insert(std::move(s));
  }
  prefix.push_back(apex);
  for (const auto& s : subfaces) {
    if (std::binary_search(s.begin(), s.end(), apex)) continue;
    pull_face(p, s, k - 1, out, prefix);
  }
  prefix.pop_back();
}

}  // namespace detail

/// Pulling triangulation: cone from the lowest-index vertex over the recursively triangulated facets missing it.
inline std::vector<SimplexIds> triangulate_polytope(const Polytope& p) {
  std::vector<std::size_t> all(p.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::vector<SimplexIds> out;
  SimplexIds prefix;
  detail::pull_face(p, all, static_cast<Eigen::Index>(p.dim()), out, prefix);
  return out;
}

inline Real simplex_volume(const std::vector<Vec>& pts) {
  const auto d = static_cast<Eigen::Index>(pts.size() - 1);
  Mat m(pts[0].size(), d);
  for (Eigen::Index k = 0; k < d; ++k) m.col(k) = pts[static_cast<std::size_t>(k + 1)] - pts[0];
  Real fact = 1.0;
  for (Eigen::Index k = 2; k <= d; ++k) fact *= static_cast<Real>(k);
  return std::abs(m.determinant()) / fact;
}

inline Real volume(const Polytope& p) {
  Real v = 0.0;
  for (const auto& s : triangulate_polytope(p)) {
    std::vector<Vec> pts;
    for (auto i : s) pts.push_back(p.vertex(i));
    v += simplex_volume(pts);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Planes

struct Plane2 {
  Vec e;
  Vec f;

  /// Checks orthonormality within 1e-12.
  static Plane2 make(Vec e, Vec f) {
    if (e.size() != f.size() || e.size() < 2) throw Error("plane vectors must share a dimension >= 2");
    if (std::abs(e.dot(e) - 1.0) > 1e-12 || std::abs(f.dot(f) - 1.0) > 1e-12 || std::abs(e.dot(f)) > 1e-12)
      throw Error("plane basis is not orthonormal");
    return Plane2{std::move(e), std::move(f)};
  }

  /// Gram-Schmidt on two spanning vectors.
  static Plane2 orthonormalized(const Vec& v1, const Vec& v2) {
    if (v1.size() != v2.size() || v1.size() < 2) throw Error("plane vectors must share a dimension >= 2");
    const Real n1 = v1.norm();
    if (n1 <= geom_tol) throw Error("plane vectors have rank < 2");
    Vec e = v1 / n1;
    Vec f = v2 - e.dot(v2) * e;
    f -= e.dot(f) * e;
    const Real n2 = f.norm();
    if (n2 <= geom_tol * std::max<Real>(1.0, v2.norm())) throw Error("plane vectors have rank < 2");
    return Plane2{e, f / n2};
  }

  static Plane2 coordinate(std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    return Plane2{Vec::Unit(d, 0), Vec::Unit(d, 1)};
  }

  std::size_t dim() const { return static_cast<std::size_t>(e.size()); }
};

/// Orthogonal R with R e = e1, R f = e2; remaining rows from Gram-Schmidt on the standard basis.
inline Mat rotation_to_plane(const Plane2& plane) {
  const auto d = plane.e.size();
  std::vector<Vec> rows{plane.e, plane.f};
  for (Eigen::Index k = 0; k < d && static_cast<Eigen::Index>(rows.size()) < d; ++k) {
    Vec v = Vec::Unit(d, k);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& r : rows) v -= r.dot(v) * r;
    const Real n = v.norm();
    if (n > 1e-6) rows.push_back(v / n);
  }
  Mat r(d, d);
  for (Eigen::Index i = 0; i < d; ++i) r.row(i) = rows[static_cast<std::size_t>(i)].transpose();
  return r;
}

struct EdgeCheck {
  bool ok = true;
  std::vector<Edge> offending;
};

/// An edge offends when its direction is (numerically) orthogonal to the plane.
inline EdgeCheck edge_orthogonality_check(const Polytope& p, const Plane2& plane) {
  if (plane.dim() != p.dim()) throw Error("plane dimension does not match polytope");
  constexpr Real tau = 1e-9;
  EdgeCheck r;
  for (const auto& e : p.edges()) {
    const Vec w = p.vertex(e.b) - p.vertex(e.a);
    const Real pe = w.dot(plane.e), pf = w.dot(plane.f);
    if (!(pe * pe + pf * pf > tau * tau * w.squaredNorm())) r.offending.push_back(e);
  }
  r.ok = r.offending.empty();
  return r;
}

}  // namespace brionlab
