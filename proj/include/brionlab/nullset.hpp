#pragma once
/**
 * @brief Behaviour of the transform on complex circles
 * z(t) = alpha cos(t) e + alpha sin(t) f.
 *
 * Clearing the Brion denominators along the circle turns the transform into
 * F(t) = sum_v p_v(t) exp(-2 pi i <v, z(t)>) with trigonometric polynomials
 * p_v. Expanding the exponentials with Jacobi-Anger gives the Fourier
 * coefficients of F as finite Bessel sums, and the large-n behaviour of those
 * sums is dominated by the vertex of largest in-plane radius.
 */

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <thread>
#include <vector>

#include "brionlab/bessel.hpp"
#include "brionlab/geometry.hpp"
#include "brionlab/transform.hpp"
#include "brionlab/trigpoly.hpp"

namespace brionlab {

struct CircleSpec {
  Plane2 plane;
  Complex alpha;

  static CircleSpec make(Plane2 plane, Complex alpha) {
    if (alpha == Complex(0.0, 0.0)) throw Error("circle radius alpha must be nonzero");
    return CircleSpec{std::move(plane), alpha};
  }
};

inline CVec circle_point(const CircleSpec& spec, Real t) {
  const auto d = spec.plane.e.size();
  CVec z(d);
  const Complex a = spec.alpha * std::cos(t), b = spec.alpha * std::sin(t);
  for (Eigen::Index k = 0; k < d; ++k) z[k] = a * spec.plane.e[k] + b * spec.plane.f[k];
  return z;
}

struct PolarVertex {
  Real r = 0.0;
  Real phi = 0.0;  // in (-pi, pi]
  Vec tail;        // coordinates 3..d
};

inline PolarVertex polar_vertex(const Vec& v) {
  if (v.size() < 2) throw Error("polar form needs at least two coordinates");
  PolarVertex p;
  p.r = std::hypot(v[0], v[1]);
  p.phi = p.r == 0.0 ? 0.0 : std::atan2(v[1], v[0]);
  if (p.phi == -pi) p.phi = pi;
  p.tail = v.tail(v.size() - 2);
  return p;
}

/// <w, z(t)> = c_{-1} e^{-it} + c_1 e^{it}.
inline TrigPoly factor_poly(const Vec& w, const CircleSpec& spec) {
  const Real pe = w.dot(spec.plane.e), pf = w.dot(spec.plane.f);
  constexpr Real tau = 1e-9;
  if (!(pe * pe + pf * pf > tau * tau * w.squaredNorm()))
    throw Error("edge direction is orthogonal to the circle plane");
  return TrigPoly::from_map({{1, spec.alpha * Complex(pe, -pf) * 0.5}, {-1, spec.alpha * Complex(pe, pf) * 0.5}});
}

/**
 * Everything the circle identities need for one polytope and one circle:
 * the cone decomposition, p(t), and the division-free p_v(t).
 */
struct CircleModel {
  CircleSpec spec;
  ConeDecomposition cones;
  TrigPoly p;
  std::vector<TrigPoly> pv;
  std::vector<TrigPoly> vertex_factor_product;  // prod_j prod_l <w^v_{j,l}, z(t)>

  int generator_count() const { return static_cast<int>(cones.cone_count() * cones.dim); }

  /// N: largest degree among the p_v.
  int max_pv_degree() const {
    int n = 0;
    for (const auto& q : pv) n = std::max(n, q.degree());
    return n;
  }
};

inline void require_plane_ok(const Polytope& p, const Plane2& plane) {
  const auto chk = edge_orthogonality_check(p, plane);
  if (!chk.ok) {
    std::string msg = "plane is orthogonal to edges:";
    for (const auto& e : chk.offending) msg += " (" + std::to_string(e.a) + "," + std::to_string(e.b) + ")";
    throw Error(msg);
  }
}

inline CircleModel build_circle_model(const Polytope& poly, const CircleSpec& spec) {
  if (spec.plane.dim() != poly.dim()) throw Error("plane dimension does not match polytope");
  require_plane_ok(poly, spec.plane);
  CircleModel m{spec, decompose(poly), TrigPoly::constant(1.0), {}, {}};
  const std::size_t n = poly.size();

  // Per vertex: product over each cone, and the cone-by-cone factor products.
  std::vector<std::vector<TrigPoly>> cone_products(n);
  for (std::size_t v = 0; v < n; ++v) {
    TrigPoly all = TrigPoly::constant(1.0);
    for (const auto& s : m.cones.cones[v]) {
      TrigPoly c = TrigPoly::constant(1.0);
      for (const auto& w : s.generators) c = trig_mul(c, factor_poly(w, spec));
      all = trig_mul(all, c);
      cone_products[v].push_back(std::move(c));
    }
    m.vertex_factor_product.push_back(std::move(all));
    m.p = trig_mul(m.p, m.vertex_factor_product.back());
  }

  for (std::size_t v = 0; v < n; ++v) {
    TrigPoly q = TrigPoly::constant(1.0);
    for (std::size_t y = 0; y < n; ++y)
      if (y != v) q = trig_mul(q, m.vertex_factor_product[y]);
    TrigPoly inner;
    const auto& cones = m.cones.cones[v];
    for (std::size_t j = 0; j < cones.size(); ++j) {
      TrigPoly term = TrigPoly::constant(cones[j].det_abs);
      for (std::size_t k = 0; k < cones.size(); ++k)
        if (k != j) term = trig_mul(term, cone_products[v][k]);
      inner = inner + term;
    }
    m.pv.push_back(trig_mul(q, inner));
  }
  return m;
}

/// p(t): product of every cone-generator factor <w, z(t)>.
inline TrigPoly big_p(const Polytope& poly, const CircleSpec& spec) { return build_circle_model(poly, spec).p; }

/// p_v(t) = q_v(t) sum_j det K_{v,j} prod_{k != j} prod_l <w^v_{k,l}, z(t)>.
inline TrigPoly p_v_poly(const Polytope& poly, const CircleSpec& spec, std::size_t v) {
  if (v >= poly.size()) throw Error("vertex index out of range");
  return build_circle_model(poly, spec).pv[v];
}

/// F(t) = sum_v p_v(t) exp(-2 pi i <v, z(t)>).
inline Complex series_F(const CircleModel& m, Real t) {
  const CVec z = circle_point(m.spec, t);
  Complex s{0.0, 0.0};
  for (std::size_t v = 0; v < m.pv.size(); ++v)
    s += m.pv[v](t) * std::exp(Complex(0.0, -2.0 * pi) * pair(m.cones.vertices[v], z));
  return s;
}

inline Complex series_F(const Polytope& poly, const CircleSpec& spec, Real t) {
  return series_F(build_circle_model(poly, spec), t);
}

/// Both sides of F(t) = (2 pi i)^d p(t) transform(z(t)) at one t.
struct CancellationCheck {
  Complex series;   // F(t)
  Complex cleared;  // (2 pi i)^d p(t) transform(z(t))
  Real scale = 0.0; // max(|F|, |cleared|, sum_v sum_k |c_{v,k}| |exp(-2 pi i <v, z(t)>)|)

  Real rel_error() const { return scale > 0.0 ? std::abs(series - cleared) / scale : 0.0; }
};

/**
 * Near zeros of the factors, p(t) and the p_v(t) are far smaller than their
 * coefficients, and evaluating from double coefficients is only good to
 * about 1e-16 * sum_k |c_k|. The error is therefore measured against that
 * evaluation bound as well as against both sides.
 */
inline CancellationCheck cancellation_check(const CircleModel& m, Real t) {
  const CVec z = circle_point(m.spec, t);
  CancellationCheck c;
  Real terms = 0.0;
  c.series = 0.0;
  for (std::size_t v = 0; v < m.pv.size(); ++v) {
    const Complex e = std::exp(Complex(0.0, -2.0 * pi) * pair(m.cones.vertices[v], z));
    c.series += m.pv[v](t) * e;
    Real coeffs = 0.0;
    for (int k = -m.pv[v].degree(); k <= m.pv[v].degree(); ++k) coeffs += std::abs(m.pv[v][k]);
    terms += coeffs * std::abs(e);
  }
  c.cleared = m.cones.two_pi_i_pow_d * m.p(t) * brion_transform(m.cones, z).value;
  c.scale = std::max({std::abs(c.series), std::abs(c.cleared), terms});
  return c;
}

// ---------------------------------------------------------------------------
// Bessel form of the Fourier coefficients

enum class PhaseConvention { power_of_i, exponential };

/// i^k exactly, or e^{ik pi/2} through the exponential.
inline Complex quarter_turn(int k, PhaseConvention c) {
  if (c == PhaseConvention::exponential) return std::exp(I * (static_cast<Real>(k) * pi / 2.0));
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

inline bool is_coordinate_plane(const Plane2& plane) {
  const auto d = plane.e.size();
  return (plane.e - Vec::Unit(d, 0)).norm() <= 1e-12 && (plane.f - Vec::Unit(d, 1)).norm() <= 1e-12;
}

namespace detail {

inline void require_coordinate_plane(const CircleModel& m) {
  if (!is_coordinate_plane(m.spec.plane))
    throw Error("the Bessel identity needs the circle in the span of the first two coordinates; rotate first");
}

inline Complex bessel_argument(const CircleModel& m, Real r) {
  const Complex z = 2.0 * pi * m.spec.alpha * r;
  if (std::abs(z) > bessel_max_arg) throw Error("|2 pi alpha r_v| exceeds the supported Bessel range (64)");
  return z;
}

}  // namespace detail

/**
 * sum_v e^{-in phi_v} sum_{k=-N}^{N} c_{v,k} J_{n-k}(2 pi alpha r_v) i^k e^{ik phi_v}.
 * Equals i^n times the n-th Fourier coefficient of F.
 */
inline Complex lemma_lhs(const CircleModel& m, int n, PhaseConvention conv = PhaseConvention::power_of_i) {
  detail::require_coordinate_plane(m);
  Complex total{0.0, 0.0};
  for (std::size_t v = 0; v < m.pv.size(); ++v) {
    const auto pol = polar_vertex(m.cones.vertices[v]);
    const Complex arg = detail::bessel_argument(m, pol.r);
    const int nv = m.pv[v].degree();
    Complex inner{0.0, 0.0};
    for (int k = -nv; k <= nv; ++k) {
      const Complex c = m.pv[v][k];
      if (c == Complex(0.0, 0.0)) continue;
      inner += c * bessel_j(n - k, arg) * quarter_turn(k, conv) * std::exp(I * (static_cast<Real>(k) * pol.phi));
    }
    total += std::exp(-I * (static_cast<Real>(n) * pol.phi)) * inner;
  }
  return total;
}

inline Complex lemma_lhs(const Polytope& poly, const CircleSpec& spec, int n) {
  return lemma_lhs(build_circle_model(poly, spec), n);
}

/// sum_v sum_k c_{v,k} e^{-i(n-k)(phi_v + pi/2)} J_{n-k}(2 pi alpha r_v): the n-th Fourier coefficient of F.
inline Complex bessel_coefficient(const CircleModel& m, int n) {
  detail::require_coordinate_plane(m);
  Complex total{0.0, 0.0};
  for (std::size_t v = 0; v < m.pv.size(); ++v) {
    const auto pol = polar_vertex(m.cones.vertices[v]);
    const Complex arg = detail::bessel_argument(m, pol.r);
    const int nv = m.pv[v].degree();
    for (int k = -nv; k <= nv; ++k) {
      const Complex c = m.pv[v][k];
      if (c == Complex(0.0, 0.0)) continue;
      total += c * std::exp(-I * (static_cast<Real>(n - k) * (pol.phi + pi / 2.0))) * bessel_j(n - k, arg);
    }
  }
  return total;
}

/// FFT of t -> F(t). Needs M >= 4 (deg p + n_max + 1); M then doubles until the tail is negligible.
inline FourierTable fourier_coeffs(const CircleModel& m, int n_max, int grid = 512) {
  if (grid < 4 || (grid & (grid - 1)) != 0) throw Error("FFT grid must be a power of two");
  if (grid < 4 * (m.p.degree() + n_max + 1))
    throw Error("FFT grid " + std::to_string(grid) + " too small for deg p = " + std::to_string(m.p.degree()) +
                " and n_max = " + std::to_string(n_max));
  return fourier_table_adaptive([&](Real t) { return series_F(m, t); }, grid);
}

struct LemmaRow {
  int n = 0;
  Complex lhs;           // Bessel double sum
  Complex fft;           // a_n
  Real mismatch = 0.0;   // |lhs - i^n a_n|
  Real coefficient_mismatch = 0.0;  // |bessel_coefficient(n) - a_n|
};

struct LemmaReport {
  int degree_p = 0;
  int max_degree = 0;  // N
  int grid = 0;
  std::vector<LemmaRow> rows;
  Real max_mismatch = 0.0;
  std::vector<TrigPoly> coefficients;  // c_{v,k} per vertex
};

/// Rotates P so the plane becomes span(e1, e2), then compares the Bessel sum with the FFT of F for |n| <= n_max.
inline LemmaReport lemma_check(const Polytope& poly, const CircleSpec& spec, int n_max, int grid = 512) {
  require_plane_ok(poly, spec.plane);
  const Polytope rot = rotated(poly, rotation_to_plane(spec.plane));
  const auto m = build_circle_model(rot, CircleSpec::make(Plane2::coordinate(poly.dim()), spec.alpha));
  const auto table = fourier_coeffs(m, n_max, grid);
  LemmaReport r;
  r.degree_p = m.p.degree();
  r.max_degree = m.max_pv_degree();
  r.grid = table.grid;
  r.coefficients = m.pv;
  for (int n = -n_max; n <= n_max; ++n) {
    LemmaRow row{n, lemma_lhs(m, n), table.at(n), 0.0, 0.0};
    row.mismatch = std::abs(row.lhs - quarter_turn(n, PhaseConvention::power_of_i) * row.fft);
    row.coefficient_mismatch = std::abs(bessel_coefficient(m, n) - row.fft);
    r.max_mismatch = std::max({r.max_mismatch, row.mismatch, row.coefficient_mismatch});
    r.rows.push_back(row);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Dominant-term probe

inline std::vector<Real> plane_radii(const Polytope& p, const Plane2& plane) {
  std::vector<Real> r;
  for (const auto& v : p.vertices()) r.push_back(std::hypot(v.dot(plane.e), v.dot(plane.f)));
  return r;
}

struct RadiusOrder {
  std::size_t top = 0;
  Real r_top = 0.0;
  Real r_second = 0.0;
  Real margin() const { return r_top > 0.0 ? (r_top - r_second) / r_top : 0.0; }
};

inline RadiusOrder radius_order(const std::vector<Real>& r) {
  RadiusOrder o;
  o.r_top = -1.0;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i] > o.r_top) {
      o.r_top = r[i];
      o.top = i;
    }
  o.r_second = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (i != o.top) o.r_second = std::max(o.r_second, r[i]);
  return o;
}

inline constexpr Real probe_margin = 0.05;

namespace detail {

inline Real margin_after(const Polytope& p, const Plane2& plane, const Vec& shift) {
  std::vector<Real> r;
  for (const auto& v : p.vertices()) {
    const Vec w = v + shift;
    r.push_back(std::hypot(w.dot(plane.e), w.dot(plane.f)));
  }
  return radius_order(r).margin();
}

/// Indices of the vertices whose projections are corners of the projected hull, counter-clockwise.
inline std::vector<std::size_t> projected_hull(const std::vector<std::pair<Real, Real>>& pts) {
  std::vector<std::size_t> idx(pts.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return pts[a] < pts[b]; });
  auto cross = [&](std::size_t o, std::size_t a, std::size_t b) {
    return (pts[a].first - pts[o].first) * (pts[b].second - pts[o].second) -
           (pts[a].second - pts[o].second) * (pts[b].first - pts[o].first);
  };
  std::vector<std::size_t> h(2 * idx.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], idx[i]) <= geom_tol) --k;
    h[k++] = idx[i];
  }
  for (std::size_t i = idx.size() - 1, lo = k + 1; i-- > 0;) {
    while (k >= lo && cross(h[k - 2], h[k - 1], idx[i]) <= geom_tol) --k;
    h[k++] = idx[i];
  }
  h.resize(k > 1 ? k - 1 : k);
  return h;
}

}  // namespace detail

/**
 * Translates P inside the plane so that a single vertex has the largest
 * in-plane radius, ahead of the rest by at least 5%.
 *
 * First tries P + tau u0, u0 the in-plane direction of the lowest-index vertex
 * of maximal radius, with tau doubling from the diameter. The relative margin
 * along that ray decays like gap / tau, so when it never reaches 5% the origin
 * is instead placed behind a corner u of the projected hull, on the bisector
 * of its normal cone at distance s; the (u, s) with the widest margin wins.
 */
inline Polytope normalize_for_probe(const Polytope& p, const Plane2& plane) {
  const auto r = plane_radii(p, plane);
  if (radius_order(r).margin() >= probe_margin) return p;

  Real spread = 0.0, diameter = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      const Vec dv = p.vertex(i) - p.vertex(j);
      spread = std::max(spread, std::hypot(dv.dot(plane.e), dv.dot(plane.f)));
      diameter = std::max(diameter, dv.norm());
    }
  if (spread <= geom_tol) throw Error("all vertices project to a single point of the plane");

  const Real r_max = *std::max_element(r.begin(), r.end());
  std::size_t u0 = 0;
  while (r[u0] < r_max * (1.0 - 1e-12)) ++u0;
  Vec dir;
  if (r_max <= geom_tol) {
    dir = plane.e;  // every vertex sits on the plane's orthogonal complement through 0
  } else {
    const Vec& v = p.vertex(u0);
    dir = (v.dot(plane.e) * plane.e + v.dot(plane.f) * plane.f) / r_max;
  }
  Real step = diameter;
  for (int k = 0; k < 20; ++k, step *= 2.0)
    if (detail::margin_after(p, plane, step * dir) >= probe_margin) return translated(p, step * dir);

  std::vector<std::pair<Real, Real>> proj;
  for (const auto& v : p.vertices()) proj.emplace_back(v.dot(plane.e), v.dot(plane.f));
  const auto hull = detail::projected_hull(proj);
  Real best = -1.0;
  Vec best_shift;
  std::vector<std::size_t> order = hull;
  std::sort(order.begin(), order.end());
  for (auto u : order) {
    const auto pos = static_cast<std::size_t>(std::find(hull.begin(), hull.end(), u) - hull.begin());
    const auto prev = hull[(pos + hull.size() - 1) % hull.size()], next = hull[(pos + 1) % hull.size()];
    // Outward normals of the two hull edges at u (counter-clockwise order).
    auto outward = [&](std::size_t a, std::size_t b) {
      const Real dx = proj[b].first - proj[a].first, dy = proj[b].second - proj[a].second;
      const Real len = std::hypot(dx, dy);
      return std::pair<Real, Real>{dy / len, -dx / len};
    };
    const auto n1 = outward(prev, u), n2 = outward(u, next);
    Real bx = n1.first + n2.first, by = n1.second + n2.second;
    const Real bl = std::hypot(bx, by);
    if (bl <= geom_tol) continue;
    bx /= bl;
    by /= bl;
    const Vec bis = bx * plane.e + by * plane.f;
    const Vec pu = proj[u].first * plane.e + proj[u].second * plane.f;
    for (int k = -8; k <= 8; ++k) {
      const Vec shift = std::ldexp(spread, k) * bis - pu;
      const Real m = detail::margin_after(p, plane, shift);
      if (m > best + 1e-12) {
        best = m;
        best_shift = shift;
      }
    }
  }
  if (best < probe_margin) throw Error("cannot make the largest in-plane radius unique by translation");
  return translated(p, best_shift);
}

struct ProbeRow {
  int n = 0;
  Complex scaled;        // e^{in phi_u} (n-N)! 2^{n-N} / (2 pi alpha r_u)^{n-N} * lhs(n)
  Complex exact_scaled;  // e^{in phi_u} lhs(n) / J_{n-N}(2 pi alpha r_u)
};

struct ProbeReport {
  std::size_t u = 0;
  int max_degree = 0;  // N
  Real r_u = 0.0;
  Real r_second = 0.0;
  Real phi_u = 0.0;
  Complex c_uN;
  Complex target;  // c_{u,N} i^N e^{iN phi_u}
  std::vector<ProbeRow> rows;

  Real final_deviation() const { return rows.empty() ? 0.0 : std::abs(rows.back().scaled - target); }
  Real final_exact_deviation() const { return rows.empty() ? 0.0 : std::abs(rows.back().exact_scaled - target); }
};

/// Needs the circle in coordinate position and a unique radius maximizer (see normalize_for_probe).
inline ProbeReport dominant_probe(const CircleModel& m, int n_max) {
  detail::require_coordinate_plane(m);
  std::vector<Real> r;
  for (const auto& v : m.cones.vertices) r.push_back(polar_vertex(v).r);
  const auto order = radius_order(r);
  if (order.margin() < probe_margin) throw Error("largest vertex radius is not unique by a 5% margin");

  ProbeReport rep;
  rep.u = order.top;
  rep.r_u = order.r_top;
  rep.r_second = order.r_second;
  rep.phi_u = polar_vertex(m.cones.vertices[rep.u]).phi;
  rep.max_degree = m.max_pv_degree();
  const int big_n = rep.max_degree;
  rep.c_uN = m.pv[rep.u][big_n];
  Real cmax = 0.0;
  for (const auto& q : m.pv) cmax = std::max(cmax, q.max_abs());
  if (std::abs(rep.c_uN) <= 1e-12 * cmax) throw Error("c_{u,N} vanishes: degenerate configuration");
  rep.target = rep.c_uN * quarter_turn(big_n, PhaseConvention::power_of_i) *
               std::exp(I * (static_cast<Real>(big_n) * rep.phi_u));

  const Complex arg = detail::bessel_argument(m, rep.r_u);
  for (int n = big_n + 1; n <= n_max; ++n) {
    const int k = n - big_n;
    const Complex lhs = lemma_lhs(m, n);
    const Complex rot = std::exp(I * (static_cast<Real>(n) * rep.phi_u));
    // (k)! 2^k / arg^k = exp(-log((arg/2)^k / k!))
    const Complex scale = std::exp(-log_leading_term(k, arg));
    rep.rows.push_back({n, rot * scale * lhs, rot * lhs / bessel_j(k, arg)});
  }
  return rep;
}

inline ProbeReport dominant_probe(const Polytope& p, const CircleSpec& spec, int n_max) {
  return dominant_probe(build_circle_model(p, spec), n_max);
}

// ---------------------------------------------------------------------------
// Circle scans

struct ScanRow {
  Complex alpha;
  Real min_modulus = 0.0;
  Real argmin_t = 0.0;
  bool flagged = false;  // minimum below 1e-10; needs a closer look, never reported as a zero
};

/// Uniform samples t_j = -pi + 2 pi (j + 1/2) / M, j = 0..M-1.
inline Real scan_abscissa(int j, int grid) { return -pi + 2.0 * pi * (static_cast<Real>(j) + 0.5) / grid; }

/// min_t |transform(z(t))| for each alpha; rows sorted by (Re alpha, Im alpha).
inline std::vector<ScanRow> circle_scan(const Polytope& p, const Plane2& plane, std::vector<Complex> alphas,
                                        int t_grid, unsigned threads = 0) {
  if (t_grid < 1) throw Error("t-grid must be positive");
  require_plane_ok(p, plane);
  for (const auto& a : alphas)
    if (a == Complex(0.0, 0.0)) throw Error("circle radius alpha must be nonzero");
  std::stable_sort(alphas.begin(), alphas.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  const auto cones = decompose(p);
  std::vector<ScanRow> rows(alphas.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < alphas.size(); i = next++) {
      const auto spec = CircleSpec::make(plane, alphas[i]);
      ScanRow row{alphas[i], std::numeric_limits<Real>::infinity(), 0.0, false};
      for (int j = 0; j < t_grid; ++j) {
        const Real t = scan_abscissa(j, t_grid);
        const Real v = std::abs(brion_transform(cones, circle_point(spec, t)).value);
        if (v < row.min_modulus) {
          row.min_modulus = v;
          row.argmin_t = t;
        }
      }
      row.flagged = row.min_modulus < 1e-10;
      rows[i] = row;
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, alphas.size())));
  std::vector<std::jthread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(work);
  work();
  return rows;
}

}  // namespace brionlab
