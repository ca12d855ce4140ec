#include <gtest/gtest.h>

#include "support.hpp"

using namespace brionlab;
using namespace fixtures;

namespace {

CircleModel rotated_model(const Polytope& p, const Plane2& plane, Complex alpha) {
  const auto coord = Plane2::coordinate(p.dim());
  return build_circle_model(rotated(p, rotation_to_plane(plane)), CircleSpec::make(coord, alpha));
}

}  // namespace

TEST(CircleSpec, RejectsZeroAlpha) {
  EXPECT_THROW(CircleSpec::make(Plane2::coordinate(2), 0.0), Error);
  EXPECT_NO_THROW(CircleSpec::make(Plane2::coordinate(2), Complex(0.0, 1e-3)));
}

TEST(CircleSpec, PointsLieOnTheQuadric) {
  // <z, z> = alpha^2 for every t.
  const auto spec = CircleSpec::make(generic_plane3(), Complex(1.2, -0.4));
  for (Real t : {-3.0, -1.0, 0.0, 0.5, 2.9}) {
    const CVec z = circle_point(spec, t);
    Complex q = 0.0;
    for (Eigen::Index k = 0; k < 3; ++k) q += z[k] * z[k];
    EXPECT_LE(std::abs(q - spec.alpha * spec.alpha), 1e-14);
  }
}

TEST(PolarVertex, ReconstructsAndHandlesOrigin) {
  Rng rng(71);
  for (int k = 0; k < 20; ++k) {
    const Vec v = rng.point(4, -3, 3);
    const auto p = polar_vertex(v);
    EXPECT_NEAR(p.r * std::cos(p.phi), v[0], 1e-12);
    EXPECT_NEAR(p.r * std::sin(p.phi), v[1], 1e-12);
    EXPECT_EQ(p.tail, v.tail(2));
    EXPECT_GT(p.phi, -pi);
    EXPECT_LE(p.phi, pi);
  }
  const auto o = polar_vertex(vec({0, 0, 5}));
  EXPECT_EQ(o.r, 0.0);
  EXPECT_EQ(o.phi, 0.0);
  EXPECT_DOUBLE_EQ(polar_vertex(vec({-1, 0})).phi, pi);
}

TEST(FactorPoly, SingleFrequencyPair) {
  const auto spec = CircleSpec::make(generic_plane3(), Complex(0.7, 0.3));
  const Vec w = vec({0.3, -1.1, 0.8});
  const auto f = factor_poly(w, spec);
  EXPECT_EQ(f.degree(), 1);
  EXPECT_EQ(f[0], Complex(0.0));
  for (Real t : {-2.0, 0.1, 1.7}) EXPECT_LE(std::abs(f(t) - pair(w, circle_point(spec, t))), 1e-14);
  EXPECT_THROW(factor_poly(vec({0, 0, 1}), CircleSpec::make(Plane2::coordinate(3), 1.0)), Error);
}

TEST(BigP, UnitSquareHasDegreeEight) {
  const auto spec = CircleSpec::make(Plane2::coordinate(2), 1.0);
  const auto m = build_circle_model(square(), spec);
  EXPECT_EQ(m.p.degree(), 8);
  EXPECT_EQ(m.generator_count(), 8);
  EXPECT_GT(std::abs(m.p[8]), 0.0);
  Rng rng(73);
  for (int k = 0; k < 10; ++k) {
    const Real t = rng.uniform(-pi, pi);
    Complex prod = 1.0;
    for (const auto& cones : m.cones.cones)
      for (const auto& s : cones)
        for (const auto& w : s.generators) prod *= factor_poly(w, spec)(t);
    EXPECT_LE(std::abs(m.p(t) - prod), 1e-10 * std::abs(prod));
  }
}

TEST(BigP, DegreeBookkeeping) {
  for (const auto& [p, plane] : {std::pair{square(), Plane2::coordinate(2)}, std::pair{pyramid(), generic_plane3()},
                                 std::pair{cube(), generic_plane3()}}) {
    const auto m = build_circle_model(p, CircleSpec::make(plane, Complex(0.8, 0.1)));
    EXPECT_EQ(m.p.degree(), m.generator_count());
    for (const auto& q : m.pv) EXPECT_LE(q.degree(), m.p.degree() - static_cast<int>(p.dim()));
  }
}

TEST(PvPoly, SquareVertexDegreeAndConsistency) {
  const auto spec = CircleSpec::make(Plane2::coordinate(2), 1.0);
  const auto m = build_circle_model(square(), spec);
  EXPECT_EQ(p_v_poly(square(), spec, 0).degree(), 6);
  Rng rng(79);
  for (std::size_t v = 0; v < 4; ++v) {
    const auto& s = m.cones.cones[v].front();
    for (int k = 0; k < 5; ++k) {
      const Real t = rng.uniform(-pi, pi);
      Complex own = 1.0;
      for (const auto& w : s.generators) own *= factor_poly(w, spec)(t);
      const Complex lhs = m.pv[v](t) * own, rhs = m.p(t) * s.det_abs;
      EXPECT_LE(std::abs(lhs - rhs), 1e-10 * std::abs(rhs));
    }
  }
  EXPECT_THROW(p_v_poly(square(), spec, 9), Error);
}

TEST(PvPoly, PyramidApexSumsTwoCones) {
  const auto spec = CircleSpec::make(generic_plane3(), 0.9);
  const auto m = build_circle_model(pyramid(), spec);
  ASSERT_EQ(m.cones.cones[4].size(), 2u);
  const Real t = 0.37;
  const CVec z = circle_point(spec, t);
  Complex brion_terms = 0.0;
  for (const auto& s : m.cones.cones[4]) {
    Complex den = 1.0;
    for (const auto& w : s.generators) den *= pair(w, z);
    brion_terms += s.det_abs / den;
  }
  EXPECT_LE(std::abs(m.pv[4](t) - m.p(t) * brion_terms), 1e-10 * std::abs(m.pv[4](t)));
}

TEST(PvPoly, ArgminVertexIsNotIdenticallyZero) {
  const auto spec = CircleSpec::make(Plane2::coordinate(2), Complex(1.0, 0.5));
  const auto m = build_circle_model(random_triangle(), spec);
  const Real t0 = 0.4137;
  const CVec z = circle_point(spec, t0);
  const Complex rot = std::exp(-I * std::arg(spec.alpha));
  std::size_t u = 0;
  Real best = std::numeric_limits<Real>::infinity();
  for (std::size_t v = 0; v < m.cones.vertices.size(); ++v) {
    const Real val = (rot * pair(m.cones.vertices[v], z)).real();
    if (val < best) {
      best = val;
      u = v;
    }
  }
  EXPECT_GT(std::abs(m.pv[u](t0)), 1e-8);
}

TEST(SeriesF, CancellationIdentity) {
  const std::vector<std::tuple<Polytope, Plane2, Complex>> configs{
      {square(), Plane2::coordinate(2), 1.0},
      {random_triangle(), Plane2::coordinate(2), Complex(1.0, 1.0)},
      {cube(), generic_plane3(), 1.0}};
  for (const auto& [p, plane, alpha] : configs) {
    const auto m = build_circle_model(p, CircleSpec::make(plane, alpha));
    for (int j = 0; j < 64; ++j) EXPECT_LE(cancellation_check(m, scan_abscissa(j, 64)).rel_error(), 1e-8);
  }
}

TEST(Lemma, UnitSquareMatchesFFT) {
  const auto rep = lemma_check(square(), CircleSpec::make(Plane2::coordinate(2), 1.0), 30);
  EXPECT_EQ(rep.rows.size(), 61u);
  EXPECT_LE(rep.max_mismatch, 1e-8);
  for (const auto& r : rep.rows) {
    EXPECT_LE(r.mismatch, rep.max_mismatch);
    EXPECT_LE(r.coefficient_mismatch, 1e-8);
  }
}

TEST(Lemma, BesselSumCarriesPowerOfIRelativeToFourierCoefficient) {
  const auto m = build_circle_model(square(), CircleSpec::make(Plane2::coordinate(2), 1.0));
  const auto table = fourier_coeffs(m, 12);
  for (int n = -12; n <= 12; ++n) {
    const Complex a = table.at(n);
    EXPECT_LE(std::abs(lemma_lhs(m, n) - quarter_turn(n, PhaseConvention::power_of_i) * a), 1e-9);
    EXPECT_LE(std::abs(bessel_coefficient(m, n) - a), 1e-9);
  }
}

TEST(Lemma, PhaseConventionsAgree) {
  const auto m = rotated_model(cube(), generic_plane3(), Complex(0.6, 0.2));
  for (int n = -10; n <= 10; ++n) {
    const Complex a = lemma_lhs(m, n, PhaseConvention::power_of_i);
    const Complex b = lemma_lhs(m, n, PhaseConvention::exponential);
    EXPECT_LE(std::abs(a - b), 1e-12 * std::max(1.0, std::abs(a)));
  }
}

TEST(Lemma, TranslatedSquareStillMatches) {
  const auto p = translated(square(), vec({0.4, -0.7}));
  EXPECT_LE(lemma_check(p, CircleSpec::make(Plane2::coordinate(2), 1.0), 30).max_mismatch, 1e-8);
}

TEST(Lemma, TriangleAndCube) {
  EXPECT_LE(lemma_check(random_triangle(), CircleSpec::make(Plane2::coordinate(2), Complex(1.0, 1.0)), 30).max_mismatch,
            1e-8);
  EXPECT_LE(lemma_check(cube(), CircleSpec::make(generic_plane3(), 1.0), 30).max_mismatch, 1e-8);
}

TEST(Lemma, HighOrderCoefficientsDecay) {
  // N + 4 |2 pi alpha r_max|^2 for the square at alpha = 0.3 is about 6 + 28.
  const auto m = build_circle_model(square(), CircleSpec::make(Plane2::coordinate(2), 0.3));
  const auto table = fourier_coeffs(m, 60, 512);
  for (int n = 45; n <= 60; ++n) {
    EXPECT_LE(std::abs(lemma_lhs(m, n)), 1e-12);
    EXPECT_LE(std::abs(bessel_coefficient(m, n) - table.at(n)), 1e-13);
  }
}

TEST(Lemma, RequiresCoordinatePlane) {
  const auto m = build_circle_model(cube(), CircleSpec::make(generic_plane3(), 1.0));
  EXPECT_THROW(lemma_lhs(m, 3), Error);
}

TEST(Lemma, OrthogonalPlaneIsRejected) {
  try {
    lemma_check(cube(), CircleSpec::make(Plane2::coordinate(3), 1.0), 10);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_EQ(std::count(msg.begin(), msg.end(), '('), 4);
  }
}

TEST(FourierCoeffs, GridTooSmall) {
  const auto m = build_circle_model(square(), CircleSpec::make(Plane2::coordinate(2), 1.0));
  EXPECT_THROW(fourier_coeffs(m, 30, 64), Error);
}

TEST(NormalizeForProbe, UniqueMaximumKept) {
  const auto p = normalize_for_probe(square(), Plane2::coordinate(2));
  EXPECT_EQ(p.vertices(), square().vertices());
}

TEST(NormalizeForProbe, BreaksFourFoldTie) {
  const auto centred = translated(square(), vec({-0.5, -0.5}));
  EXPECT_LT(radius_order(plane_radii(centred, Plane2::coordinate(2))).margin(), probe_margin);
  const auto p = normalize_for_probe(centred, Plane2::coordinate(2));
  const auto order = radius_order(plane_radii(p, Plane2::coordinate(2)));
  EXPECT_GE(order.margin(), probe_margin);
  // Smallest-index maximiser is the one pushed outwards.
  EXPECT_EQ(order.top, 0u);
  const auto again = normalize_for_probe(p, Plane2::coordinate(2));
  EXPECT_GE(radius_order(plane_radii(again, Plane2::coordinate(2))).margin(), probe_margin);
}

TEST(NormalizeForProbe, RotatedCubeNeedsHullCornerPlacement) {
  // Along the direction of the farthest vertex the margin never exceeds about 2.4%.
  const auto coord = Plane2::coordinate(3);
  const auto q = rotated(cube(), rotation_to_plane(generic_plane3()));
  const auto r = plane_radii(q, coord);
  const auto top = radius_order(r).top;
  const Vec& v = q.vertex(top);
  Vec u0 = v.dot(coord.e) * coord.e + v.dot(coord.f) * coord.f;
  u0.normalize();
  for (Real tau = 0.05; tau < 1e4; tau *= 1.5)
    EXPECT_LT(radius_order(plane_radii(translated(q, tau * u0), coord)).margin(), probe_margin);
  const auto p = normalize_for_probe(q, coord);
  EXPECT_GE(radius_order(plane_radii(p, coord)).margin(), probe_margin);
  EXPECT_NEAR(volume(p), 1.0, 1e-12);
}

TEST(DominantProbe, StructureAndTarget) {
  const auto m = build_circle_model(square(), CircleSpec::make(Plane2::coordinate(2), 0.5));
  const auto rep = dominant_probe(m, m.max_pv_degree() + 40);
  EXPECT_EQ(rep.u, 2u);
  EXPECT_EQ(rep.max_degree, 6);
  EXPECT_EQ(rep.rows.size(), 40u);
  EXPECT_EQ(rep.rows.front().n, 7);
  EXPECT_GT(std::abs(rep.target), 0.0);
  EXPECT_NEAR(std::abs(rep.target), std::abs(rep.c_uN), 1e-15 * std::abs(rep.c_uN));
}

TEST(DominantProbe, ExactlyNormalisedSequenceConverges) {
  const auto m = build_circle_model(square(), CircleSpec::make(Plane2::coordinate(2), 0.5));
  const auto rep = dominant_probe(m, m.max_pv_degree() + 40);
  EXPECT_LE(rep.final_exact_deviation(), 1e-3 * std::abs(rep.c_uN));
}

TEST(DominantProbe, LeadingTermSequenceApproachesTarget) {
  // The leading-term normalisation converges only like 1 - (pi alpha r_u)^2 / (n - N + 1).
  const auto m = build_circle_model(square(), CircleSpec::make(Plane2::coordinate(2), 0.5));
  const auto rep = dominant_probe(m, m.max_pv_degree() + 200);
  auto dev = [&](std::size_t k) { return std::abs(rep.rows[k].scaled - rep.target); };
  EXPECT_LT(dev(39), dev(9));
  EXPECT_LT(dev(199), dev(39));
  const Real x = pi * 0.5 * std::sqrt(2.0);
  EXPECT_NEAR(dev(199) / std::abs(rep.c_uN), 1.0 - std::exp(-x * x / 201.0), 0.01);
}

TEST(DominantProbe, RejectsTiedMaximum) {
  const auto centred = translated(square(), vec({-0.5, -0.5}));
  EXPECT_THROW(dominant_probe(centred, CircleSpec::make(Plane2::coordinate(2), 0.5), 20), Error);
}

TEST(CircleScan, UnitSquareRows) {
  std::vector<Complex> alphas;
  for (int k = 50; k >= 1; --k) alphas.emplace_back(0.1 * k, 0.0);
  const auto rows = circle_scan(square(), Plane2::coordinate(2), alphas, 256);
  ASSERT_EQ(rows.size(), 50u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_GT(rows[i].min_modulus, 0.0);
    EXPECT_FALSE(rows[i].flagged);
    if (i > 0) {
      EXPECT_LT(rows[i - 1].alpha.real(), rows[i].alpha.real());
    }
  }
}

TEST(CircleScan, ThreadCountDoesNotChangeRows) {
  const std::vector<Complex> alphas{0.3, Complex(0.5, 0.2), 1.1, Complex(0.5, -0.2), 2.0};
  const auto a = circle_scan(pyramid(), generic_plane3(), alphas, 64, 1);
  const auto b = circle_scan(pyramid(), generic_plane3(), alphas, 64, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].alpha, b[i].alpha);
    EXPECT_EQ(a[i].min_modulus, b[i].min_modulus);
    EXPECT_EQ(a[i].argmin_t, b[i].argmin_t);
  }
}

TEST(CircleScan, TranslationPreservesMinimaForRealAlpha) {
  const auto small = Polytope::from_vertices({vec({0, 0}), vec({0.1, 0}), vec({0.02, 0.08})}, 2);
  const auto far = translated(small, vec({5, -3}));
  const std::vector<Complex> alphas{0.5, 1.5, 3.0};
  const auto a = circle_scan(small, Plane2::coordinate(2), alphas, 128);
  const auto b = circle_scan(far, Plane2::coordinate(2), alphas, 128);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_LE(std::abs(a[i].min_modulus - b[i].min_modulus), 1e-10 * a[i].min_modulus);
}

TEST(CircleScan, Errors) {
  EXPECT_THROW(circle_scan(square(), Plane2::coordinate(2), {0.0}, 16), Error);
  EXPECT_THROW(circle_scan(cube(), Plane2::coordinate(3), {1.0}, 16), Error);
}
