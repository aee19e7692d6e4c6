#include <gtest/gtest.h>

#include <random>

#include "sigmalab/errors.hpp"
#include "sigmalab/finite_field.hpp"
#include "sigmalab/geometry.hpp"

using namespace sigmalab;

TEST(FiniteField, LowestIrreducibleOverF2) {
  EXPECT_EQ(lowest_irreducible(2, 2), (FpPoly{1, 1, 1}));
  EXPECT_EQ(lowest_irreducible(2, 3), (FpPoly{1, 1, 0, 1}));
  EXPECT_EQ(lowest_irreducible(3, 2), (FpPoly{1, 0, 1}));
}

TEST(FiniteField, FieldAxiomsAndFrobenius) {
  for (auto [p, k] : {std::pair{2u, 3}, std::pair{3u, 2}, std::pair{5u, 2}}) {
    const GaloisField F(p, k);
    std::mt19937_64 rng(p * 10 + k);
    for (int it = 0; it < 50; ++it) {
      const uint64_t a = rng() % F.size(), b = rng() % F.size(), c = rng() % F.size();
      EXPECT_EQ(F.mul(a, F.add(b, c)), F.add(F.mul(a, b), F.mul(a, c)));
      EXPECT_EQ(F.frob(a), F.pow(a, p));
      if (a) EXPECT_EQ(F.mul(a, F.inv(a)), 1u);
      // trace = sum of conjugates, landing in F_p
      uint64_t s = 0, x = a;
      for (int j = 0; j < k; ++j) {
        s = F.add(s, x);
        x = F.frob(x);
      }
      EXPECT_EQ(s, uint64_t(F.trace(a)));
    }
  }
}

TEST(FiniteField, EmbeddingIsARingMap) {
  const GaloisField F2(2, 2), F4(2, 4);
  for (uint64_t a = 0; a < 4; ++a)
    for (uint64_t b = 0; b < 4; ++b) {
      EXPECT_EQ(F4.embed_from(F2, F2.mul(a, b)), F4.mul(F4.embed_from(F2, a), F4.embed_from(F2, b)));
      EXPECT_EQ(F4.embed_from(F2, F2.add(a, b)), F4.add(F4.embed_from(F2, a), F4.embed_from(F2, b)));
    }
}

TEST(Geometry, TorusOverF2) {
  EXPECT_EQ(enumerate_closed_points(BaseScheme::torus(2), 1).size(), 1u);
  const auto pts = enumerate_closed_points(BaseScheme::torus(2), 2);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[0], (ClosedPoint{1, {1}}));
  EXPECT_EQ(pts[1].degree, 2);
  EXPECT_EQ(pts[1].coords, std::vector<uint64_t>{2});  // omega = t, orbit {t, t+1}
}

TEST(Geometry, AffineLineOverF3) {
  const auto pts = enumerate_closed_points(BaseScheme::affine(3), 2);
  int d1 = 0, d2 = 0;
  for (const auto& p : pts) (p.degree == 1 ? d1 : d2)++;
  EXPECT_EQ(d1, 3);
  EXPECT_EQ(d2, 3);
}

TEST(Geometry, ZetaConsistency) {
  for (const BaseScheme X : {BaseScheme::torus(2), BaseScheme::affine(2), BaseScheme::torus(3), BaseScheme::affine(3),
                             BaseScheme::torus(2, 2), BaseScheme::affine(2, 2), BaseScheme::torus(5)}) {
    const int fmax = X.n == 2 ? 3 : (X.q == 5 ? 4 : 6);
    const auto pts = enumerate_closed_points(X, fmax);
    for (int m = 1; m <= fmax; ++m) {
      uint64_t s = 0;
      for (const auto& pt : pts)
        if (m % pt.degree == 0) s += pt.degree;
      EXPECT_EQ(s, X.count_points(m)) << X.name() << " m=" << m;
    }
  }
}

TEST(Geometry, OrbitRepresentativeIsMinimalAndExact) {
  const auto pts = enumerate_closed_points(BaseScheme::torus(2, 2), 3);
  for (const auto& pt : pts) {
    const auto orb = orbit(pt, 2);
    ASSERT_EQ(int(orb.size()), pt.degree);
    for (size_t k = 1; k < orb.size(); ++k) {
      EXPECT_LT(orb[0], orb[k]);
      for (uint64_t c : orb[k]) EXPECT_NE(c, 0u);
    }
  }
}

TEST(Geometry, GuardRaisesResourceError) {
  EXPECT_THROW(enumerate_closed_points(BaseScheme::torus(2), 24), ResourceError);
  EXPECT_THROW(enumerate_closed_points(BaseScheme::affine(3, 3), 6), ResourceError);
}

TEST(Geometry, TeichmullerLiftOfPoints) {
  auto t1 = Tower::qp(2, 8);
  EXPECT_EQ(teich_lift_point(ClosedPoint{1, {1}}, t1)[0], PadicNumber::one(t1));
  auto t2 = Tower::qp(2, 8, 2);
  const auto w = teich_lift_point(ClosedPoint{2, {2}}, t2)[0];
  EXPECT_EQ(w.pow(3), PadicNumber::one(t2));
  EXPECT_NE(w, PadicNumber::one(t2));
  EXPECT_THROW(teich_lift_point(ClosedPoint{2, {2}}, t1), ShapeError);
}

TEST(Geometry, LiftCommutesWithFrobenius) {
  auto t3 = Tower::qp(3, 6, 3);
  for (const auto& pt : closed_points_of_degree(BaseScheme::torus(3), 3)) {
    const auto orb = orbit(pt, 3);
    const auto x = teich_lift_point(pt, t3)[0];
    const auto y = teich_lift_point(ClosedPoint{3, orb[1]}, t3)[0];
    EXPECT_EQ(x.pow(3), y);
  }
}
