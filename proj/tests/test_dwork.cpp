#include <gtest/gtest.h>

#include <random>

#include "sigmalab/descriptor.hpp"
#include "sigmalab/dwork.hpp"
#include "sigmalab/errors.hpp"

using namespace sigmalab;

namespace {

LaurentElement ex(const std::string& s, const TowerPtr& t) { return parse_expression(s, t, 1); }

LaurentElement random_element(const TowerPtr& t, std::mt19937_64& rng, int lo, int hi, int terms = 3) {
  LaurentElement a(t, 1);
  for (int k = 0; k < terms; ++k)
    a += LaurentElement::monomial(PadicNumber::from_int(t, int64_t(rng() % 17) - 8), {lo + int(rng() % (hi - lo + 1))});
  return a;
}

SigmaMatrix random_matrix(const TowerPtr& t, int rank, std::mt19937_64& rng, int lo, int hi) {
  SigmaMatrix M(t, rank, 1);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) M.set(i, j, random_element(t, rng, lo, hi, 2));
  return M;
}

// Z(X, T) = exp(sum #X(F_{q^m}) T^m / m) from point counts.
TruncatedSeries zeta_from_counts(const BaseScheme& X, const TowerPtr& t, int D) {
  std::vector<PadicNumber> K;
  for (int m = 1; m <= D; ++m) K.push_back(PadicNumber::from_int(t, int64_t(X.count_points(m))));
  return series_from_dlog(K, D);
}

}  // namespace

TEST(Dwork, ThetaFunctionExamples) {
  auto t = Tower::qp(3, 6);
  const auto X = BaseScheme::torus(3);
  EXPECT_EQ(theta_function(ex("1", t), X), ex("3", t));
  EXPECT_TRUE(theta_function(ex("x", t), X).is_zero());
  EXPECT_EQ(theta_function(ex("5*x^-6 + x^2", t), X), ex("15*x^-2", t));
}

TEST(Dwork, ThetaOfSigmaIsMultiplicationByQ) {
  auto t = Tower::qp(2, 8);
  std::mt19937_64 rng(3);
  for (int it = 0; it < 20; ++it) {
    const auto a = random_element(t, rng, -5, 5);
    EXPECT_EQ(theta_function(a.sigma(1), BaseScheme::torus(2)), a.mul_int(2));
  }
}

TEST(Dwork, ThetaApplyProjectionFormula) {
  for (uint64_t p : {2u, 3u}) {
    auto t = Tower::qp(p, 6);
    std::mt19937_64 rng(p);
    for (int it = 0; it < 20; ++it) {
      const auto a = random_element(t, rng, -4, 4);
      const auto b = random_element(t, rng, -9, 9);
      const auto X = BaseScheme::torus(p);
      EXPECT_EQ(theta_apply(a.sigma(1) * b, X), a * theta_apply(b, X));
      const auto pa = random_element(t, rng, 0, 4);
      const auto pb = random_element(t, rng, 0, 9);
      const auto Y = BaseScheme::affine(p);
      EXPECT_EQ(theta_apply(pa.sigma(1) * pb, Y), pa * theta_apply(pb, Y));
    }
  }
}

TEST(Dwork, UnsupportedDimension) {
  auto t = Tower::qp(2, 4);
  EXPECT_THROW(frobenius_form(BaseScheme::torus(2, 2), t), UnsupportedScheme);
  EXPECT_THROW(theta_apply(LaurentElement(t, 1), BaseScheme::affine(2, 2)), UnsupportedScheme);
}

TEST(Dwork, TrivialModuleGivesZeta) {
  for (uint64_t p : {2u, 3u}) {
    const int D = 5, N = 6;
    auto t = Tower::qp(p, fredholm_working_precision(N, D, Tower::qp(p, N)));
    for (auto X : {BaseScheme::torus(p), BaseScheme::affine(p)}) {
      const auto M = SigmaMatrix::identity(t, 1, 1);
      const auto num = fredholm_det(M, X, 1, D, N);
      const auto den = fredholm_det(M, X, 0, D, N);
      const auto Z = zeta_from_counts(X, t, D).reduce(N);
      EXPECT_EQ(num.det * den.det.inverse(), Z) << X.name();
    }
  }
}

TEST(Dwork, DenseMatrixTracesAgree) {
  auto t = Tower::qp(3, 8);
  std::mt19937_64 rng(11);
  const auto M = random_matrix(t, 2, rng, -3, 3);
  const auto psi = build_psi(M, BaseScheme::torus(3), 1, 3);
  const auto A = psi.dense();
  PadicMatrix P = A;
  for (int f = 1; f <= 3; ++f) {
    PadicNumber tr = PadicNumber::zero(t);
    for (size_t i = 0; i < P.size(); ++i) tr += P[i][i];
    EXPECT_EQ(tr, psi.trace_power(f)) << f;
    P = padic_mul(P, A);
  }
}

TEST(Dwork, PointSumMatchesOperatorTrace) {
  for (uint64_t p : {2u, 3u}) {
    auto t = Tower::qp(p, 8);
    std::mt19937_64 rng(100 + p);
    for (int it = 0; it < 4; ++it) {
      const auto M = random_matrix(t, 2, rng, -2, 2);
      const auto X = BaseScheme::torus(p);
      for (int i : {0, 1}) {
        const auto psi = build_psi(M, X, i, build_psi(M, X, i, 0).stable_window());
        for (int f : {1, 2}) EXPECT_EQ(trace_formula_pointsum(M, X, i, f), psi.trace_power(f)) << p << i << f;
      }
      const auto A = random_matrix(t, 2, rng, 0, 3);
      const auto Y = BaseScheme::affine(p);
      for (int i : {0, 1}) {
        const auto psi = build_psi(A, Y, i, build_psi(A, Y, i, 0).stable_window() + 1);
        for (int f : {1, 2}) EXPECT_EQ(trace_formula_pointsum(A, Y, i, f), psi.trace_power(f)) << p << i << f;
      }
    }
  }
}

TEST(Dwork, WindowDiagnostics) {
  auto t = Tower::qp(2, 8);
  const auto M = build_matrix(builtin_descriptor("rank2-gm"), t);
  const auto psi = build_psi(M, BaseScheme::torus(2), 0, 6);
  EXPECT_EQ(psi.stable_window(), 1);
  EXPECT_EQ(psi.leak_ord(), psi.matrix().prec());
  for (const auto& d : psi.decay())
    if (std::abs(d.j) > psi.stable_window()) EXPECT_GT(d.margin, 0) << d.j;
  const auto wide = SigmaMatrix::scalar(ex("x^5 + x^-5", t));
  EXPECT_THROW(build_psi(wide, BaseScheme::torus(2), 1, 2, true), WindowError);
  EXPECT_NO_THROW(build_psi(wide, BaseScheme::torus(2), 1, 5, true));
}

TEST(Dwork, StabilizationReport) {
  auto t = Tower::qp(2, 13);
  const auto M = build_matrix(builtin_descriptor("rank2-gm"), t);
  const auto r = fredholm_det(M, BaseScheme::torus(2), 1, 6, 8);
  EXPECT_LE(r.doublings, 4);
  EXPECT_EQ(r.windows.size(), size_t(r.doublings + 1));
  const auto wide = SigmaMatrix::scalar(ex("x^40", t));
  const auto w = fredholm_det(wide, BaseScheme::torus(2), 1, 2, 4);
  EXPECT_EQ(w.windows.front(), 40);
  EXPECT_EQ(w.det[1], PadicNumber::from_int(t, -1));
  EXPECT_THROW(fredholm_det(M, BaseScheme::torus(2), 1, 6, 8, 1, 1), StabilizationError);
}

TEST(Dwork, PrecisionShortfall) {
  auto t = Tower::qp(2, 8);
  EXPECT_THROW(fredholm_det(SigmaMatrix::identity(t, 1, 1), BaseScheme::torus(2), 1, 6, 8), PrecisionError);
}

TEST(Dwork, TraceFormulaBuiltins) {
  for (uint64_t p : {2u, 3u})
    for (const std::string name : {"rank1-x", "rank1-unit", "rank2-gm", "rank2-a1"}) {
      const int N = 6, D = 5;
      auto t = Tower::qp(p, fredholm_working_precision(N, D, Tower::qp(p, N)));
      const auto d = builtin_descriptor(name);
      const auto rep = trace_formula_L(build_matrix(d, t), descriptor_scheme(d, p), D, N);
      EXPECT_TRUE(rep.equal) << name << " p=" << p << " first diff " << rep.first_difference;
    }
}
