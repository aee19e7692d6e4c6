#include <gtest/gtest.h>

#include <random>

#include "sigmalab/errors.hpp"
#include "sigmalab/laurent.hpp"
#include "sigmalab/series.hpp"

using namespace sigmalab;

namespace {

LaurentElement mono(const TowerPtr& t, int64_t c, int e) {
  return LaurentElement::monomial(PadicNumber::from_int(t, c), {e});
}

LaurentElement random_laurent(const TowerPtr& t, std::mt19937_64& rng, int lo, int hi, int terms) {
  LaurentElement a(t, 1);
  for (int k = 0; k < terms; ++k) a += mono(t, int64_t(rng() % 50) - 25, lo + int(rng() % (hi - lo + 1)));
  return a;
}

}  // namespace

TEST(Laurent, SigmaExamples) {
  auto t2 = Tower::qp(2, 8);
  EXPECT_EQ(mono(t2, 1, 1).sigma(1), mono(t2, 1, 2));
  auto t3 = Tower::qp(3, 8);
  EXPECT_EQ((mono(t3, 3, 0) + mono(t3, 1, -1)).sigma(2), mono(t3, 3, 0) + mono(t3, 1, -9));
}

TEST(Laurent, SigmaIsARingMap) {
  auto t = Tower::qp(3, 6);
  std::mt19937_64 rng(5);
  for (int it = 0; it < 20; ++it) {
    auto a = random_laurent(t, rng, -3, 3, 4), b = random_laurent(t, rng, -3, 3, 4);
    EXPECT_EQ((a * b).sigma(2), a.sigma(2) * b.sigma(2));
    EXPECT_EQ((a + b).sigma(1), a.sigma(1) + b.sigma(1));
  }
}

TEST(Laurent, EvaluateMatchesPowers) {
  auto t = Tower::qp(3, 3);
  const auto w = PadicNumber::teichmuller(t, 2);
  EXPECT_EQ(mono(t, 1, 2).evaluate({w}), w * w);
  EXPECT_EQ(mono(t, 1, 2).evaluate({w}).coeff(0, 0), 1u);  // 26^2 = 676 = 1 mod 27
}

TEST(Laurent, NormC) {
  auto t = Tower::qp(2, 10);
  EXPECT_EQ(norm_c(mono(t, 1, 0), 3), 0);
  for (int c = 1; c <= 5; ++c) EXPECT_EQ(norm_c(mono(t, 2, c), c), 0);
  EXPECT_FALSE(norm_c(LaurentElement(t, 1), 2).has_value());
}

TEST(Laurent, NormOneForScaledIdealGenerators) {
  // g not in pi R[X], d = degree of its reduction, c > deg g.
  auto t = Tower::qp(3, 12);
  std::mt19937_64 rng(17);
  for (int it = 0; it < 40; ++it) {
    const int deg = 1 + int(rng() % 4);
    LaurentElement g(t, 1);
    int d = -1;
    for (int k = 0; k <= deg; ++k) {
      int64_t c = int64_t(rng() % 30) - 15;
      if (k == deg && c % 3 != 0 && rng() % 2) c *= 3;  // sometimes kill the top reduction
      if (c % 3 != 0) d = k;
      g += mono(t, c, k);
    }
    if (d < 0) {
      g += mono(t, 1, 0);
      d = 0;
    }
    const int c = deg + 1 + int(rng() % 3);
    const int alpha = int(rng() % 9);
    const auto h = mono(t, 1, alpha) * g * LaurentElement::constant(PadicNumber::from_int(t, 3).pow((alpha + d) / c), 1);
    EXPECT_EQ(norm_c(h, c), 0) << g.to_string() << " c=" << c << " alpha=" << alpha;
  }
}

TEST(Laurent, NormIsNotSubmultiplicative) {
  // |X|_2 = 1 but X^2 = pi^{-1} (pi X^2) has |X^2|_2 = |pi|^{-1}.
  auto t = Tower::qp(2, 8);
  EXPECT_EQ(norm_c(mono(t, 1, 1), 2), 0);
  EXPECT_EQ(norm_c(mono(t, 1, 2), 2), 1);
}

TEST(Laurent, NormSubmultiplicativeUpToOne) {
  auto t = Tower::qp(2, 12);
  std::mt19937_64 rng(23);
  for (int it = 0; it < 40; ++it) {
    auto f = random_laurent(t, rng, 0, 6, 3), g = random_laurent(t, rng, 0, 6, 3);
    if (f.is_zero() || g.is_zero() || (f * g).is_zero()) continue;
    for (int c = 1; c <= 4; ++c) EXPECT_LE(*norm_c(f * g, c), *norm_c(f, c) + *norm_c(g, c) + 1);
  }
}

TEST(Laurent, InverseExpLog) {
  auto t = Tower::qp(3, 8);
  const auto a = mono(t, 1, 0) + mono(t, 3, 1) + mono(t, 9, -2);
  const auto one = mono(t, 1, 0);
  EXPECT_EQ(a * laurent_inverse(a), one);
  const auto s = mono(t, 3, 1) + mono(t, 9, -1);
  EXPECT_EQ(laurent_log(laurent_exp(s)), s);
  EXPECT_EQ(laurent_exp(laurent_log(a)), a);
  EXPECT_THROW(laurent_inverse(mono(t, 1, 0) + mono(t, 1, 1)), UnitError);
}

TEST(Series, FromDlogExamples) {
  auto t = Tower::qp(5, 10);
  std::vector<PadicNumber> zero(6, PadicNumber::zero(t));
  EXPECT_EQ(series_from_dlog(zero, 6), TruncatedSeries::one(t, 6));
  // K_m = -2 a^m gives (1 - aT)^2.
  const auto a = PadicNumber::from_int(t, 7);
  std::vector<PadicNumber> K;
  for (int m = 1; m <= 6; ++m) K.push_back(a.pow(m).mul_int(-2));
  TruncatedSeries lin = TruncatedSeries::one(t, 6);
  lin.set(1, -a);
  EXPECT_EQ(series_from_dlog(K, 6), lin * lin);
}

TEST(Series, DlogRoundTrip) {
  auto t = Tower::qp(2, 16);
  std::mt19937_64 rng(3);
  for (int it = 0; it < 20; ++it) {
    TruncatedSeries L = TruncatedSeries::one(t, 8);
    for (int k = 1; k <= 8; ++k) L.set(k, PadicNumber::from_int(t, int64_t(rng() % 1000) - 500));
    const auto K = t_dlog(L);
    EXPECT_EQ(series_from_dlog(K, 8), L);
  }
}

TEST(Series, NewtonPolygonExamples) {
  auto t = Tower::qp(2, 10);
  auto c = [&](int64_t v) { return PadicNumber::from_int(t, v); };
  EXPECT_EQ(newton_polygon({c(1), c(1)}, 1), (std::vector<Slope>{{Rational::make(0, 1), 1}}));
  EXPECT_EQ(newton_polygon({c(1), c(1), c(2)}, 2),
            (std::vector<Slope>{{Rational::make(0, 1), 1}, {Rational::make(1, 1), 1}}));
  // (1 - T)(1 - 2T) = 1 - 3T + 2T^2
  EXPECT_EQ(newton_polygon({c(1), c(-3), c(2)}, 2),
            (std::vector<Slope>{{Rational::make(0, 1), 1}, {Rational::make(1, 1), 1}}));
  // 1 + 4T^2: a single slope 1 of multiplicity 2
  EXPECT_EQ(newton_polygon({c(1), c(0), c(4)}, 2), (std::vector<Slope>{{Rational::make(1, 1), 2}}));
}

TEST(Series, NewtonPolygonRamifiedNormalization) {
  auto t = Tower::make(3, {3, 0}, 1, 10);
  const auto pi = PadicNumber::pi(t);
  const std::vector<PadicNumber> c{PadicNumber::one(t), pi};
  EXPECT_EQ(newton_polygon(c, 1, true), (std::vector<Slope>{{Rational::make(1, 2), 1}}));
  EXPECT_EQ(newton_polygon(c, 1, false), (std::vector<Slope>{{Rational::make(1, 1), 1}}));
}

TEST(Series, NewtonPolygonOfProductMergesSlopes) {
  auto t = Tower::qp(3, 20);
  std::mt19937_64 rng(8);
  for (int it = 0; it < 20; ++it) {
    TruncatedSeries prod = TruncatedSeries::one(t, 4);
    std::map<int, int> expected;
    for (int k = 0; k < 4; ++k) {
      const int v = int(rng() % 4);
      const int64_t unit = 1 + 3 * int64_t(rng() % 5);
      TruncatedSeries f = TruncatedSeries::one(t, 4);
      f.set(1, PadicNumber::from_int(t, -unit * int64_t(std::pow(3, v))));
      prod = prod * f;
      expected[v]++;
    }
    const auto slopes = newton_polygon(prod.coeffs(), 4);
    std::map<int, int> got;
    for (const auto& s : slopes) {
      ASSERT_EQ(s.slope.den, 1);
      got[int(s.slope.num)] += s.multiplicity;
    }
    EXPECT_EQ(got, expected);
  }
}

TEST(Series, NewtonPolygonUnresolvedVertex) {
  auto t = Tower::qp(2, 4);
  const std::vector<PadicNumber> c{PadicNumber::zero(t), PadicNumber::one(t), PadicNumber::from_int(t, 8)};
  EXPECT_THROW(newton_polygon(c, 2), PrecisionError);
}

TEST(Series, TwoVariableInverseAndSubstitution) {
  auto t = Tower::qp(3, 10);
  TruncatedSeries2 a = TruncatedSeries2::one(t, 3, 4);
  a.set(1, 0, PadicNumber::from_int(t, 2));
  a.set(1, 1, PadicNumber::from_int(t, 5));
  a.set(0, 2, PadicNumber::from_int(t, 3));
  const auto prod = a * a.inverse();
  for (int i = 0; i <= 3; ++i)
    for (int j = 0; j <= 4; ++j) EXPECT_EQ(prod.at(i, j), PadicNumber::from_int(t, i == 0 && j == 0 ? 1 : 0));
  // substitution is a ring map, up to the reported precision
  const auto z = PadicNumber::from_int(t, 3);
  const auto lhs = (a * a).evaluate_U(z);
  const auto rhs = a.evaluate_U(z) * a.evaluate_U(z);
  EXPECT_EQ(lhs, rhs);
  EXPECT_EQ(lhs.prec(), 5);
}

TEST(Convext, TrivialInputs) {
  std::vector<std::vector<mpz_class>> zero(13, std::vector<mpz_class>{0});
  auto r0 = convext_bound_check(zero, 12, 0, 2);
  EXPECT_TRUE(r0.holds);
  EXPECT_EQ(r0.worst_margin, INT64_MAX);
  std::vector<std::vector<mpz_class>> ones(13, std::vector<mpz_class>{1});
  auto r1 = convext_bound_check(ones, 12, 0, 2);
  // exp(-sum T^m/m) = 1 - T: only beta_1 = -1 survives.
  EXPECT_EQ(r1.witness_m, 1);
  EXPECT_EQ(r1.worst_margin, 2);
}

TEST(Convext, RandomIntegralInputs) {
  std::mt19937_64 rng(99);
  for (uint64_t p : {2u, 3u}) {
    for (int it = 0; it < 5; ++it) {
      std::vector<std::vector<mpz_class>> g(13, std::vector<mpz_class>(3));
      for (auto& gm : g)
        for (auto& c : gm) c = long(rng() % 41) - 20;
      auto r = convext_bound_check(g, 12, 2, p);
      EXPECT_TRUE(r.holds);
      EXPECT_GE(r.worst_margin, 0);
    }
  }
}

TEST(Convext, MarginsOfExpMinusT) {
  // g_1 = 1 only: f = exp(-T), beta_m = (-1)^m/m!, ord_2(m!) = 0,1,1,3.
  std::vector<std::vector<mpz_class>> g(5, std::vector<mpz_class>{0});
  g[1][0] = 1;
  auto r = convext_bound_check(g, 4, 0, 2);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.margins, (std::vector<int64_t>{INT64_MAX, 2, 3, 5, 5}));
}
