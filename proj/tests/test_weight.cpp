#include <gtest/gtest.h>

#include <random>

#include "sigmalab/descriptor.hpp"
#include "sigmalab/errors.hpp"
#include "sigmalab/weight.hpp"

using namespace sigmalab;

namespace {

PadicNumber random_unit(const TowerPtr& t, std::mt19937_64& rng) {
  const int64_t p = int64_t(t->p());
  int64_t v = int64_t(rng() % 100000);
  if (v % p == 0) ++v;
  return PadicNumber::from_int(t, v);
}

PadicNumber random_int(const TowerPtr& t, std::mt19937_64& rng) {
  return PadicNumber::from_int(t, int64_t(rng() % 200000) - 100000);
}

}  // namespace

TEST(Weight, Model) {
  auto m2 = WeightModel::for_tower(Tower::qp(2, 8));
  EXPECT_EQ(m2.a, 1);
  EXPECT_EQ(m2.m, -1);
  EXPECT_EQ(m2.component_count(), 2 * int64_t(m2.q - 1));
  auto m5 = WeightModel::for_tower(Tower::qp(5, 8));
  EXPECT_EQ(m5.a, 0);
  EXPECT_EQ(m5.component_count(), 4);
  EXPECT_THROW(WeightModel::for_tower(Tower::make(3, {3, 0}, 1, 6)), UnsupportedScheme);
  EXPECT_THROW(WeightModel::for_tower(Tower::qp(3, 6, 2)), UnsupportedScheme);
}

TEST(Weight, TorsionOfOneUnitsAtTwo) {
  auto t = Tower::qp(2, 10);
  const auto minus1 = PadicNumber::from_int(t, -1);
  const auto d = decompose_unit(minus1);
  EXPECT_EQ(d.v, PadicNumber::one(t));
  EXPECT_EQ(d.u.pow(2), PadicNumber::one(t));
  EXPECT_TRUE(p_log(d.u).is_zero());
  EXPECT_EQ(eval_character(CharacterPoint::disk(1, 0, iota(PadicNumber::from_int(t, 2))), minus1), minus1);
  EXPECT_EQ(eval_character(CharacterPoint::disk(0, 0, iota(PadicNumber::from_int(t, 2))), minus1),
            PadicNumber::one(t));
}

TEST(Weight, DecomposeUnit) {
  auto t = Tower::qp(3, 8);
  const auto one = decompose_unit(PadicNumber::one(t));
  EXPECT_EQ(one.v, PadicNumber::one(t));
  EXPECT_EQ(one.u, PadicNumber::one(t));
  std::mt19937_64 rng(5);
  for (int it = 0; it < 20; ++it) {
    const auto r = random_unit(t, rng);
    const auto d = decompose_unit(r);
    EXPECT_EQ(d.v * d.u, r);
    EXPECT_EQ(d.v.pow(2), PadicNumber::one(t));
    EXPECT_TRUE(d.u.is_one_unit());
    EXPECT_EQ(decompose_unit(d.u).u, d.u);
  }
  EXPECT_THROW(decompose_unit(PadicNumber::from_int(t, 3)), DomainError);
}

TEST(Weight, IotaExamples) {
  auto t = Tower::qp(3, 8);
  EXPECT_TRUE(iota(PadicNumber::zero(t)).is_zero());
  const auto z = iota(PadicNumber::from_int(t, 3));
  EXPECT_EQ(z.ord_pi().value, 2);
  // exp(9) - 1 by its partial sums with exact rationals
  mpq_class acc = 0, term = 1;
  for (int k = 1; k < 30; ++k) {
    term = term * 9 / k;
    acc += term;
  }
  acc.canonicalize();
  const mpz_class mod = 6561;
  const mpz_class num = ((acc.get_num() % mod) + mod) % mod;
  const mpz_class den = ((acc.get_den() % mod) + mod) % mod;
  EXPECT_EQ(z, PadicNumber::from_rational(t, num.get_si(), den.get_si()));
  EXPECT_THROW(iota(PadicNumber::from_rational(Tower::qp(2, 8), 1, 2)), DomainError);
}

TEST(Weight, FormalGroupIdentity) {
  for (uint64_t p : {2u, 3u, 5u}) {
    auto t = Tower::qp(p, 10);
    std::mt19937_64 rng(p);
    for (int64_t ye : {int64_t(p), int64_t(p * p)}) {
      const auto y = PadicNumber::from_int(t, ye);
      const auto z = iota(y);
      for (int it = 0; it < 10; ++it) {
        const auto x = random_int(t, rng);
        const auto lhs = formal_mult(x, z) + PadicNumber::one(t);
        const auto rhs = p_exp(x * y.mul_int(int64_t(p)));
        EXPECT_EQ(lhs.reduce(8), rhs.reduce(8)) << p;
      }
    }
  }
}

TEST(Weight, CharacterMatchesUnitPow) {
  for (uint64_t p : {2u, 3u}) {
    auto t = Tower::qp(p, 10);
    std::mt19937_64 rng(p + 7);
    const auto y = PadicNumber::from_int(t, int64_t(p));
    const auto kappa = CharacterPoint::disk(0, 0, iota(y));
    for (int it = 0; it < 10; ++it) {
      const auto r = random_unit(t, rng);
      EXPECT_EQ(eval_character(kappa, r).reduce(8), unit_pow(decompose_unit(r).u, y).reduce(8));
    }
  }
}

TEST(Weight, CharacterIsMultiplicative) {
  auto t = Tower::qp(2, 10);
  std::mt19937_64 rng(9);
  const auto kappa = CharacterPoint::disk(1, 0, iota(PadicNumber::from_int(t, 6)));
  for (int it = 0; it < 20; ++it) {
    const auto a = random_unit(t, rng), b = random_unit(t, rng);
    EXPECT_EQ(eval_character(kappa, a * b), eval_character(kappa, a) * eval_character(kappa, b));
  }
}

TEST(Weight, IntegerWeightShortcut) {
  for (uint64_t p : {2u, 3u, 5u}) {
    auto t = Tower::qp(p, 10);
    std::mt19937_64 rng(p + 1);
    for (int64_t k = -5; k <= 5; ++k) {
      const auto comp = integer_weight_point(k, t);
      for (int it = 0; it < 4; ++it) {
        const auto r = random_unit(t, rng);
        PadicNumber direct = PadicNumber::one(t);
        const auto base = k >= 0 ? r : r.inverse();
        for (int j = 0; j < std::abs(k); ++j) direct *= base;
        EXPECT_EQ(eval_character(CharacterPoint::integer(k), r), direct);
        EXPECT_EQ(eval_character(comp, r).reduce(8), direct.reduce(8)) << "p=" << p << " k=" << k;
      }
    }
  }
}

TEST(Weight, ComponentRange) {
  auto t = Tower::qp(3, 6);
  EXPECT_THROW(eval_character(CharacterPoint::disk(1, 0, PadicNumber::zero(t)), PadicNumber::one(t)), DomainError);
  EXPECT_THROW(eval_character(CharacterPoint::disk(0, 2, PadicNumber::zero(t)), PadicNumber::one(t)), DomainError);
}

TEST(Weight, TwistedLTrivialAndIntegerWeight) {
  auto t = Tower::qp(2, 8);
  const auto X = BaseScheme::torus(2);
  const auto a = parse_expression("1 + 2*x", t, 1);
  const auto triv = twisted_L(alpha_from_entry(a), CharacterPoint::trivial(), X, 4, t, 8);
  EXPECT_EQ(triv, euler_L(SigmaMatrix::identity(t, 1, 1), X, 4));
  for (int k : {0, 1, 2, 3}) {
    const auto L = twisted_L(alpha_from_entry(a), CharacterPoint::integer(k), X, 4, t, 8);
    EXPECT_EQ(L, euler_L(SigmaMatrix::scalar(a.pow(k)), X, 4)) << k;
  }
}

TEST(Weight, TwoVariableSubstitution) {
  auto t = Tower::qp(2, 12);
  const auto M = build_matrix(builtin_descriptor("rank2-std"), t);
  const auto X = BaseScheme::torus(2);
  for (int64_t s : {0, 1}) {
    const auto H = two_variable_L(M, s, 0, X, 3, 4);
    const auto H0 = H.evaluate_U(PadicNumber::zero(t));
    const auto base = twisted_L(alpha_from_entry(M.at(0, 0)), CharacterPoint::disk(s, 0, PadicNumber::zero(t)), X, 3,
                                t, 12);
    EXPECT_EQ(H0, base);
    const auto rep = two_variable_check(M, s, 0, X, 3, 4, PadicNumber::from_int(t, 2), 5);
    EXPECT_TRUE(rep.equal) << s << " " << rep.first_difference;
  }
}

TEST(Weight, ConvextOnExtractedG) {
  auto t = Tower::qp(2, 12);
  const auto M = build_matrix(builtin_descriptor("rank2-std"), t);
  const auto g = extract_g(M, 0, 0, BaseScheme::torus(2), 8, 3);
  const auto rep = convext_bound_check(g, 8, 3, 2);
  EXPECT_TRUE(rep.holds);
}
