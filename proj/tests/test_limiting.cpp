#include <gtest/gtest.h>

#include "sigmalab/descriptor.hpp"
#include "sigmalab/errors.hpp"
#include "sigmalab/limiting.hpp"
#include "sigmalab/weight.hpp"

using namespace sigmalab;

namespace {

LaurentElement ex(const std::string& s, const TowerPtr& t) { return parse_expression(s, t, 1); }

SigmaMatrix rank2_std(const TowerPtr& t) { return build_matrix(builtin_descriptor("rank2-std"), t); }

}  // namespace

TEST(Limiting, IndexOrdering) {
  const auto J = LimitingIndex::make(2, 2);
  const std::vector<std::vector<int>> expect{{0, 0}, {0, 1}, {1, 0}, {0, 2}, {1, 1}, {2, 0}};
  EXPECT_EQ(J.q, expect);
  EXPECT_EQ(J.find({1, 1}), 4);
  EXPECT_EQ(J.find({3, 0}), -1);
  EXPECT_EQ(LimitingIndex::make(0, 5).size(), 1u);
  EXPECT_EQ(LimitingIndex::make(3, 4).size(), 35u);
}

TEST(Limiting, RankOneIsUnitPow) {
  auto t = Tower::qp(2, 6);
  auto M = SigmaMatrix::scalar(ex("1 + 2*x", t));
  const auto y = PadicNumber::from_int(t, 2);
  const auto B = build_limiting(M, 3, LimitSign::Plus, y, 5);
  ASSERT_EQ(B.B.rank(), 1);
  const auto direct = laurent_exp(laurent_log(M.at(0, 0)).scale(y)) * M.at(0, 0).pow(3);
  EXPECT_EQ(B.B.at(0, 0), direct);
}

TEST(Limiting, ZeroWeightColumn) {
  auto t = Tower::qp(2, 6);
  const auto M = rank2_std(t);
  const auto B = build_limiting(M, 1, LimitSign::Plus, PadicNumber::zero(t), 5);
  EXPECT_EQ(B.B.at(0, 0), M.at(0, 0));
  for (size_t i = 1; i < B.index.size(); ++i) EXPECT_TRUE(B.B.at(int(i), 0).is_zero());
}

TEST(Limiting, ColumnExpansionOracle) {
  // r = 0, y = p, q2 = delta_1: column = a^p a^{-1} lambda(a_1), with
  // lambda(a_1) = a_01 + a_11 X.
  auto t = Tower::qp(2, 6);
  const auto M = rank2_std(t);
  const auto y = PadicNumber::from_int(t, 2);
  const auto B = build_limiting(M, 0, LimitSign::Plus, y, 5);
  const auto a = M.at(0, 0);
  const auto scale = laurent_exp(laurent_log(a).scale(y)) * laurent_inverse(a);
  EXPECT_EQ(B.B.at(0, 1), scale * M.at(0, 1));
  EXPECT_EQ(B.B.at(1, 1), scale * M.at(1, 1));
  for (size_t i = 2; i < B.index.size(); ++i) EXPECT_TRUE(B.B.at(int(i), 1).is_zero());
}

TEST(Limiting, ColumnCertificate) {
  auto t = Tower::qp(3, 6);
  const auto M = build_matrix(builtin_descriptor("rank2-std"), t);
  const auto B = build_limiting(M, -1, LimitSign::Minus, PadicNumber::from_int(t, 3), 5);
  for (size_t c = 0; c < B.index.size(); ++c)
    for (size_t r = 0; r < B.index.size(); ++r) {
      const auto& v = B.B.at(int(r), int(c));
      if (!v.is_zero()) EXPECT_GE(v.min_ord(), LimitingIndex::degree(B.index.q[c]));
    }
}

TEST(Limiting, IntegerSpecialization) {
  auto t = Tower::qp(2, 6);
  const auto M = rank2_std(t);
  for (int r : {-1, 0, 2}) {
    const auto A = build_limiting(M, r, LimitSign::Plus, PadicNumber::from_int(t, 2), 5);
    const auto B = build_limiting(M, r + 2, LimitSign::Plus, PadicNumber::zero(t), 5);
    EXPECT_EQ(A.B, B.B) << r;
    const auto C = build_limiting(M, r, LimitSign::Minus, PadicNumber::from_int(t, 2), 5);
    const auto D = build_limiting(M, r - 2, LimitSign::Plus, PadicNumber::zero(t), 5);
    EXPECT_EQ(C.B, D.B) << r;
  }
}

TEST(Limiting, Preconditions) {
  auto t = Tower::qp(2, 6);
  const auto gm = build_matrix(builtin_descriptor("rank2-onenormal"), t);
  EXPECT_THROW(build_limiting(gm, 0, LimitSign::Plus, PadicNumber::zero(t), 5), FlagError);
  const auto M = rank2_std(t);
  EXPECT_THROW(build_limiting(M, 0, LimitSign::Plus, PadicNumber::one(t), 5), DomainError);
  auto t3 = Tower::qp(3, 6);
  EXPECT_NO_THROW(build_limiting(rank2_std(t3), 0, LimitSign::Plus, PadicNumber::one(t3), 5));
}

TEST(Limiting, DiskRegimes) {
  auto t = Tower::qp(2, 8);
  // mu = 1 = 1/(p-1): b = 0, any y with ord > 0.
  EXPECT_TRUE(limiting_disk_contains(ex("1 + 2*x", t), PadicNumber::from_int(t, 2)));
  EXPECT_FALSE(limiting_disk_contains(ex("1 + 2*x", t), PadicNumber::from_int(t, 3)));
  // mu = 2 > 1: nu > -1, so units are admissible.
  EXPECT_TRUE(limiting_disk_contains(ex("1 + 4*x", t), PadicNumber::from_int(t, 3)));
  auto t3 = Tower::qp(3, 8);
  EXPECT_TRUE(limiting_disk_contains(ex("1 + 3*x", t3), PadicNumber::from_int(t3, 1)));
}

TEST(Limiting, FibreLimitingConstantTerm) {
  auto t = Tower::qp(2, 10);
  const auto M = rank2_std(t);
  const ClosedPoint pt{1, {1}};
  const auto F = fibre_limiting(fibre(M, pt), 0, 1, LimitSign::Plus, 5, 0);
  const auto G = fibre(build_limiting(M, 1, LimitSign::Plus, PadicNumber::zero(t), 5).B, pt);
  const auto E = F.evaluate(PadicNumber::zero(t));
  for (size_t i = 0; i < G.size(); ++i)
    for (size_t j = 0; j < G.size(); ++j) EXPECT_EQ(E[i][j], G[i][j]);
}

TEST(Limiting, FibreCommutation) {
  for (uint64_t p : {2u, 3u}) {
    auto t = Tower::qp(p, 12);
    const auto M = rank2_std(t);
    for (const auto& pt : enumerate_closed_points(BaseScheme::torus(p), 2))
      for (auto sign : {LimitSign::Plus, LimitSign::Minus})
        for (int r : {-1, 0, 1}) {
          const auto rep = check_fibre_commutation(M, pt, r, sign, PadicNumber::from_int(t, int64_t(p)), 5, 6, 5);
          EXPECT_TRUE(rep.equal) << "p=" << p << " " << pt.to_string() << " r=" << r << " agree " << rep.agreement;
        }
  }
}

TEST(Limiting, Rk1resRankOne) {
  auto t = Tower::qp(2, 5);
  auto M = SigmaMatrix::scalar(ex("1 + 2*x", t));
  const auto rep = verify_rk1res(M, 0, LimitSign::Plus, PadicNumber::from_int(t, 2), BaseScheme::torus(2), 3, 5, 5);
  EXPECT_TRUE(rep.equal);
}

TEST(Limiting, Rk1resRankTwo) {
  auto t = Tower::qp(2, 5);
  const auto M = rank2_std(t);
  for (int s : {0, 1})
    for (auto sign : {LimitSign::Plus, LimitSign::Minus}) {
      const auto rep = verify_rk1res(M, s, sign, PadicNumber::from_int(t, 2), BaseScheme::torus(2), 3, 5, 5);
      EXPECT_TRUE(rep.equal) << s << " " << rep.first_difference;
    }
  const auto rep = verify_rk1res(M, 1, LimitSign::Plus, PadicNumber::zero(t), BaseScheme::torus(2), 3, 5, 5);
  EXPECT_TRUE(rep.equal);
}
