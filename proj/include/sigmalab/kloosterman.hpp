#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "sigmalab/geometry.hpp"
#include "sigmalab/series.hpp"
#include "sigmalab/weight.hpp"

namespace sigmalab {

/// Element of Q(zeta_p) in the basis 1, zeta, ..., zeta^{p-2}; for p = 2 this
/// is Q with zeta = -1.
class Cyclotomic {
 public:
  Cyclotomic() = default;
  explicit Cyclotomic(uint64_t p);
  static Cyclotomic integer(uint64_t p, const mpq_class& v);
  /// sum_c counts[c] zeta^c.
  static Cyclotomic from_counts(uint64_t p, const std::vector<int64_t>& counts);

  uint64_t p() const { return p_; }
  const std::vector<mpq_class>& coeffs() const { return c_; }

  Cyclotomic operator+(const Cyclotomic& o) const;
  Cyclotomic operator-(const Cyclotomic& o) const;
  Cyclotomic operator*(const Cyclotomic& o) const;
  Cyclotomic scale(const mpq_class& k) const;
  bool operator==(const Cyclotomic& o) const;

  bool is_zero() const;
  bool is_integral() const;
  bool is_rational() const;
  std::string to_string() const;

 private:
  uint64_t p_ = 2;
  std::vector<mpq_class> c_;
};

/// z^p - z = x_0 + ... + x_n with x_0 ... x_n = y, over G_m / F_p.
struct KloostermanFamily {
  uint64_t p = 2;
  int n = 1;
  void validate() const;
};

struct KloostermanSums {
  ClosedPoint y;
  int m_requested = 0;
  /// Largest m computed (may be below m_requested under the enumeration guard).
  int m_used = 0;
  /// K[m-1] = K_m(y).
  std::vector<Cyclotomic> K;
};

/// Largest m with p^{r m n} <= kEnumerationGuard for a point of degree r.
int kloosterman_m_limit(const KloostermanFamily& fam, int degree);

/// K_m(y) = sum over x_i in F_{p^{rm}}^x, x_0...x_n = y of Psi(Tr(x_0 + ... + x_n)),
/// m = 1..m_max, with Psi(c) = zeta^c. m_max is lowered to the enumeration
/// guard when needed; ResourceError if that leaves fewer than n + 2 sums.
KloostermanSums kloosterman_sums(const KloostermanFamily& fam, const ClosedPoint& y, int m_max);

/// Number of points of z^p - z = x_0 + ... + x_n, x_0...x_n = y over F_{p^{rm}},
/// by direct enumeration of (x, z).
uint64_t kloosterman_curve_points(const KloostermanFamily& fam, const ClosedPoint& y, int m);

/// prod (1 - alpha_i T) with sum alpha_i^m = (-1)^n K_m, coefficients c_0..c_{n+1}.
/// RecognitionError if a coefficient past degree n+1 is nonzero or a
/// coefficient is not integral.
std::vector<Cyclotomic> lpsi_polynomial(const KloostermanFamily& fam, const KloostermanSums& sums);

/// Z_p for p = 2, Z_p[pi] with pi^{p-1} = -p otherwise.
TowerPtr kloosterman_tower(uint64_t p, int N);
/// The p-th root of unity congruent to 1 + pi mod pi^2.
PadicNumber zeta_in_tower(const TowerPtr& t);
PadicNumber embed_cyclotomic(const Cyclotomic& c, const TowerPtr& t);

struct SlopesAndRoot {
  /// Newton slopes in ord_p units divided by the degree of y.
  std::vector<Slope> slopes;
  PadicNumber alpha0;
  /// Reversed polynomial at alpha0.
  PadicNumber residual;
  int hensel_steps = 0;
  /// Remainder of P(T) divided by (1 - alpha0 T) is zero.
  bool divides = false;
};

/// Slopes of prod(1 - alpha_i T) and the unit root alpha0, Hensel-lifted on
/// the reversed polynomial from alpha0 = -c_1. SlopeError unless the slopes
/// are 0, 1, ..., n each once.
SlopesAndRoot slopes_and_unit_root(const std::vector<PadicNumber>& poly, int degree_y);

struct KloostermanFibre {
  KloostermanSums sums;
  std::vector<Cyclotomic> poly;
  SlopesAndRoot root;
};

/// Sums, polynomial, slopes and unit root for one point, with m_max = 2(n+1).
KloostermanFibre kloosterman_fibre(const KloostermanFamily& fam, const ClosedPoint& y, const TowerPtr& t);

/// prod over closed points y of G_m / F_p with deg y <= D of
/// 1/(1 - kappa(alpha0(y)) T^{deg y}).
TruncatedSeries unit_root_L(const KloostermanFamily& fam, const CharacterPoint& kappa, int D, const TowerPtr& t);

}  // namespace sigmalab
