#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "sigmalab/geometry.hpp"
#include "sigmalab/series.hpp"
#include "sigmalab/sigma_matrix.hpp"

namespace sigmalab {

/// Weight space of the base ring R = Z_p with the multiplicative formal group
/// F(Z) = Z, [x](U) = (1+U)^x - 1. UnsupportedScheme for towers other than Q_p.
struct WeightModel {
  uint64_t p = 2;
  uint64_t q = 2;
  /// Torsion of the 1-units is mu_{p^a}.
  int a = 0;
  /// Minimal m >= -1 with pi^m log(U^(1)) inside R.
  int m = -1;

  static WeightModel for_tower(const TowerPtr& t);
  int64_t s_count() const;
  int64_t t_count() const { return int64_t(q) - 1; }
  int64_t component_count() const { return s_count() * t_count(); }
};

/// A point of weight space: a component (s, t) and a disk coordinate z with
/// ord z > 0, or the integer weight shortcut r -> r^k.
struct CharacterPoint {
  int64_t s = 0;
  int64_t t = 0;
  std::optional<PadicNumber> z;
  std::optional<int64_t> weight;

  static CharacterPoint trivial() { return {}; }
  static CharacterPoint disk(int64_t s, int64_t t, const PadicNumber& z) { return {s, t, z, std::nullopt}; }
  static CharacterPoint integer(int64_t k) { return {0, 0, std::nullopt, k}; }
  std::string to_string() const;
};

struct UnitDecomposition {
  PadicNumber v;  // Teichmuller part, v^{q-1} = 1
  PadicNumber u;  // 1-unit part
};

/// r = v u with v = teichmuller(r mod pi). DomainError for non-units.
UnitDecomposition decompose_unit(const PadicNumber& r);

/// iota(y) = exp(p y) - 1. DomainError when exp(p y) does not converge.
PadicNumber iota(const PadicNumber& y);

/// (1+z)^c = sum binom(c, k) z^k for c in Z_p and ord z > 0, to the precision
/// of c and z.
PadicNumber binomial_power(const PadicNumber& z, const PadicNumber& c);

/// (1+U)^c mod U^{DU+1}; coefficient precision drops by e v_p(DU!).
TruncatedSeries binomial_series(const PadicNumber& c, int DU);

/// [x](z) = (1+z)^x - 1.
PadicNumber formal_mult(const PadicNumber& x, const PadicNumber& z);

/// Integer weight k as a component point (k mod p^a, k mod (q-1), iota(k - s)).
CharacterPoint integer_weight_point(int64_t k, const TowerPtr& t);

/// kappa(r) = v^t u^s (1+z)^{log(u)/p}, or r^k for an integer weight.
PadicNumber eval_character(const CharacterPoint& kappa, const PadicNumber& r);

/// Fibre value of a rank-one module at a closed point, in the base ring.
using AlphaFn = std::function<PadicNumber(const ClosedPoint&)>;

/// alpha_x = fibre of the 1x1 matrix (a) at x, descended to the base ring.
AlphaFn alpha_from_entry(const LaurentElement& a);

/// prod over closed points of 1/(1 - kappa(alpha_x) T^{deg x}) mod T^{D+1}.
TruncatedSeries twisted_L(const AlphaFn& alpha, const CharacterPoint& kappa, const BaseScheme& X, int D,
                          const TowerPtr& base, int prec);

/// H(T, U) = prod 1/(1 - xi^t mu^s (1+U)^{log(mu_x)/p} T^{deg x}) where
/// alpha_x = xi_x mu_x is the fibre of the corner of a standard 1-normal M.
TruncatedSeries2 two_variable_L(const SigmaMatrix& M, int64_t s, int64_t t, const BaseScheme& X, int DT, int DU);

struct TwoVariableCheck {
  TruncatedSeries substituted;  // H(T, iota(y))
  TruncatedSeries euler;        // prod 1/(1 - xi^t mu^s unit_pow(mu, y) T^deg)
  bool equal = false;
  int first_difference = -1;
};

/// H(T, iota(y)) against the Euler product with unit_pow, both mod pi^N.
TwoVariableCheck two_variable_check(const SigmaMatrix& M, int64_t s, int64_t t, const BaseScheme& X, int DT,
                                    int DU, const PadicNumber& y, int N);

/// g_m(U) = -sum_{f | m} f sum_{deg x = f} w_x(U)^{m/f} for m = 1..m_max,
/// with w_x(U) = xi^t mu^s (1+U)^{log(mu_x)/p}; g[0] is empty. Coefficients
/// are signed integer representatives modulo pi^prec.
std::vector<std::vector<mpz_class>> extract_g(const SigmaMatrix& M, int64_t s, int64_t t, const BaseScheme& X,
                                              int m_max, int DU);

}  // namespace sigmalab
