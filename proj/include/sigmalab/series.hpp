#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "sigmalab/laurent.hpp"
#include "sigmalab/padic.hpp"

namespace sigmalab {

/// Power series in T modulo T^{D+1}, coefficients at a common precision.
class TruncatedSeries {
 public:
  TruncatedSeries() = default;
  TruncatedSeries(TowerPtr tower, int D, int prec = -1);

  static TruncatedSeries one(const TowerPtr& t, int D, int prec = -1);
  /// Coefficients beyond D are dropped, missing ones are zero.
  static TruncatedSeries from_coeffs(const TowerPtr& t, const std::vector<PadicNumber>& c, int D);

  const TowerPtr& tower() const { return tower_; }
  int D() const { return D_; }
  int prec() const { return prec_; }
  const PadicNumber& operator[](int k) const { return c_.at(size_t(k)); }
  const std::vector<PadicNumber>& coeffs() const { return c_; }
  void set(int k, const PadicNumber& v);

  TruncatedSeries operator+(const TruncatedSeries& o) const;
  TruncatedSeries operator-(const TruncatedSeries& o) const;
  TruncatedSeries operator*(const TruncatedSeries& o) const;
  TruncatedSeries operator-() const;
  TruncatedSeries scale(const PadicNumber& c) const;
  /// Needs a unit constant term.
  TruncatedSeries inverse() const;
  TruncatedSeries pow(int k) const;
  /// T -> T^f.
  TruncatedSeries substitute_power(int f) const;
  TruncatedSeries truncate(int D) const;
  TruncatedSeries reduce(int prec) const;
  /// Same ring, ring id compared; equality of all coefficients modulo the
  /// smaller precision and the smaller truncation.
  bool operator==(const TruncatedSeries& o) const;
  bool operator!=(const TruncatedSeries& o) const { return !(*this == o); }
  /// Index of the first differing coefficient, or -1.
  int first_difference(const TruncatedSeries& o) const;
  /// Coefficients as signed integers (requires a Q_p-type tower, f = e = 1).
  std::vector<int64_t> signed_integers() const;
  std::string to_string() const;

 private:
  TowerPtr tower_;
  int D_ = 0;
  int prec_ = 0;
  std::vector<PadicNumber> c_;
};

/// K_1..K_D with T L'/L = sum K_m T^m. Requires L(0) = 1.
std::vector<PadicNumber> t_dlog(const TruncatedSeries& L);

/// The series L with L(0) = 1 and T L'/L = sum_{m>=1} K[m-1] T^m mod T^{D+1}.
/// PrecisionError if a division by m cannot be carried out.
TruncatedSeries series_from_dlog(const std::vector<PadicNumber>& K, int D);

/// Rational number as a reduced fraction.
struct Rational {
  int64_t num = 0;
  int64_t den = 1;
  static Rational make(int64_t n, int64_t d);
  bool operator==(const Rational&) const = default;
  std::string to_string() const;
};

struct Slope {
  Rational slope;
  int multiplicity = 0;
  bool operator==(const Slope&) const = default;
};

/// Lower convex hull of (i, ord(c_i)) for i <= up_to_degree. Slopes are in
/// ord_p units when p_normalized, else in ord_pi units. Coefficients that are
/// zero at working precision count as points (i, prec); PrecisionError if
/// such a point would lie on or below the hull of the exact points.
std::vector<Slope> newton_polygon(const std::vector<PadicNumber>& coeffs, int up_to_degree,
                                  bool p_normalized = true);

/// Power series in T and U modulo (T^{DT+1}, U^{DU+1}), dense storage.
class TruncatedSeries2 {
 public:
  TruncatedSeries2() = default;
  TruncatedSeries2(TowerPtr tower, int DT, int DU, int prec = -1);
  static TruncatedSeries2 one(const TowerPtr& t, int DT, int DU, int prec = -1);

  const TowerPtr& tower() const { return tower_; }
  int DT() const { return DT_; }
  int DU() const { return DU_; }
  int prec() const { return prec_; }
  const PadicNumber& at(int i, int j) const { return c_.at(size_t(i) * (DU_ + 1) + j); }
  void set(int i, int j, const PadicNumber& v);

  TruncatedSeries2 operator+(const TruncatedSeries2& o) const;
  TruncatedSeries2 operator*(const TruncatedSeries2& o) const;
  TruncatedSeries2 inverse() const;
  /// U -> z (ord_pi(z) >= 1), giving a series in T.
  TruncatedSeries evaluate_U(const PadicNumber& z) const;
  /// Coefficient of T^i as a U-series (stored as a T-series in U).
  TruncatedSeries coeff_T(int i) const;
  std::string to_string() const;

 private:
  TowerPtr tower_;
  int DT_ = 0, DU_ = 0, prec_ = 0;
  std::vector<PadicNumber> c_;
};

struct ConvextReport {
  bool holds = true;
  /// min over nonzero beta_{m,l} of ord_p(beta_{m,l}) + 2m; INT64_MAX if none.
  int64_t worst_margin = INT64_MAX;
  int witness_m = -1, witness_l = -1;
  /// Per-m minimum margin (index m, 0 unused).
  std::vector<int64_t> margins;
};

/// g[m][l] is the U^l coefficient of g_m (m = 1..m_max; g[0] ignored).
/// Expands f = exp(-sum g_m T^m / m) exactly over Q and checks
/// ord_p(beta_{m,l}) >= -2m. Throws AssertionFailure with the witness when
/// the bound fails.
ConvextReport convext_bound_check(const std::vector<std::vector<mpz_class>>& g, int m_max, int DU,
                                  uint64_t p);

/// ord_p of a nonzero rational.
int64_t ord_p(const mpq_class& x, uint64_t p);

}  // namespace sigmalab
