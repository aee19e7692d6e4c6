#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sigmalab/padic.hpp"

namespace sigmalab {

using Exponent = std::vector<int>;

/// Laurent polynomial in nvars variables over the tower's ring, all
/// coefficients at a common precision. Zero coefficients are never stored.
class LaurentElement {
 public:
  LaurentElement() = default;
  LaurentElement(TowerPtr tower, int nvars, int prec = -1);

  static LaurentElement constant(const PadicNumber& c, int nvars);
  static LaurentElement monomial(const PadicNumber& c, const Exponent& e);
  static LaurentElement variable(const TowerPtr& t, int nvars, int i, int prec = -1);

  bool valid() const { return tower_ != nullptr; }
  const TowerPtr& tower() const { return tower_; }
  int nvars() const { return nvars_; }
  int prec() const { return prec_; }
  const std::map<Exponent, PadicNumber>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t support_size() const { return terms_.size(); }

  PadicNumber coeff(const Exponent& e) const;
  /// Adds c * x^e.
  void add_term(const Exponent& e, const PadicNumber& c);

  LaurentElement operator+(const LaurentElement& o) const;
  LaurentElement operator-(const LaurentElement& o) const;
  LaurentElement operator*(const LaurentElement& o) const;
  LaurentElement operator-() const;
  LaurentElement& operator+=(const LaurentElement& o) { return *this = *this + o; }
  LaurentElement& operator*=(const LaurentElement& o) { return *this = *this * o; }
  LaurentElement scale(const PadicNumber& c) const;
  LaurentElement mul_int(int64_t k) const;
  /// Non-negative powers only.
  LaurentElement pow(int k) const;
  bool operator==(const LaurentElement& o) const;
  bool operator!=(const LaurentElement& o) const { return !(*this == o); }

  /// x_i -> x_i^{q^iterations}.
  LaurentElement sigma(int iterations = 1) const;
  /// Value at a point of (R_f)^nvars; coefficients are embedded into the
  /// point's tower. Coordinates paired with negative exponents must be units.
  PadicNumber evaluate(const std::vector<PadicNumber>& point) const;

  /// Smallest ord_pi over the coefficients; prec for zero.
  int min_ord() const;
  /// Largest |e_i| over the support.
  int max_abs_exponent() const;
  bool is_polynomial() const;
  bool is_constant() const;
  LaurentElement reduce(int prec) const;
  LaurentElement lift(int prec) const;
  /// Coefficient-wise map (result precision given explicitly).
  template <class Fn>
  LaurentElement map_coeffs(int prec, Fn fn) const {
    LaurentElement r(tower_, nvars_, prec);
    for (const auto& [e, c] : terms_) r.add_term(e, fn(c));
    return r;
  }
  std::string to_string() const;

 private:
  void check_same(const LaurentElement& o) const;
  TowerPtr tower_;
  int nvars_ = 0;
  int prec_ = 0;
  std::map<Exponent, PadicNumber> terms_;
};

/// The |.|_c log-norm max_alpha (floor(|alpha|/c) - ord_pi(g_alpha)) of a
/// polynomial; nullopt for zero. DomainError for negative exponents.
std::optional<int> norm_c(const LaurentElement& g, int c);

/// Default bound on Laurent support sizes in series expansions.
inline constexpr size_t kDefaultSupportCap = 20000;

/// Inverse of an element u0 * (1 + h) with u0 a constant unit and
/// min_ord(h) >= 1; UnitError otherwise, ResourceError past the support cap.
LaurentElement laurent_inverse(const LaurentElement& a, size_t support_cap = kDefaultSupportCap);
/// exp(a) for min_ord(a) * (p-1) > e.
LaurentElement laurent_exp(const LaurentElement& a, size_t support_cap = kDefaultSupportCap);
/// log(a) for a with a - 1 having min_ord >= 1.
LaurentElement laurent_log(const LaurentElement& a, size_t support_cap = kDefaultSupportCap);

}  // namespace sigmalab
