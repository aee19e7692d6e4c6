#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "sigmalab/finite_field.hpp"

namespace sigmalab {

class Tower;
using TowerPtr = std::shared_ptr<const Tower>;

/// Two-step tower R_f = O_K[t]/(g) over O_K = Z_p[pi]/(E(pi)).
///
/// E is a monic Eisenstein polynomial of degree e, given by its non-leading
/// coefficients c_0..c_{e-1}; g is the integer lift (digits in [0,p)) of
/// lowest_irreducible(p, f). The residue field of K is F_p, so q = p.
/// N is the default absolute precision in pi-adic digits.
class Tower {
 public:
  static TowerPtr make(uint64_t p, const std::vector<int64_t>& eisenstein, int f, int N);
  /// Q_p with pi = p (E = pi - p), residue degree f.
  static TowerPtr qp(uint64_t p, int N, int f = 1);

  uint64_t p() const { return p_; }
  uint64_t q() const { return p_; }
  int e() const { return e_; }
  int f() const { return f_; }
  int N() const { return N_; }
  const std::vector<int64_t>& eisenstein() const { return eis_; }
  const FpPoly& residue_poly() const { return g_; }
  /// Identifier shared by all towers describing the same ring (any N).
  int ring_id() const { return ring_id_; }
  /// Identifier of the base ring O_K (same for every f).
  int base_id() const { return base_id_; }

  TowerPtr with_degree(int f) const;
  TowerPtr with_precision(int N) const;
  TowerPtr base() const { return with_degree(1); }

  /// Largest precision whose coefficient moduli stay below 2^62.
  int max_prec() const { return max_prec_; }
  uint64_t ppow(int k) const;
  /// Modulus of the coefficient of t^i pi^j at absolute precision prec.
  uint64_t modulus(int prec, int j) const;
  std::string descriptor() const;

 private:
  Tower() = default;
  uint64_t p_ = 0;
  int e_ = 1, f_ = 1, N_ = 1;
  std::vector<int64_t> eis_;
  FpPoly g_;
  std::vector<uint64_t> pw_;
  int max_prec_ = 0;
  int ring_id_ = 0, base_id_ = 0;
};

/// pi-adic valuation; exact == false means "at least value" (zero at the
/// available precision).
struct Ord {
  int value = 0;
  bool exact = true;
  std::string to_string() const;
  bool operator==(const Ord&) const = default;
};

/// Element of R_f modulo pi^prec. The coefficient of t^i pi^j (0 <= j < e)
/// is stored reduced modulo p^ceil((prec - j)/e).
class PadicNumber {
 public:
  PadicNumber() = default;
  PadicNumber(TowerPtr tower, int prec);

  static PadicNumber zero(const TowerPtr& t, int prec = -1);
  static PadicNumber one(const TowerPtr& t, int prec = -1);
  static PadicNumber from_int(const TowerPtr& t, int64_t v, int prec = -1);
  /// num/den; DomainError if the p-part of den exceeds that of num.
  static PadicNumber from_rational(const TowerPtr& t, int64_t num, int64_t den, int prec = -1);
  /// Coefficients indexed i*e + j for t^i pi^j.
  static PadicNumber from_coeffs(const TowerPtr& t, const std::vector<int64_t>& c, int prec = -1);
  static PadicNumber pi(const TowerPtr& t, int prec = -1);
  /// The element whose t^i coefficient is the i-th base-p digit of code.
  static PadicNumber residue_lift(const TowerPtr& t, uint64_t code, int prec = -1);
  static PadicNumber teichmuller(const TowerPtr& t, uint64_t code, int prec = -1);
  /// Inverse of serialize_digits.
  static PadicNumber from_digits(const TowerPtr& t, const std::vector<uint64_t>& digits, int prec);

  bool valid() const { return tower_ != nullptr; }
  const TowerPtr& tower() const { return tower_; }
  int prec() const { return prec_; }
  uint64_t coeff(int i, int j) const { return c_[size_t(i) * tower_->e() + j]; }
  /// Signed representative of the t^i pi^j coefficient in (-m/2, m/2].
  int64_t signed_coeff(int i, int j) const;

  PadicNumber operator+(const PadicNumber& o) const;
  PadicNumber operator-(const PadicNumber& o) const;
  PadicNumber operator*(const PadicNumber& o) const;
  PadicNumber operator-() const;
  PadicNumber& operator+=(const PadicNumber& o) { return *this = *this + o; }
  PadicNumber& operator-=(const PadicNumber& o) { return *this = *this - o; }
  PadicNumber& operator*=(const PadicNumber& o) { return *this = *this * o; }
  PadicNumber mul_int(int64_t k) const;

  /// Equality modulo pi^min(prec).
  bool operator==(const PadicNumber& o) const;
  bool operator!=(const PadicNumber& o) const { return !(*this == o); }

  bool is_zero() const;
  bool is_unit() const;
  bool is_one_unit() const;
  Ord ord_pi() const;
  /// ord_pi, with prec returned for zero.
  int valuation() const;

  PadicNumber pow(int64_t k) const;
  PadicNumber inverse() const;
  /// Same representative, larger nominal precision.
  PadicNumber lift(int prec) const;
  /// Reduce to min(prec, this->prec()).
  PadicNumber reduce(int prec) const;
  /// Exact division by p^k; precision drops by e*k.
  PadicNumber div_p_pow(int k) const;
  /// Exact division by pi^k; precision drops by k.
  PadicNumber div_pi_pow(int k) const;

  /// Residue class modulo pi as an F_{p^f} code.
  uint64_t residue() const;
  /// Image in a tower of the same base with larger residue degree. Only
  /// elements of the base ring (f = 1) can be embedded.
  PadicNumber embed(const TowerPtr& target) const;
  /// True if all t^i coefficients with i > 0 vanish.
  bool in_base() const;
  PadicNumber to_base() const;

  /// Little-endian base-pi digits, each a residue code in [0, p^f).
  std::vector<uint64_t> serialize_digits() const;
  std::string to_string() const;

 private:
  void normalize();
  void check_same(const PadicNumber& o) const;
  TowerPtr tower_;
  int prec_ = 0;
  std::vector<uint64_t> c_;
};

/// Number of factors of p in n!.
int vp_factorial(int64_t n, uint64_t p);
int vp_int(int64_t n, uint64_t p);

/// exp(x) for ord_p(x) > 1/(p-1); DomainError otherwise.
PadicNumber p_exp(const PadicNumber& x);
/// log(x) for a 1-unit x; DomainError otherwise.
PadicNumber p_log(const PadicNumber& x);
/// exp(y log x) for a 1-unit x with ord_p(y) + ord_p(log x) > 1/(p-1).
PadicNumber unit_pow(const PadicNumber& x, const PadicNumber& y);
/// True if ord_pi(v) * (p - 1) > e, i.e. ord_p(v) > 1/(p-1).
bool exp_converges(const PadicNumber& v);

}  // namespace sigmalab
