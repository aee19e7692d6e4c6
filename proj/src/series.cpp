#include "sigmalab/series.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "sigmalab/errors.hpp"

namespace sigmalab {

TruncatedSeries::TruncatedSeries(TowerPtr tower, int D, int prec)
    : tower_(std::move(tower)), D_(D), prec_(prec < 0 ? tower_->N() : prec) {
  if (D_ < 0) throw DomainError("negative truncation order");
  c_.assign(static_cast<size_t>(D_) + 1, PadicNumber::zero(tower_, prec_));
}

TruncatedSeries TruncatedSeries::one(const TowerPtr& t, int D, int prec) {
  TruncatedSeries s(t, D, prec);
  s.c_[0] = PadicNumber::one(t, s.prec_);
  return s;
}

TruncatedSeries TruncatedSeries::from_coeffs(const TowerPtr& t, const std::vector<PadicNumber>& c, int D) {
  int prec = t->N();
  for (int k = 0; k <= D && k < int(c.size()); ++k) prec = std::min(prec, c[k].prec());
  TruncatedSeries s(t, D, prec);
  for (int k = 0; k <= D && k < int(c.size()); ++k) s.c_[k] = c[k].reduce(prec);
  return s;
}

void TruncatedSeries::set(int k, const PadicNumber& v) {
  if (k < 0 || k > D_) throw ShapeError("series index out of range");
  if (v.prec() < prec_) *this = reduce(v.prec());
  c_[k] = v.reduce(prec_);
}

TruncatedSeries TruncatedSeries::operator+(const TruncatedSeries& o) const {
  const int D = std::min(D_, o.D_);
  TruncatedSeries r(tower_, D, std::min(prec_, o.prec_));
  for (int k = 0; k <= D; ++k) r.c_[k] = c_[k] + o.c_[k];
  return r;
}

TruncatedSeries TruncatedSeries::operator-() const {
  TruncatedSeries r(tower_, D_, prec_);
  for (int k = 0; k <= D_; ++k) r.c_[k] = -c_[k];
  return r;
}

TruncatedSeries TruncatedSeries::operator-(const TruncatedSeries& o) const { return *this + (-o); }

TruncatedSeries TruncatedSeries::operator*(const TruncatedSeries& o) const {
  const int D = std::min(D_, o.D_);
  TruncatedSeries r(tower_, D, std::min(prec_, o.prec_));
  for (int i = 0; i <= D; ++i) {
    if (c_[i].is_zero()) continue;
    for (int j = 0; i + j <= D; ++j) {
      if (o.c_[j].is_zero()) continue;
      r.c_[i + j] += c_[i] * o.c_[j];
    }
  }
  return r;
}

TruncatedSeries TruncatedSeries::scale(const PadicNumber& c) const {
  TruncatedSeries r(tower_, D_, std::min(prec_, c.prec()));
  for (int k = 0; k <= D_; ++k) r.c_[k] = c_[k] * c;
  return r;
}

TruncatedSeries TruncatedSeries::inverse() const {
  if (!c_[0].is_unit()) throw DomainError("series inverse needs a unit constant term");
  TruncatedSeries r(tower_, D_, prec_);
  const PadicNumber inv0 = c_[0].inverse();
  r.c_[0] = inv0;
  for (int k = 1; k <= D_; ++k) {
    PadicNumber s = PadicNumber::zero(tower_, prec_);
    for (int i = 1; i <= k; ++i)
      if (!c_[i].is_zero()) s += c_[i] * r.c_[k - i];
    r.c_[k] = -(s * inv0);
  }
  return r;
}

TruncatedSeries TruncatedSeries::pow(int k) const {
  if (k < 0) return inverse().pow(-k);
  TruncatedSeries r = one(tower_, D_, prec_);
  TruncatedSeries b = *this;
  while (k) {
    if (k & 1) r = r * b;
    k >>= 1;
    if (k) b = b * b;
  }
  return r;
}

TruncatedSeries TruncatedSeries::substitute_power(int f) const {
  if (f < 1) throw DomainError("substitution power must be >= 1");
  TruncatedSeries r(tower_, D_, prec_);
  for (int k = 0; k * f <= D_; ++k) r.c_[size_t(k) * f] = c_[k];
  return r;
}

TruncatedSeries TruncatedSeries::truncate(int D) const {
  TruncatedSeries r(tower_, std::min(D, D_), prec_);
  for (int k = 0; k <= r.D_; ++k) r.c_[k] = c_[k];
  return r;
}

TruncatedSeries TruncatedSeries::reduce(int prec) const {
  TruncatedSeries r(tower_, D_, std::min(prec, prec_));
  for (int k = 0; k <= D_; ++k) r.c_[k] = c_[k].reduce(r.prec_);
  return r;
}

int TruncatedSeries::first_difference(const TruncatedSeries& o) const {
  const int D = std::min(D_, o.D_);
  for (int k = 0; k <= D; ++k)
    if (c_[k] != o.c_[k]) return k;
  return -1;
}

bool TruncatedSeries::operator==(const TruncatedSeries& o) const { return first_difference(o) < 0; }

std::vector<int64_t> TruncatedSeries::signed_integers() const {
  if (tower_->e() != 1 || tower_->f() != 1) throw ShapeError("integer coefficients need an unramified degree-1 tower");
  std::vector<int64_t> out;
  for (const auto& c : c_) out.push_back(c.signed_coeff(0, 0));
  return out;
}

std::string TruncatedSeries::to_string() const {
  std::ostringstream os;
  for (int k = 0; k <= D_; ++k) {
    if (k) os << " + ";
    os << "(" << c_[k].to_string() << ")T^" << k;
  }
  os << " + O(T^" << D_ + 1 << ")";
  return os.str();
}

std::vector<PadicNumber> t_dlog(const TruncatedSeries& L) {
  // T L' = K L with K = sum_{m>=1} K_m T^m.
  const TowerPtr& t = L.tower();
  if (L[0] != PadicNumber::one(t, L.prec())) throw DomainError("t_dlog needs L(0) = 1");
  std::vector<PadicNumber> K;
  for (int k = 1; k <= L.D(); ++k) {
    PadicNumber s = L[k].mul_int(k);
    for (int i = 1; i < k; ++i) s -= K[i - 1] * L[k - i];
    K.push_back(s);
  }
  return K;
}

TruncatedSeries series_from_dlog(const std::vector<PadicNumber>& K, int D) {
  if (int(K.size()) < D) throw ShapeError("series_from_dlog needs at least D power sums");
  if (D == 0 && K.empty()) throw ShapeError("series_from_dlog needs a tower");
  const TowerPtr& t = K.at(0).tower();
  int prec = t->N();
  for (int k = 0; k < D; ++k) prec = std::min(prec, K[k].prec());
  std::vector<PadicNumber> L{PadicNumber::one(t, prec)};
  for (int k = 1; k <= D; ++k) {
    PadicNumber s = PadicNumber::zero(t, prec);
    for (int i = 1; i <= k; ++i) s += K[i - 1] * L[k - i];
    const int v = vp_int(k, t->p());
    int64_t u = k;
    for (int j = 0; j < v; ++j) u /= int64_t(t->p());
    if (v > 0) {
      if (s.prec() < t->e() * v) throw PrecisionError("division by " + std::to_string(k) + " exhausts precision");
      try {
        s = s.div_p_pow(v);
      } catch (const DomainError&) {
        throw PrecisionError("power sums are not divisible by " + std::to_string(k) +
                             " at working precision");
      }
    }
    L.push_back(s * PadicNumber::from_int(t, u, s.prec()).inverse());
  }
  int out_prec = prec;
  for (const auto& c : L) out_prec = std::min(out_prec, c.prec());
  std::vector<PadicNumber> cs;
  for (const auto& c : L) cs.push_back(c.reduce(out_prec));
  return TruncatedSeries::from_coeffs(t, cs, D);
}

Rational Rational::make(int64_t n, int64_t d) {
  if (d == 0) throw DomainError("zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const int64_t g = std::gcd(n < 0 ? -n : n, d);
  return {n / (g ? g : 1), d / (g ? g : 1)};
}

std::string Rational::to_string() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

std::vector<Slope> newton_polygon(const std::vector<PadicNumber>& coeffs, int up_to_degree, bool p_normalized) {
  const int last = std::min(up_to_degree, int(coeffs.size()) - 1);
  std::vector<std::pair<int, int>> pts;
  int prec = 0;
  for (int i = 0; i <= last; ++i) {
    prec = std::max(prec, coeffs[i].prec());
    const Ord o = coeffs[i].ord_pi();
    if (o.exact) pts.emplace_back(i, o.value);
  }
  if (pts.empty()) throw PrecisionError("Newton polygon of a series that vanishes at working precision");
  // Lower hull, monotone chain.
  std::vector<std::pair<int, int>> hull;
  for (const auto& pt : pts) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      const int64_t cross =
          int64_t(b.first - a.first) * (pt.second - a.second) - int64_t(b.second - a.second) * (pt.first - a.first);
      if (cross <= 0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(pt);
  }
  // Inexact coefficients inside the hull's range must lie strictly above it.
  for (int i = 0; i <= hull.back().first; ++i) {
    const Ord o = coeffs[i].ord_pi();
    if (o.exact) continue;
    if (i < hull.front().first) throw PrecisionError("Newton polygon: leading coefficient is zero at working precision");
    for (size_t k = 0; k + 1 < hull.size(); ++k) {
      const auto& a = hull[k];
      const auto& b = hull[k + 1];
      if (i < a.first || i > b.first) continue;
      // hull height at i is a.second + (b.second-a.second)*(i-a.first)/(b.first-a.first)
      const int64_t lhs = int64_t(o.value) * (b.first - a.first);
      const int64_t rhs = int64_t(a.second) * (b.first - a.first) + int64_t(b.second - a.second) * (i - a.first);
      if (lhs <= rhs) throw PrecisionError("Newton polygon vertex at index " + std::to_string(i) + " is not resolved");
    }
  }
  const int64_t scale = p_normalized ? coeffs[0].tower()->e() : 1;
  std::vector<Slope> out;
  for (size_t k = 0; k + 1 < hull.size(); ++k) {
    const int len = hull[k + 1].first - hull[k].first;
    const Rational s = Rational::make(hull[k + 1].second - hull[k].second, int64_t(len) * scale);
    if (!out.empty() && out.back().slope == s)
      out.back().multiplicity += len;
    else
      out.push_back({s, len});
  }
  return out;
}

// --- two variables ---------------------------------------------------------

TruncatedSeries2::TruncatedSeries2(TowerPtr tower, int DT, int DU, int prec)
    : tower_(std::move(tower)), DT_(DT), DU_(DU), prec_(prec < 0 ? tower_->N() : prec) {
  if (DT_ < 0 || DU_ < 0) throw DomainError("negative truncation order");
  c_.assign(size_t(DT_ + 1) * (DU_ + 1), PadicNumber::zero(tower_, prec_));
}

TruncatedSeries2 TruncatedSeries2::one(const TowerPtr& t, int DT, int DU, int prec) {
  TruncatedSeries2 s(t, DT, DU, prec);
  s.c_[0] = PadicNumber::one(t, s.prec_);
  return s;
}

void TruncatedSeries2::set(int i, int j, const PadicNumber& v) {
  if (i < 0 || i > DT_ || j < 0 || j > DU_) throw ShapeError("series index out of range");
  c_[size_t(i) * (DU_ + 1) + j] = v.reduce(prec_);
}

TruncatedSeries2 TruncatedSeries2::operator+(const TruncatedSeries2& o) const {
  TruncatedSeries2 r(tower_, std::min(DT_, o.DT_), std::min(DU_, o.DU_), std::min(prec_, o.prec_));
  for (int i = 0; i <= r.DT_; ++i)
    for (int j = 0; j <= r.DU_; ++j) r.set(i, j, at(i, j) + o.at(i, j));
  return r;
}

TruncatedSeries2 TruncatedSeries2::operator*(const TruncatedSeries2& o) const {
  TruncatedSeries2 r(tower_, std::min(DT_, o.DT_), std::min(DU_, o.DU_), std::min(prec_, o.prec_));
  for (int i1 = 0; i1 <= r.DT_; ++i1)
    for (int j1 = 0; j1 <= r.DU_; ++j1) {
      const PadicNumber& a = at(i1, j1);
      if (a.is_zero()) continue;
      for (int i2 = 0; i1 + i2 <= r.DT_; ++i2)
        for (int j2 = 0; j1 + j2 <= r.DU_; ++j2) {
          const PadicNumber& b = o.at(i2, j2);
          if (b.is_zero()) continue;
          PadicNumber& dst = r.c_[size_t(i1 + i2) * (r.DU_ + 1) + j1 + j2];
          dst += a * b;
        }
    }
  return r;
}

TruncatedSeries2 TruncatedSeries2::inverse() const {
  if (!at(0, 0).is_unit()) throw DomainError("series inverse needs a unit constant term");
  const PadicNumber inv0 = at(0, 0).inverse();
  TruncatedSeries2 r(tower_, DT_, DU_, prec_);
  for (int i = 0; i <= DT_; ++i)
    for (int j = 0; j <= DU_; ++j) {
      if (i == 0 && j == 0) {
        r.set(0, 0, inv0);
        continue;
      }
      PadicNumber s = PadicNumber::zero(tower_, prec_);
      for (int k = 0; k <= i; ++k)
        for (int l = 0; l <= j; ++l) {
          if (k == 0 && l == 0) continue;
          if (at(k, l).is_zero()) continue;
          s += at(k, l) * r.at(i - k, j - l);
        }
      r.set(i, j, -(s * inv0));
    }
  return r;
}

TruncatedSeries TruncatedSeries2::evaluate_U(const PadicNumber& z) const {
  const int oz = z.valuation();
  if (oz < 1) throw DomainError("U-substitution needs ord_pi(z) >= 1");
  // Dropped terms are multiples of z^{DU+1}.
  const int prec = std::min({prec_, z.prec(), int(std::min<int64_t>(INT32_MAX, int64_t(DU_ + 1) * oz))});
  TruncatedSeries r(tower_, DT_, prec);
  std::vector<PadicNumber> zp{PadicNumber::one(tower_, prec)};
  for (int j = 1; j <= DU_; ++j) zp.push_back(zp.back() * z.reduce(prec));
  for (int i = 0; i <= DT_; ++i) {
    PadicNumber s = PadicNumber::zero(tower_, prec);
    for (int j = 0; j <= DU_; ++j)
      if (!at(i, j).is_zero()) s += at(i, j) * zp[j];
    r.set(i, s);
  }
  return r;
}

TruncatedSeries TruncatedSeries2::coeff_T(int i) const {
  TruncatedSeries r(tower_, DU_, prec_);
  for (int j = 0; j <= DU_; ++j) r.set(j, at(i, j));
  return r;
}

std::string TruncatedSeries2::to_string() const {
  std::ostringstream os;
  for (int i = 0; i <= DT_; ++i) os << "T^" << i << ": " << coeff_T(i).to_string() << "\n";
  return os.str();
}

// --- convext ---------------------------------------------------------------

int64_t ord_p(const mpq_class& x, uint64_t p) {
  if (x == 0) throw DomainError("ord_p of zero");
  auto vz = [p](mpz_class z) {
    int64_t k = 0;
    const mpz_class P(static_cast<unsigned long>(p));
    while (z % P == 0) {
      z /= P;
      ++k;
    }
    return k;
  };
  return vz(x.get_num()) - vz(x.get_den());
}

ConvextReport convext_bound_check(const std::vector<std::vector<mpz_class>>& g, int m_max, int DU, uint64_t p) {
  if (int(g.size()) <= m_max) throw ShapeError("convext needs g_1..g_{m_max}");
  using USeries = std::vector<mpq_class>;
  auto gu = [&](int m) {
    USeries s(static_cast<size_t>(DU) + 1, 0);
    for (int l = 0; l <= DU && l < int(g[m].size()); ++l) s[l] = g[m][l];
    return s;
  };
  // T f' = -(sum g_m T^m) f, i.e. k f_k = -sum_{i=1}^k g_i f_{k-i}.
  std::vector<USeries> f(static_cast<size_t>(m_max) + 1, USeries(static_cast<size_t>(DU) + 1, 0));
  f[0][0] = 1;
  ConvextReport rep;
  rep.margins.assign(static_cast<size_t>(m_max) + 1, INT64_MAX);
  for (int k = 1; k <= m_max; ++k) {
    USeries acc(static_cast<size_t>(DU) + 1, 0);
    for (int i = 1; i <= k; ++i) {
      const USeries gi = gu(i);
      for (int a = 0; a <= DU; ++a) {
        if (gi[a] == 0) continue;
        for (int b = 0; a + b <= DU; ++b)
          if (f[k - i][b] != 0) acc[a + b] += gi[a] * f[k - i][b];
      }
    }
    for (int l = 0; l <= DU; ++l) {
      f[k][l] = -acc[l] / k;
      f[k][l].canonicalize();
      if (f[k][l] == 0) continue;
      const int64_t margin = ord_p(f[k][l], p) + 2 * int64_t(k);
      rep.margins[k] = std::min(rep.margins[k], margin);
      if (margin < rep.worst_margin) {
        rep.worst_margin = margin;
        rep.witness_m = k;
        rep.witness_l = l;
      }
      if (margin < 0) {
        rep.holds = false;
        throw AssertionFailure("convext bound fails at T^" + std::to_string(k) + " U^" + std::to_string(l) +
                               ": beta = " + f[k][l].get_str() + ", ord_p = " +
                               std::to_string(ord_p(f[k][l], p)) + " < " + std::to_string(-2 * k));
      }
    }
  }
  return rep;
}

}  // namespace sigmalab
