#include "sigmalab/padic.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

#include "sigmalab/errors.hpp"

namespace sigmalab {

namespace {

using u128 = unsigned __int128;

inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) { return uint64_t(u128(a) * b % m); }

inline uint64_t reduce_signed(int64_t v, uint64_t m) {
  if (m == 1) return 0;
  if (v >= 0) return uint64_t(v) % m;
  const uint64_t r = uint64_t(-(v + 1)) % m;  // avoids overflow at INT64_MIN
  return (m - 1 - r) % m;
}

int ceil_div(int a, int b) { return a <= 0 ? 0 : (a + b - 1) / b; }

struct Registry {
  std::mutex mu;
  std::map<std::tuple<uint64_t, std::vector<int64_t>, int, int>, TowerPtr> towers;
  std::map<std::tuple<uint64_t, std::vector<int64_t>, int>, int> ring_ids;
  std::map<std::tuple<uint64_t, std::vector<int64_t>>, int> base_ids;
};

Registry& registry() {
  static Registry r;
  return r;
}

bool is_prime(uint64_t p) {
  if (p < 2) return false;
  for (uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace

TowerPtr Tower::make(uint64_t p, const std::vector<int64_t>& eis, int f, int N) {
  if (!is_prime(p) || p > (1u << 20)) throw DomainError("p must be a small prime");
  if (eis.empty()) throw DomainError("Eisenstein polynomial must have degree >= 1");
  if (f < 1) throw DomainError("residue degree must be >= 1");
  if (N < 1) throw DomainError("precision N must be >= 1");
  const auto vp = [p](int64_t v) {
    if (v == 0) return 99;
    int k = 0;
    while (v % int64_t(p) == 0) {
      v /= int64_t(p);
      ++k;
    }
    return k;
  };
  if (vp(eis[0]) != 1) throw DomainError("Eisenstein constant term must have ord_p exactly 1");
  for (size_t k = 1; k < eis.size(); ++k)
    if (vp(eis[k]) < 1) throw DomainError("Eisenstein coefficients must be divisible by p");

  Registry& reg = registry();
  std::lock_guard<std::mutex> lock(reg.mu);
  auto key = std::make_tuple(p, eis, f, N);
  auto it = reg.towers.find(key);
  if (it != reg.towers.end()) return it->second;

  auto t = std::shared_ptr<Tower>(new Tower());
  t->p_ = p;
  t->e_ = int(eis.size());
  t->f_ = f;
  t->N_ = N;
  t->eis_ = eis;
  t->g_ = lowest_irreducible(uint32_t(p), f);
  t->pw_.push_back(1);
  while (true) {
    const u128 next = u128(t->pw_.back()) * p;
    if (next >= (u128(1) << 62)) break;
    t->pw_.push_back(uint64_t(next));
  }
  t->max_prec_ = int(t->pw_.size() - 1) * t->e_;
  if (N > t->max_prec_) throw ResourceError("precision exceeds the 62-bit coefficient cap");
  auto rk = std::make_tuple(p, eis, f);
  auto rit = reg.ring_ids.find(rk);
  if (rit == reg.ring_ids.end()) rit = reg.ring_ids.emplace(rk, int(reg.ring_ids.size()) + 1).first;
  t->ring_id_ = rit->second;
  auto bk = std::make_tuple(p, eis);
  auto bit = reg.base_ids.find(bk);
  if (bit == reg.base_ids.end()) bit = reg.base_ids.emplace(bk, int(reg.base_ids.size()) + 1).first;
  t->base_id_ = bit->second;
  reg.towers.emplace(key, t);
  return t;
}

TowerPtr Tower::qp(uint64_t p, int N, int f) { return make(p, {-int64_t(p)}, f, N); }

TowerPtr Tower::with_degree(int f) const { return make(p_, eis_, f, N_); }
TowerPtr Tower::with_precision(int N) const { return make(p_, eis_, f_, N); }

uint64_t Tower::ppow(int k) const {
  if (k < 0) return 1;
  if (k >= int(pw_.size())) throw PrecisionError("p-power exceeds the 62-bit coefficient cap");
  return pw_[k];
}

uint64_t Tower::modulus(int prec, int j) const { return ppow(ceil_div(prec - j, e_)); }

std::string Tower::descriptor() const {
  std::ostringstream os;
  os << "p=" << p_ << " e=" << e_ << " eis=";
  for (size_t k = 0; k < eis_.size(); ++k) os << (k ? "," : "") << eis_[k];
  os << " f=" << f_ << " g=";
  for (size_t k = 0; k < g_.size(); ++k) os << (k ? "," : "") << g_[k];
  os << " N=" << N_;
  return os.str();
}

std::string Ord::to_string() const {
  return exact ? std::to_string(value) : ">=" + std::to_string(value);
}

// --- PadicNumber -----------------------------------------------------------

PadicNumber::PadicNumber(TowerPtr tower, int prec) : tower_(std::move(tower)), prec_(prec) {
  if (!tower_) throw DomainError("null tower");
  if (prec_ < 0) prec_ = 0;
  if (prec_ > tower_->max_prec()) throw PrecisionError("precision exceeds the 62-bit cap");
  c_.assign(size_t(tower_->f()) * tower_->e(), 0);
}

void PadicNumber::normalize() {
  const int e = tower_->e();
  for (int j = 0; j < e; ++j) {
    const uint64_t m = tower_->modulus(prec_, j);
    for (int i = 0; i < tower_->f(); ++i) c_[size_t(i) * e + j] %= m;
  }
}

void PadicNumber::check_same(const PadicNumber& o) const {
  if (!tower_ || !o.tower_) throw DomainError("arithmetic on an uninitialized p-adic number");
  if (tower_->ring_id() != o.tower_->ring_id()) throw ShapeError("p-adic numbers from different towers");
}

PadicNumber PadicNumber::zero(const TowerPtr& t, int prec) { return PadicNumber(t, prec < 0 ? t->N() : prec); }

PadicNumber PadicNumber::one(const TowerPtr& t, int prec) { return from_int(t, 1, prec); }

PadicNumber PadicNumber::from_int(const TowerPtr& t, int64_t v, int prec) {
  PadicNumber r(t, prec < 0 ? t->N() : prec);
  r.c_[0] = reduce_signed(v, t->modulus(r.prec_, 0));
  return r;
}

PadicNumber PadicNumber::from_rational(const TowerPtr& t, int64_t num, int64_t den, int prec) {
  if (den == 0) throw DomainError("zero denominator");
  const int P = prec < 0 ? t->N() : prec;
  const int64_t p = int64_t(t->p());
  int vd = 0;
  while (den % p == 0) {
    den /= p;
    ++vd;
  }
  int vn = 0;
  if (num != 0)
    while (num % p == 0 && vn < vd) {
      num /= p;
      ++vn;
    }
  if (num != 0 && vn < vd) throw DomainError("rational constant is not p-integral");
  PadicNumber r = from_int(t, num, P);
  if (num == 0) return r;
  return r * from_int(t, den, P).inverse();
}

PadicNumber PadicNumber::from_coeffs(const TowerPtr& t, const std::vector<int64_t>& c, int prec) {
  PadicNumber r(t, prec < 0 ? t->N() : prec);
  const int e = t->e();
  for (size_t k = 0; k < c.size() && k < r.c_.size(); ++k)
    r.c_[k] = reduce_signed(c[k], t->modulus(r.prec_, int(k % e)));
  return r;
}

PadicNumber PadicNumber::pi(const TowerPtr& t, int prec) {
  if (t->e() == 1) return from_int(t, -t->eisenstein()[0], prec);
  std::vector<int64_t> c(size_t(t->e()), 0);
  c[1] = 1;
  return from_coeffs(t, c, prec);
}

PadicNumber PadicNumber::residue_lift(const TowerPtr& t, uint64_t code, int prec) {
  PadicNumber r(t, prec < 0 ? t->N() : prec);
  const uint64_t m = t->modulus(r.prec_, 0);
  for (int i = 0; i < t->f(); ++i) {
    r.c_[size_t(i) * t->e()] = (code % t->p()) % m;
    code /= t->p();
  }
  return r;
}

PadicNumber PadicNumber::teichmuller(const TowerPtr& t, uint64_t code, int prec) {
  PadicNumber x = residue_lift(t, code, prec);
  uint64_t qf = 1;
  for (int i = 0; i < t->f(); ++i) qf *= t->p();
  for (int it = 0; it <= x.prec_ + 2; ++it) {
    PadicNumber y = x.pow(int64_t(qf));
    if (y == x) return y;
    x = y;
  }
  throw ConvergenceError("Teichmuller iteration did not stabilize");
}

PadicNumber PadicNumber::from_digits(const TowerPtr& t, const std::vector<uint64_t>& digits, int prec) {
  PadicNumber r = zero(t, prec);
  PadicNumber pik = one(t, prec);
  const PadicNumber pie = pi(t, prec);
  for (size_t k = 0; k < digits.size() && int(k) < prec; ++k) {
    r += residue_lift(t, digits[k], prec) * pik;
    pik *= pie;
  }
  return r;
}

int64_t PadicNumber::signed_coeff(int i, int j) const {
  const uint64_t m = tower_->modulus(prec_, j);
  const uint64_t v = coeff(i, j);
  return v > m / 2 ? -int64_t(m - v) : int64_t(v);
}

PadicNumber PadicNumber::operator+(const PadicNumber& o) const {
  check_same(o);
  PadicNumber r(tower_, std::min(prec_, o.prec_));
  const int e = tower_->e();
  for (int j = 0; j < e; ++j) {
    const uint64_t m = tower_->modulus(r.prec_, j);
    for (int i = 0; i < tower_->f(); ++i) {
      const size_t k = size_t(i) * e + j;
      r.c_[k] = (c_[k] % m + o.c_[k] % m) % m;
    }
  }
  return r;
}

PadicNumber PadicNumber::operator-() const {
  PadicNumber r(tower_, prec_);
  const int e = tower_->e();
  for (int j = 0; j < e; ++j) {
    const uint64_t m = tower_->modulus(prec_, j);
    for (int i = 0; i < tower_->f(); ++i) {
      const size_t k = size_t(i) * e + j;
      r.c_[k] = (m - c_[k] % m) % m;
    }
  }
  return r;
}

PadicNumber PadicNumber::operator-(const PadicNumber& o) const { return *this + (-o); }

PadicNumber PadicNumber::operator*(const PadicNumber& o) const {
  check_same(o);
  const int prec = std::min(prec_, o.prec_);
  PadicNumber r(tower_, prec);
  if (prec == 0) return r;
  const int e = tower_->e(), f = tower_->f();
  const uint64_t P = tower_->modulus(prec, 0);
  const int E2 = 2 * e - 1, F2 = 2 * f - 1;
  thread_local std::vector<uint64_t> acc;
  acc.assign(static_cast<size_t>(E2) * F2, 0);
  auto at = [&](int i, int j) -> uint64_t& { return acc[size_t(i) * E2 + j]; };
  for (int i1 = 0; i1 < f; ++i1)
    for (int j1 = 0; j1 < e; ++j1) {
      const uint64_t a = c_[size_t(i1) * e + j1] % P;
      if (!a) continue;
      for (int i2 = 0; i2 < f; ++i2)
        for (int j2 = 0; j2 < e; ++j2) {
          const uint64_t b = o.c_[size_t(i2) * e + j2] % P;
          if (!b) continue;
          uint64_t& s = at(i1 + i2, j1 + j2);
          s = (s + mulmod(a, b, P)) % P;
        }
    }
  if (e > 1) {
    std::vector<uint64_t> neg(e);
    for (int k = 0; k < e; ++k) neg[k] = reduce_signed(-tower_->eisenstein()[k], P);
    for (int i = 0; i < F2; ++i)
      for (int j = E2 - 1; j >= e; --j) {
        const uint64_t v = at(i, j);
        if (!v) continue;
        at(i, j) = 0;
        for (int k = 0; k < e; ++k) {
          uint64_t& s = at(i, j - e + k);
          s = (s + mulmod(v, neg[k], P)) % P;
        }
      }
  }
  if (f > 1) {
    const FpPoly& g = tower_->residue_poly();
    for (int i = F2 - 1; i >= f; --i)
      for (int j = 0; j < e; ++j) {
        const uint64_t v = at(i, j);
        if (!v) continue;
        at(i, j) = 0;
        for (int k = 0; k < f; ++k) {
          if (!g[k]) continue;
          uint64_t& s = at(i - f + k, j);
          s = (s + mulmod(v, (P - g[k]) % P, P)) % P;
        }
      }
  }
  for (int i = 0; i < f; ++i)
    for (int j = 0; j < e; ++j) r.c_[size_t(i) * e + j] = at(i, j);
  r.normalize();
  return r;
}

PadicNumber PadicNumber::mul_int(int64_t k) const { return *this * from_int(tower_, k, prec_); }

bool PadicNumber::operator==(const PadicNumber& o) const { return (*this - o).is_zero(); }

bool PadicNumber::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](uint64_t v) { return v == 0; });
}

Ord PadicNumber::ord_pi() const {
  const int e = tower_->e();
  const uint64_t p = tower_->p();
  int best = prec_;
  bool exact = false;
  for (int i = 0; i < tower_->f(); ++i)
    for (int j = 0; j < e; ++j) {
      uint64_t v = c_[size_t(i) * e + j];
      if (!v) continue;
      int k = 0;
      while (v % p == 0) {
        v /= p;
        ++k;
      }
      const int o = e * k + j;
      if (o < best) {
        best = o;
        exact = true;
      }
    }
  return Ord{best, exact};
}

int PadicNumber::valuation() const { return ord_pi().value; }

bool PadicNumber::is_unit() const { return prec_ > 0 && valuation() == 0; }

bool PadicNumber::is_one_unit() const {
  return prec_ > 0 && (*this - one(tower_, prec_)).valuation() >= 1;
}

PadicNumber PadicNumber::pow(int64_t k) const {
  if (k < 0) return inverse().pow(-k);
  PadicNumber r = one(tower_, prec_);
  PadicNumber b = *this;
  uint64_t e = uint64_t(k);
  while (e) {
    if (e & 1) r *= b;
    e >>= 1;
    if (e) b *= b;
  }
  return r;
}

PadicNumber PadicNumber::inverse() const {
  if (prec_ == 0) return *this;
  if (!is_unit()) throw DomainError("inverse of a non-unit: " + to_string());
  uint64_t qf = 1;
  for (int i = 0; i < tower_->f(); ++i) qf *= tower_->p();
  PadicNumber y = reduce(1).pow(int64_t(qf - 2)).lift(prec_);
  const PadicNumber two = from_int(tower_, 2, prec_);
  const PadicNumber unit = one(tower_, prec_);
  for (int it = 0; it < 80; ++it) {
    if (*this * y == unit) return y;
    y = y * (two - *this * y);
  }
  throw ConvergenceError("Newton inversion did not converge");
}

PadicNumber PadicNumber::lift(int prec) const {
  if (prec <= prec_) return reduce(prec);
  PadicNumber r(tower_, prec);
  r.c_ = c_;
  return r;
}

PadicNumber PadicNumber::reduce(int prec) const {
  PadicNumber r(tower_, std::min(prec, prec_));
  r.c_ = c_;
  r.normalize();
  return r;
}

PadicNumber PadicNumber::div_p_pow(int k) const {
  if (k <= 0) return *this;
  const int e = tower_->e();
  const uint64_t pk = tower_->ppow(std::min(k, int(tower_->max_prec() / e)));
  const int new_prec = prec_ - e * k;
  if (new_prec < 0) throw PrecisionError("division by p^" + std::to_string(k) + " exhausts precision");
  for (uint64_t v : c_)
    if (v % pk != 0) throw DomainError("element not divisible by p^" + std::to_string(k));
  PadicNumber r(tower_, new_prec);
  for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] / pk;
  r.normalize();
  return r;
}

PadicNumber PadicNumber::div_pi_pow(int k) const {
  if (k <= 0) return *this;
  const int e = tower_->e();
  if (e == 1) {
    const int64_t u0 = -tower_->eisenstein()[0] / int64_t(tower_->p());
    PadicNumber r = div_p_pow(k);
    if (u0 != 1) r *= from_int(tower_, u0, r.prec_).inverse().pow(k);
    return r;
  }
  // pi * P(pi) = p * u0 with P(pi) = pi^{e-1} + c_{e-1} pi^{e-2} + ... + c_1.
  const std::vector<int64_t>& c = tower_->eisenstein();
  PadicNumber x = *this;
  for (int step = 0; step < k; ++step) {
    if (x.valuation() < 1) throw DomainError("element not divisible by pi");
    const int work = x.prec_ + e - 1;
    std::vector<int64_t> pc(static_cast<size_t>(e), 0);
    for (int m = 1; m < e; ++m) pc[m - 1] = c[m];
    pc[e - 1] = 1;
    const PadicNumber P = from_coeffs(tower_, pc, work);
    PadicNumber y = (x.lift(work) * P).div_p_pow(1);
    const int64_t u0 = -c[0] / int64_t(tower_->p());
    x = y * from_int(tower_, u0, y.prec_).inverse();
  }
  return x;
}

uint64_t PadicNumber::residue() const {
  if (prec_ < 1) throw PrecisionError("residue of a number with no digits");
  uint64_t code = 0;
  const uint64_t p = tower_->p();
  for (int i = tower_->f() - 1; i >= 0; --i) code = code * p + coeff(i, 0) % p;
  return code;
}

PadicNumber PadicNumber::embed(const TowerPtr& target) const {
  if (target->base_id() != tower_->base_id()) throw ShapeError("embedding between unrelated towers");
  if (target->ring_id() == tower_->ring_id()) return *this;
  if (tower_->f() != 1) throw ShapeError("only base-ring elements can be embedded");
  PadicNumber r(target, prec_);
  for (int j = 0; j < tower_->e(); ++j) r.c_[j] = c_[j];
  return r;
}

bool PadicNumber::in_base() const {
  const int e = tower_->e();
  for (size_t k = size_t(e); k < c_.size(); ++k)
    if (c_[k]) return false;
  return true;
}

PadicNumber PadicNumber::to_base() const {
  if (!in_base()) throw IntegralityError("element does not lie in the base ring: " + to_string());
  if (tower_->f() == 1) return *this;
  PadicNumber r(tower_->base(), prec_);
  for (int j = 0; j < tower_->e(); ++j) r.c_[j] = c_[j];
  return r;
}

std::vector<uint64_t> PadicNumber::serialize_digits() const {
  std::vector<uint64_t> out;
  PadicNumber x = *this;
  while (x.prec_ > 0) {
    const uint64_t d = x.residue();
    out.push_back(d);
    x = (x - residue_lift(tower_, d, x.prec_)).div_pi_pow(1);
  }
  return out;
}

std::string PadicNumber::to_string() const {
  if (!tower_) return "<invalid>";
  std::ostringstream os;
  const int e = tower_->e(), f = tower_->f();
  if (e == 1 && f == 1) {
    os << c_[0];
  } else {
    os << "[";
    for (int i = 0; i < f; ++i)
      for (int j = 0; j < e; ++j) os << (i || j ? "," : "") << coeff(i, j);
    os << "]";
  }
  os << " + O(pi^" << prec_ << ")";
  return os.str();
}

// --- exp / log -------------------------------------------------------------

int vp_int(int64_t n, uint64_t p) {
  if (n == 0) return 1 << 20;
  if (n < 0) n = -n;
  int k = 0;
  while (n % int64_t(p) == 0) {
    n /= int64_t(p);
    ++k;
  }
  return k;
}

int vp_factorial(int64_t n, uint64_t p) {
  int k = 0;
  for (int64_t m = n / int64_t(p); m > 0; m /= int64_t(p)) k += int(m);
  return k;
}

bool exp_converges(const PadicNumber& v) {
  const auto& t = v.tower();
  return int64_t(v.valuation()) * int64_t(t->p() - 1) > int64_t(t->e());
}

PadicNumber p_exp(const PadicNumber& x) {
  const TowerPtr& t = x.tower();
  const int N = x.prec();
  const int e = t->e();
  const int64_t p = int64_t(t->p());
  if (!exp_converges(x) && !(x.is_zero() && int64_t(N) * (p - 1) > e))
    throw DomainError("exp needs ord_p(x) > 1/(p-1), got ord_pi " + x.ord_pi().to_string());
  const int o = x.valuation();
  // ord_pi(x^n/n!) >= n*o - e*(n-1)/(p-1); keep every n where this is < N.
  int64_t nmax = 0;
  while ((nmax + 1) * o * (p - 1) - e * nmax < int64_t(N) * (p - 1)) ++nmax;
  const int W = N + e * vp_factorial(nmax, t->p());
  if (W > t->max_prec()) throw PrecisionError("exp needs more guard digits than the cap allows");
  const PadicNumber xw = x.lift(W);
  PadicNumber sum = PadicNumber::one(t, N);
  PadicNumber xn = PadicNumber::one(t, W);
  PadicNumber funit = PadicNumber::one(t, W);
  for (int64_t n = 1; n <= nmax; ++n) {
    xn *= xw;
    int64_t m = n;
    while (m % p == 0) m /= p;
    funit = funit.mul_int(m);
    const PadicNumber term = xn.div_p_pow(vp_factorial(n, t->p()));
    sum += (term * funit.reduce(term.prec()).inverse()).reduce(N);
  }
  return sum.reduce(N);
}

PadicNumber p_log(const PadicNumber& x) {
  const TowerPtr& t = x.tower();
  const int N = x.prec();
  const int e = t->e();
  if (N < 1 || !x.is_one_unit()) throw DomainError("log needs a 1-unit argument");
  const PadicNumber y = x - PadicNumber::one(t, N);
  if (y.is_zero()) return PadicNumber::zero(t, N);
  const int o = y.valuation();
  // ord_pi(y^n/n) >= n*o - e*floor(log_p n). Find the last n below N.
  auto floor_log = [&](int64_t n) {
    int k = 0;
    for (int64_t m = n; m >= int64_t(t->p()); m /= int64_t(t->p())) ++k;
    return k;
  };
  int64_t nmax = 1;
  const int64_t limit = int64_t(N + 64 * e) / o + 2;
  for (int64_t n = 1; n <= limit; ++n)
    if (n * o - e * floor_log(n) < N) nmax = n;
  int guard = 0;
  for (int64_t n = 1; n <= nmax; ++n) guard = std::max(guard, e * vp_int(n, t->p()));
  const int W = N + guard;
  if (W > t->max_prec()) throw PrecisionError("log needs more guard digits than the cap allows");
  const PadicNumber yw = y.lift(W);
  PadicNumber sum = PadicNumber::zero(t, N);
  PadicNumber yn = PadicNumber::one(t, W);
  for (int64_t n = 1; n <= nmax; ++n) {
    yn *= yw;
    const int v = vp_int(n, t->p());
    int64_t m = n;
    for (int k = 0; k < v; ++k) m /= int64_t(t->p());
    PadicNumber term = yn.div_p_pow(v);
    term = term * PadicNumber::from_int(t, m, term.prec()).inverse();
    if (n % 2 == 0) term = -term;
    sum += term.reduce(N);
  }
  return sum;
}

PadicNumber unit_pow(const PadicNumber& x, const PadicNumber& y) {
  const TowerPtr& t = x.tower();
  const int N = std::min(x.prec(), y.prec());
  if (y.reduce(N).is_zero()) return PadicNumber::one(t, N);
  const PadicNumber lx = p_log(x.reduce(N));
  const int total = y.valuation() + lx.valuation();
  if (!(int64_t(total) * int64_t(t->p() - 1) > t->e()) && !lx.is_zero())
    throw DomainError("unit_pow outside the convergence region");
  return p_exp((y.reduce(N) * lx).reduce(N));
}

}  // namespace sigmalab
