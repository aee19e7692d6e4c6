#include "sigmalab/laurent.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "sigmalab/errors.hpp"

namespace sigmalab {

LaurentElement::LaurentElement(TowerPtr tower, int nvars, int prec)
    : tower_(std::move(tower)), nvars_(nvars), prec_(prec < 0 ? tower_->N() : prec) {
  if (nvars_ < 0) throw DomainError("negative variable count");
}

LaurentElement LaurentElement::constant(const PadicNumber& c, int nvars) {
  LaurentElement r(c.tower(), nvars, c.prec());
  r.add_term(Exponent(static_cast<size_t>(nvars), 0), c);
  return r;
}

LaurentElement LaurentElement::monomial(const PadicNumber& c, const Exponent& e) {
  LaurentElement r(c.tower(), int(e.size()), c.prec());
  r.add_term(e, c);
  return r;
}

LaurentElement LaurentElement::variable(const TowerPtr& t, int nvars, int i, int prec) {
  Exponent e(static_cast<size_t>(nvars), 0);
  e.at(static_cast<size_t>(i)) = 1;
  return monomial(PadicNumber::one(t, prec), e);
}

void LaurentElement::check_same(const LaurentElement& o) const {
  if (!tower_ || !o.tower_) throw DomainError("uninitialized Laurent element");
  if (tower_->ring_id() != o.tower_->ring_id()) throw ShapeError("Laurent elements over different rings");
  if (nvars_ != o.nvars_) throw ShapeError("Laurent elements in different variable counts");
}

PadicNumber LaurentElement::coeff(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? PadicNumber::zero(tower_, prec_) : it->second;
}

void LaurentElement::add_term(const Exponent& e, const PadicNumber& c) {
  if (int(e.size()) != nvars_) throw ShapeError("exponent length does not match variable count");
  if (c.tower()->ring_id() != tower_->ring_id()) throw ShapeError("coefficient from another ring");
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    PadicNumber v = c.reduce(prec_);
    if (v.prec() < prec_) {
      // A coarser coefficient lowers the precision of the whole element.
      *this = reduce(v.prec());
    }
    if (!v.is_zero()) terms_.emplace(e, v);
    return;
  }
  PadicNumber v = it->second + c;
  if (v.prec() < prec_) {
    *this = reduce(v.prec());
    it = terms_.find(e);
    if (it == terms_.end()) {
      if (!v.is_zero()) terms_.emplace(e, v);
      return;
    }
  }
  if (v.is_zero())
    terms_.erase(it);
  else
    it->second = v;
}

LaurentElement LaurentElement::operator+(const LaurentElement& o) const {
  check_same(o);
  LaurentElement r = prec_ <= o.prec_ ? *this : this->reduce(o.prec_);
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

LaurentElement LaurentElement::operator-() const {
  LaurentElement r(tower_, nvars_, prec_);
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
  return r;
}

LaurentElement LaurentElement::operator-(const LaurentElement& o) const { return *this + (-o); }

LaurentElement LaurentElement::operator*(const LaurentElement& o) const {
  check_same(o);
  const int prec = std::min(prec_, o.prec_);
  LaurentElement r(tower_, nvars_, prec);
  Exponent e(static_cast<size_t>(nvars_));
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_) {
      for (int i = 0; i < nvars_; ++i) e[i] = e1[i] + e2[i];
      r.add_term(e, c1 * c2);
    }
  return r;
}

LaurentElement LaurentElement::scale(const PadicNumber& c) const {
  LaurentElement r(tower_, nvars_, std::min(prec_, c.prec()));
  for (const auto& [e, v] : terms_) r.add_term(e, v * c);
  return r;
}

LaurentElement LaurentElement::mul_int(int64_t k) const { return scale(PadicNumber::from_int(tower_, k, prec_)); }

LaurentElement LaurentElement::pow(int k) const {
  if (k < 0) throw DomainError("negative Laurent power; use laurent_inverse");
  LaurentElement r = constant(PadicNumber::one(tower_, prec_), nvars_);
  LaurentElement b = *this;
  while (k) {
    if (k & 1) r = r * b;
    k >>= 1;
    if (k) b = b * b;
  }
  return r;
}

bool LaurentElement::operator==(const LaurentElement& o) const { return (*this - o).is_zero(); }

LaurentElement LaurentElement::sigma(int iterations) const {
  int64_t qf = 1;
  for (int i = 0; i < iterations; ++i) qf *= int64_t(tower_->q());
  LaurentElement r(tower_, nvars_, prec_);
  for (const auto& [e, c] : terms_) {
    Exponent f(e.size());
    for (size_t i = 0; i < e.size(); ++i) {
      const int64_t v = int64_t(e[i]) * qf;
      if (v > INT32_MAX || v < INT32_MIN) throw ResourceError("sigma exponent overflow");
      f[i] = int(v);
    }
    r.terms_.emplace(std::move(f), c);
  }
  return r;
}

PadicNumber LaurentElement::evaluate(const std::vector<PadicNumber>& point) const {
  if (int(point.size()) != nvars_) throw ShapeError("evaluation point has the wrong number of coordinates");
  TowerPtr target = tower_;
  int prec = prec_;
  for (const auto& c : point) {
    target = c.tower();
    prec = std::min(prec, c.prec());
  }
  if (nvars_ == 0) {
    PadicNumber s = PadicNumber::zero(target, prec);
    for (const auto& [e, c] : terms_) s += c.reduce(prec).embed(target);
    return s;
  }
  // Powers are cached per variable and exponent.
  std::vector<std::map<int, PadicNumber>> cache(static_cast<size_t>(nvars_));
  std::vector<PadicNumber> inv(static_cast<size_t>(nvars_));
  auto power = [&](int i, int k) -> const PadicNumber& {
    auto& m = cache[i];
    auto it = m.find(k);
    if (it != m.end()) return it->second;
    PadicNumber v;
    if (k >= 0) {
      v = point[i].reduce(prec).pow(k);
    } else {
      if (!inv[i].valid()) inv[i] = point[i].reduce(prec).inverse();
      v = inv[i].pow(-int64_t(k));
    }
    return m.emplace(k, v).first->second;
  };
  PadicNumber s = PadicNumber::zero(target, prec);
  for (const auto& [e, c] : terms_) {
    PadicNumber t = c.reduce(prec).embed(target);
    for (int i = 0; i < nvars_; ++i)
      if (e[i]) t *= power(i, e[i]);
    s += t;
  }
  return s;
}

int LaurentElement::min_ord() const {
  int m = prec_;
  for (const auto& [e, c] : terms_) m = std::min(m, c.valuation());
  return m;
}

int LaurentElement::max_abs_exponent() const {
  int m = 0;
  for (const auto& [e, c] : terms_)
    for (int v : e) m = std::max(m, std::abs(v));
  return m;
}

bool LaurentElement::is_polynomial() const {
  for (const auto& [e, c] : terms_)
    for (int v : e)
      if (v < 0) return false;
  return true;
}

bool LaurentElement::is_constant() const {
  for (const auto& [e, c] : terms_)
    for (int v : e)
      if (v != 0) return false;
  return true;
}

LaurentElement LaurentElement::reduce(int prec) const {
  LaurentElement r(tower_, nvars_, std::min(prec, prec_));
  for (const auto& [e, c] : terms_) {
    PadicNumber v = c.reduce(r.prec_);
    if (!v.is_zero()) r.terms_.emplace(e, v);
  }
  return r;
}

LaurentElement LaurentElement::lift(int prec) const {
  if (prec <= prec_) return reduce(prec);
  LaurentElement r(tower_, nvars_, prec);
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, c.lift(prec));
  return r;
}

std::string LaurentElement::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.to_string() << ")";
    for (int i = 0; i < nvars_; ++i)
      if (e[i]) os << "*x" << (nvars_ > 1 ? std::to_string(i + 1) : "") << "^" << e[i];
  }
  return os.str();
}

std::optional<int> norm_c(const LaurentElement& g, int c) {
  if (c <= 0) throw DomainError("norm_c needs c > 0");
  if (!g.is_polynomial()) throw DomainError("norm_c is defined on polynomials");
  std::optional<int> best;
  for (const auto& [e, v] : g.terms()) {
    int deg = 0;
    for (int k : e) deg += k;
    const int val = deg / c - v.valuation();
    if (!best || val > *best) best = val;
  }
  return best;
}

namespace {

void check_cap(const LaurentElement& a, size_t cap) {
  if (a.support_size() > cap)
    throw ResourceError("Laurent support " + std::to_string(a.support_size()) + " exceeds cap " +
                        std::to_string(cap));
}

}  // namespace

LaurentElement laurent_inverse(const LaurentElement& a, size_t support_cap) {
  const int N = a.prec();
  const TowerPtr& t = a.tower();
  const Exponent zero(size_t(a.nvars()), 0);
  const PadicNumber c0 = a.coeff(zero);
  if (!c0.is_unit()) throw UnitError("Laurent inverse needs a unit constant term");
  const PadicNumber c0inv = c0.inverse();
  LaurentElement h = a.scale(c0inv) - LaurentElement::constant(PadicNumber::one(t, N), a.nvars());
  if (h.is_zero()) return LaurentElement::constant(c0inv, a.nvars());
  const int o = h.min_ord();
  if (o < 1) throw UnitError("Laurent inverse needs a - const to be divisible by pi");
  // 1/(1+h) = sum (-h)^k, terms vanish once k * o >= N.
  LaurentElement s = LaurentElement::constant(PadicNumber::one(t, N), a.nvars());
  LaurentElement term = s;
  const LaurentElement mh = -h;
  for (int k = 1; k * o < N; ++k) {
    term = term * mh;
    s += term;
    check_cap(s, support_cap);
  }
  return s.scale(c0inv);
}

LaurentElement laurent_exp(const LaurentElement& a, size_t support_cap) {
  const TowerPtr& t = a.tower();
  const int N = a.prec();
  const int e = t->e();
  const int64_t p = int64_t(t->p());
  const LaurentElement one = LaurentElement::constant(PadicNumber::one(t, N), a.nvars());
  if (a.is_zero()) return one;
  const int o = a.min_ord();
  if (!(int64_t(o) * (p - 1) > e)) throw DomainError("Laurent exp outside its convergence region");
  int64_t nmax = 0;
  while ((nmax + 1) * o * (p - 1) - e * nmax < int64_t(N) * (p - 1)) ++nmax;
  const int W = N + e * vp_factorial(nmax, t->p());
  if (W > t->max_prec()) throw PrecisionError("Laurent exp needs more guard digits than the cap allows");
  const LaurentElement aw = a.lift(W);
  LaurentElement sum = one;
  LaurentElement an = LaurentElement::constant(PadicNumber::one(t, W), a.nvars());
  PadicNumber funit = PadicNumber::one(t, W);
  for (int64_t n = 1; n <= nmax; ++n) {
    an = an * aw;
    check_cap(an, support_cap);
    int64_t m = n;
    while (m % p == 0) m /= p;
    funit = funit.mul_int(m);
    const int v = vp_factorial(n, t->p());
    const PadicNumber finv = funit.inverse();
    sum += an.map_coeffs(N, [&](const PadicNumber& c) {
      PadicNumber d = c.div_p_pow(v);
      return (d * finv.reduce(d.prec())).lift(N);
    });
  }
  return sum.reduce(N);
}

LaurentElement laurent_log(const LaurentElement& a, size_t support_cap) {
  const TowerPtr& t = a.tower();
  const int N = a.prec();
  const int e = t->e();
  const LaurentElement one = LaurentElement::constant(PadicNumber::one(t, N), a.nvars());
  const LaurentElement y = a - one;
  if (y.is_zero()) return LaurentElement(t, a.nvars(), N);
  const int o = y.min_ord();
  if (o < 1) throw DomainError("Laurent log needs a 1-unit argument");
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
  if (W > t->max_prec()) throw PrecisionError("Laurent log needs more guard digits than the cap allows");
  const LaurentElement yw = y.lift(W);
  LaurentElement sum(t, a.nvars(), N);
  LaurentElement yn = LaurentElement::constant(PadicNumber::one(t, W), a.nvars());
  for (int64_t n = 1; n <= nmax; ++n) {
    yn = yn * yw;
    check_cap(yn, support_cap);
    const int v = vp_int(n, t->p());
    int64_t m = n;
    for (int k = 0; k < v; ++k) m /= int64_t(t->p());
    const PadicNumber minv = PadicNumber::from_int(t, n % 2 == 0 ? -m : m, W).inverse();
    sum += yn.map_coeffs(N, [&](const PadicNumber& c) {
      PadicNumber d = c.div_p_pow(v);
      return (d * minv.reduce(d.prec())).lift(N);
    });
  }
  return sum;
}

}  // namespace sigmalab
