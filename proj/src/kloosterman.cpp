#include "sigmalab/kloosterman.hpp"

#include <functional>
#include <sstream>

#include "sigmalab/errors.hpp"
#include "sigmalab/sigma_matrix.hpp"

namespace sigmalab {

// --- Q(zeta_p) ----------------------------------------------------------------

namespace {

// Folds a vector indexed by powers of zeta (any length) into the basis
// 1..zeta^{p-2} using zeta^p = 1 and zeta^{p-1} = -(1 + ... + zeta^{p-2}).
std::vector<mpq_class> fold(uint64_t p, const std::vector<mpq_class>& w) {
  std::vector<mpq_class> r(p, 0);
  for (size_t k = 0; k < w.size(); ++k) r[k % p] += w[k];
  std::vector<mpq_class> out(p - 1, 0);
  for (size_t j = 0; j + 1 < p; ++j) out[j] = r[j] - r[p - 1];
  return out;
}

mpz_class pow_mpz(uint64_t p, int k) {
  mpz_class r = 1;
  for (int i = 0; i < k; ++i) r *= static_cast<unsigned long>(p);
  return r;
}

}  // namespace

Cyclotomic::Cyclotomic(uint64_t p) : p_(p), c_(p - 1, 0) {
  if (p < 2) throw DomainError("cyclotomic field needs a prime p");
}

Cyclotomic Cyclotomic::integer(uint64_t p, const mpq_class& v) {
  Cyclotomic r(p);
  r.c_[0] = v;
  return r;
}

Cyclotomic Cyclotomic::from_counts(uint64_t p, const std::vector<int64_t>& counts) {
  std::vector<mpq_class> w;
  for (int64_t c : counts) w.emplace_back(static_cast<long>(c));
  Cyclotomic r(p);
  r.c_ = fold(p, w);
  return r;
}

Cyclotomic Cyclotomic::operator+(const Cyclotomic& o) const {
  Cyclotomic r(p_);
  for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] + o.c_[i];
  return r;
}

Cyclotomic Cyclotomic::operator-(const Cyclotomic& o) const {
  Cyclotomic r(p_);
  for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] - o.c_[i];
  return r;
}

Cyclotomic Cyclotomic::operator*(const Cyclotomic& o) const {
  if (o.p_ != p_) throw ShapeError("cyclotomic elements of different fields");
  std::vector<mpq_class> w(2 * c_.size(), 0);
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < o.c_.size(); ++j) w[i + j] += c_[i] * o.c_[j];
  Cyclotomic r(p_);
  r.c_ = fold(p_, w);
  return r;
}

Cyclotomic Cyclotomic::scale(const mpq_class& k) const {
  Cyclotomic r = *this;
  for (auto& v : r.c_) v *= k;
  return r;
}

bool Cyclotomic::operator==(const Cyclotomic& o) const { return p_ == o.p_ && c_ == o.c_; }

bool Cyclotomic::is_zero() const {
  for (const auto& v : c_)
    if (v != 0) return false;
  return true;
}

bool Cyclotomic::is_integral() const {
  for (const auto& v : c_)
    if (v.get_den() != 1) return false;
  return true;
}

bool Cyclotomic::is_rational() const {
  for (size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return false;
  return true;
}

std::string Cyclotomic::to_string() const {
  if (is_rational()) return c_[0].get_str();
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << c_[i].get_str();
    if (i > 0) os << "*z^" << i;
  }
  return first ? "0" : os.str();
}

// --- sums ---------------------------------------------------------------------

void KloostermanFamily::validate() const {
  if (p < 2) throw DomainError("Kloosterman family needs a prime p");
  if (n < 0) throw DomainError("Kloosterman family needs n >= 0");
}

int kloosterman_m_limit(const KloostermanFamily& fam, int degree) {
  const int free = std::max(fam.n, 1);
  int m = 0;
  long double size = 1;
  while (true) {
    long double next = size;
    for (int i = 0; i < degree * free; ++i) next *= static_cast<long double>(fam.p);
    if (next > static_cast<long double>(kEnumerationGuard)) return m;
    size = next;
    ++m;
  }
}

namespace {

struct LogTables {
  FieldPtr F;
  uint64_t order = 0;               // |F^x|
  std::vector<uint8_t> trace_of;    // Tr(g^k)
  std::vector<uint64_t> exp_of;     // g^k
};

LogTables log_tables(uint64_t p, int k) {
  LogTables T;
  T.F = galois_field(uint32_t(p), k);
  T.order = T.F->size() - 1;
  const uint64_t g = T.F->primitive_element();
  T.trace_of.resize(T.order);
  T.exp_of.resize(T.order);
  uint64_t x = 1;
  for (uint64_t i = 0; i < T.order; ++i) {
    T.exp_of[i] = x;
    T.trace_of[i] = uint8_t(T.F->trace(x));
    x = T.F->mul(x, g);
  }
  return T;
}

uint64_t log_of(const LogTables& T, uint64_t a) {
  for (uint64_t i = 0; i < T.order; ++i)
    if (T.exp_of[i] == a) return i;
  throw DomainError("discrete log of zero");
}

uint64_t embed_point(const ClosedPoint& y, const FieldPtr& F) {
  if (y.coords.size() != 1 || y.coords[0] == 0) throw DomainError("Kloosterman fibres need a point of G_m");
  return F->embed_from(*galois_field(F->p(), y.degree), y.coords[0]);
}

}  // namespace

KloostermanSums kloosterman_sums(const KloostermanFamily& fam, const ClosedPoint& y, int m_max) {
  fam.validate();
  if (m_max < 1) throw DomainError("m_max must be >= 1");
  KloostermanSums out;
  out.y = y;
  out.m_requested = m_max;
  out.m_used = std::min(m_max, kloosterman_m_limit(fam, y.degree));
  const int need = std::min(m_max, fam.n + 2);
  if (out.m_used < need)
    throw ResourceError("Kloosterman enumeration for a degree " + std::to_string(y.degree) + " point exceeds " +
                        std::to_string(kEnumerationGuard) + " elements");
  const uint64_t p = fam.p;
  for (int m = 1; m <= out.m_used; ++m) {
    const LogTables T = log_tables(p, y.degree * m);
    const uint64_t ly = log_of(T, embed_point(y, T.F));
    std::vector<int64_t> counts(p, 0);
    // exponents of x_1..x_n; x_0 = y / (x_1...x_n)
    std::function<void(int, uint64_t, uint64_t)> rec = [&](int i, uint64_t lsum, uint64_t tsum) {
      if (i == fam.n) {
        const uint64_t l0 = (ly + T.order - lsum % T.order) % T.order;
        ++counts[(tsum + T.trace_of[l0]) % p];
        return;
      }
      for (uint64_t k = 0; k < T.order; ++k) rec(i + 1, lsum + k, tsum + T.trace_of[k]);
    };
    rec(0, 0, 0);
    out.K.push_back(Cyclotomic::from_counts(p, counts));
  }
  return out;
}

uint64_t kloosterman_curve_points(const KloostermanFamily& fam, const ClosedPoint& y, int m) {
  fam.validate();
  if (m > kloosterman_m_limit(fam, y.degree)) throw ResourceError("curve point count exceeds the enumeration guard");
  const FieldPtr F = galois_field(uint32_t(fam.p), y.degree * m);
  const uint64_t Q = F->size();
  // number of z with z^p - z = s
  std::vector<uint64_t> fibre(Q, 0);
  for (uint64_t z = 0; z < Q; ++z) ++fibre[F->sub(F->frob(z), z)];
  const uint64_t yE = embed_point(y, F);
  uint64_t total = 0;
  std::function<void(int, uint64_t, uint64_t)> rec = [&](int i, uint64_t prod, uint64_t sum) {
    if (i == fam.n) {
      const uint64_t x0 = F->mul(yE, F->inv(prod));
      total += fibre[F->add(sum, x0)];
      return;
    }
    for (uint64_t x = 1; x < Q; ++x) rec(i + 1, F->mul(prod, x), F->add(sum, x));
  };
  rec(0, 1, 0);
  return total;
}

std::vector<Cyclotomic> lpsi_polynomial(const KloostermanFamily& fam, const KloostermanSums& sums) {
  const uint64_t p = fam.p;
  const int M = sums.m_used;
  if (M < fam.n + 1) throw RecognitionError("need at least n + 1 sums to recognize the polynomial");
  std::vector<Cyclotomic> P;  // power sums of alpha_i
  const mpq_class sign = fam.n % 2 == 0 ? 1 : -1;
  for (int m = 1; m <= M; ++m) P.push_back(sums.K[m - 1].scale(sign));
  // Newton: k e_k = sum_{i=1}^k (-1)^{i-1} e_{k-i} P_i
  std::vector<Cyclotomic> e{Cyclotomic::integer(p, 1)};
  for (int k = 1; k <= M; ++k) {
    Cyclotomic acc(p);
    for (int i = 1; i <= k; ++i) {
      const Cyclotomic term = e[k - i] * P[i - 1];
      acc = i % 2 == 1 ? acc + term : acc - term;
    }
    e.push_back(acc.scale(mpq_class(1, k)));
  }
  for (int k = fam.n + 2; k <= M; ++k)
    if (!e[k].is_zero())
      throw RecognitionError("coefficient of T^" + std::to_string(k) + " is " + e[k].to_string() +
                             ", expected 0 past degree n+1");
  std::vector<Cyclotomic> c;
  for (int k = 0; k <= fam.n + 1; ++k) {
    if (!e[k].is_integral()) throw RecognitionError("non-integral coefficient " + e[k].to_string());
    c.push_back(k % 2 == 0 ? e[k] : e[k].scale(-1));
  }
  return c;
}

// --- p-adic side --------------------------------------------------------------

TowerPtr kloosterman_tower(uint64_t p, int N) {
  if (p == 2) return Tower::qp(2, N);
  std::vector<int64_t> eis(p - 1, 0);
  eis[0] = int64_t(p);  // pi^{p-1} + p
  return Tower::make(p, eis, 1, N);
}

PadicNumber zeta_in_tower(const TowerPtr& t) {
  const uint64_t p = t->p();
  if (p == 2) return PadicNumber::from_int(t, -1);
  if (uint64_t(t->e()) != p - 1 || t->eisenstein()[0] != int64_t(p))
    throw ShapeError("zeta_p needs the tower pi^{p-1} = -p");
  // zeta = 1 + pi z with z^{p-1} - sum_{k<p-1} (binom(p,k+1)/p) pi^k z^k = 0, z = 1 mod pi.
  const int P = t->N();
  const PadicNumber pi = PadicNumber::pi(t, P);
  std::vector<PadicNumber> h(p, PadicNumber::zero(t, P));
  h[p - 1] = PadicNumber::one(t, P);
  mpz_class binom = 1;
  PadicNumber pik = PadicNumber::one(t, P);
  for (uint64_t k = 0; k + 1 < p; ++k) {
    binom = binom * static_cast<unsigned long>(p - k) / static_cast<unsigned long>(k + 1);  // binom(p, k+1)
    const mpz_class b = binom / static_cast<unsigned long>(p);
    h[k] = -(pik.mul_int(b.get_si()));
    pik *= pi;
  }
  auto eval = [&](const PadicNumber& z, bool deriv) {
    PadicNumber acc = PadicNumber::zero(t, P);
    for (int k = int(p) - 1; k >= (deriv ? 1 : 0); --k) acc = acc * z + (deriv ? h[k].mul_int(k) : h[k]);
    return acc;
  };
  PadicNumber z = PadicNumber::one(t, P);
  for (int it = 0; it <= P + 2; ++it) {
    const PadicNumber next = z - eval(z, false) * eval(z, true).inverse();
    if (next == z) return PadicNumber::one(t, P) + pi * z;
    z = next;
  }
  throw ConvergenceError("zeta_p Newton iteration did not stabilize");
}

PadicNumber embed_cyclotomic(const Cyclotomic& c, const TowerPtr& t) {
  if (!c.is_integral()) throw DomainError("only cyclotomic integers embed: " + c.to_string());
  const int P = t->N();
  const mpz_class mod = pow_mpz(t->p(), (P + t->e() - 1) / t->e() + 1);
  const PadicNumber zeta = zeta_in_tower(t);
  PadicNumber acc = PadicNumber::zero(t, P);
  PadicNumber zk = PadicNumber::one(t, P);
  for (const auto& v : c.coeffs()) {
    mpz_class r = v.get_num() % mod;
    if (r < 0) r += mod;
    acc += zk.mul_int(r.get_si());
    zk *= zeta;
  }
  return acc;
}

SlopesAndRoot slopes_and_unit_root(const std::vector<PadicNumber>& poly, int degree_y) {
  if (poly.size() < 2) throw DomainError("slopes need a polynomial of degree >= 1");
  if (degree_y < 1) throw DomainError("point degree must be >= 1");
  const TowerPtr& t = poly[0].tower();
  const int d = int(poly.size()) - 1;
  SlopesAndRoot out;
  for (const auto& s : newton_polygon(poly, d, true))
    out.slopes.push_back({Rational::make(s.slope.num, s.slope.den * degree_y), s.multiplicity});
  std::vector<Slope> expect;
  for (int i = 0; i < d; ++i) expect.push_back({Rational::make(i, 1), 1});
  if (out.slopes != expect) {
    std::ostringstream os;
    for (const auto& s : out.slopes) os << s.slope.to_string() << "^" << s.multiplicity << " ";
    throw SlopeError("slopes " + os.str() + "differ from 0, 1, ..., " + std::to_string(d - 1));
  }
  // reversed polynomial f(X) = sum c_k X^{d-k}
  auto f = [&](const PadicNumber& x) {
    PadicNumber acc = PadicNumber::zero(t, x.prec());
    for (int k = 0; k <= d; ++k) acc = acc * x + poly[k];
    return acc;
  };
  auto df = [&](const PadicNumber& x) {
    PadicNumber acc = PadicNumber::zero(t, x.prec());
    for (int k = 0; k < d; ++k) acc = acc * x + poly[k].mul_int(d - k);
    return acc;
  };
  PadicNumber a = -poly[1];
  const int P = a.prec();
  for (int it = 0;; ++it) {
    if (it > 2 * P + 4) throw ConvergenceError("Hensel iteration did not stabilize");
    const PadicNumber der = df(a);
    if (!der.is_unit()) throw SlopeError("unit root is not simple");
    const PadicNumber next = a - f(a) * der.inverse();
    if (next == a) {
      out.hensel_steps = it;
      break;
    }
    a = next;
  }
  out.alpha0 = a;
  out.residual = f(a);
  PadicNumber q = poly[0];
  for (int k = 1; k <= d; ++k) q = poly[k] + a * q;
  out.divides = q.is_zero();
  return out;
}

KloostermanFibre kloosterman_fibre(const KloostermanFamily& fam, const ClosedPoint& y, const TowerPtr& t) {
  KloostermanFibre out;
  out.sums = kloosterman_sums(fam, y, 2 * (fam.n + 1));
  out.poly = lpsi_polynomial(fam, out.sums);
  std::vector<PadicNumber> c;
  for (const auto& v : out.poly) c.push_back(embed_cyclotomic(v, t));
  out.root = slopes_and_unit_root(c, y.degree);
  return out;
}

TruncatedSeries unit_root_L(const KloostermanFamily& fam, const CharacterPoint& kappa, int D, const TowerPtr& t) {
  const BaseScheme X = BaseScheme::torus(fam.p);
  return euler_product(X, D, t, t->N(), [&](const ClosedPoint& y) {
    const PadicNumber a = kloosterman_fibre(fam, y, t).root.alpha0;
    const PadicNumber k = eval_character(kappa, a);
    return std::vector<PadicNumber>{PadicNumber::one(t, k.prec()), -k};
  });
}

}  // namespace sigmalab
