#include "sigmalab/finite_field.hpp"

#include <map>
#include <mutex>
#include <tuple>

#include "sigmalab/errors.hpp"

namespace sigmalab {
namespace fp {

FpPoly trim(FpPoly a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

FpPoly mul(const FpPoly& a, const FpPoly& b, uint32_t p) {
  if (a.empty() || b.empty()) return {};
  std::vector<uint64_t> acc(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) acc[i + j] = (acc[i + j] + uint64_t(a[i]) * b[j]) % p;
  FpPoly r(acc.begin(), acc.end());
  return trim(r);
}

static uint32_t inv_mod_p(uint32_t a, uint32_t p) {
  uint64_t r = 1, b = a % p, e = p - 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return uint32_t(r);
}

FpPoly rem(FpPoly a, const FpPoly& m, uint32_t p) {
  a = trim(a);
  if (m.empty()) throw DomainError("polynomial division by zero");
  const uint32_t lead_inv = inv_mod_p(m.back(), p);
  while (a.size() >= m.size()) {
    const uint64_t c = uint64_t(a.back()) * lead_inv % p;
    const size_t shift = a.size() - m.size();
    for (size_t i = 0; i < m.size(); ++i)
      a[shift + i] = uint32_t((a[shift + i] + (p - c) * m[i]) % p);
    a = trim(a);
  }
  return a;
}

FpPoly sub(const FpPoly& a, const FpPoly& b, uint32_t p) {
  FpPoly r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < r.size(); ++i) {
    const uint32_t x = i < a.size() ? a[i] : 0;
    const uint32_t y = i < b.size() ? b[i] : 0;
    r[i] = (x + p - y) % p;
  }
  return trim(r);
}

FpPoly gcd(FpPoly a, FpPoly b, uint32_t p) {
  a = trim(a);
  b = trim(b);
  while (!b.empty()) {
    FpPoly r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

static FpPoly powmod(FpPoly base, uint64_t e, const FpPoly& m, uint32_t p) {
  FpPoly r{1};
  base = rem(base, m, p);
  while (e) {
    if (e & 1) r = rem(mul(r, base, p), m, p);
    base = rem(mul(base, base, p), m, p);
    e >>= 1;
  }
  return r;
}

// Ben-Or: g of degree k is irreducible iff gcd(t^{p^i} - t, g) = 1 for i <= k/2.
bool is_irreducible(const FpPoly& g, uint32_t p) {
  const int k = int(g.size()) - 1;
  if (k < 1) return false;
  if (k == 1) return true;
  FpPoly h{0, 1};
  for (int i = 1; i <= k / 2; ++i) {
    h = powmod(h, p, g, p);
    FpPoly d = gcd(g, sub(h, FpPoly{0, 1}, p), p);
    if (d.size() > 1) return false;
  }
  return true;
}

}  // namespace fp

FpPoly lowest_irreducible(uint32_t p, int k) {
  if (k < 1) throw DomainError("field degree must be positive");
  uint64_t count = 1;
  for (int i = 0; i < k; ++i) count *= p;
  for (uint64_t code = 0; code < count; ++code) {
    FpPoly g(k + 1, 0);
    uint64_t c = code;
    for (int i = 0; i < k; ++i) {
      g[i] = uint32_t(c % p);
      c /= p;
    }
    g[k] = 1;
    if (fp::is_irreducible(g, p)) return g;
  }
  throw DomainError("no irreducible polynomial found");
}

GaloisField::GaloisField(uint32_t p, int k) : p_(p), k_(k), g_(lowest_irreducible(p, k)) {
  pw_.assign(k + 1, 1);
  for (int i = 1; i <= k; ++i) pw_[i] = pw_[i - 1] * p;
  size_ = pw_[k];
  frob_cols_.resize(k);
  for (int i = 0; i < k; ++i) {
    FpPoly ti(i + 1, 0);
    ti[i] = 1;
    FpPoly r = fp::powmod(ti, p, g_, p);
    r.resize(k, 0);
    frob_cols_[i] = r;
  }
  trace_basis_.assign(k, 0);
  for (int i = 0; i < k; ++i) {
    uint64_t a = pw_[i];
    uint64_t s = 0;
    for (int j = 0; j < k; ++j) {
      s = add(s, a);
      a = frob(a);
    }
    trace_basis_[i] = uint32_t(s % p);  // the trace is a constant
  }
}

std::vector<uint32_t> GaloisField::digits(uint64_t a) const {
  std::vector<uint32_t> d(k_);
  for (int i = 0; i < k_; ++i) {
    d[i] = uint32_t(a % p_);
    a /= p_;
  }
  return d;
}

uint64_t GaloisField::encode(const std::vector<uint32_t>& d) const {
  uint64_t a = 0;
  for (int i = k_ - 1; i >= 0; --i) a = a * p_ + (i < int(d.size()) ? d[i] % p_ : 0);
  return a;
}

uint64_t GaloisField::add(uint64_t a, uint64_t b) const {
  uint64_t r = 0;
  for (int i = 0; i < k_; ++i) {
    r += ((a % p_ + b % p_) % p_) * pw_[i];
    a /= p_;
    b /= p_;
  }
  return r;
}

uint64_t GaloisField::neg(uint64_t a) const {
  uint64_t r = 0;
  for (int i = 0; i < k_; ++i) {
    r += ((p_ - a % p_) % p_) * pw_[i];
    a /= p_;
  }
  return r;
}

uint64_t GaloisField::sub(uint64_t a, uint64_t b) const { return add(a, neg(b)); }

uint64_t GaloisField::mul(uint64_t a, uint64_t b) const {
  FpPoly r = fp::rem(fp::mul(fp::trim(digits(a)), fp::trim(digits(b)), p_), g_, p_);
  return encode(r);
}

uint64_t GaloisField::pow(uint64_t a, uint64_t e) const {
  uint64_t r = 1;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

uint64_t GaloisField::inv(uint64_t a) const {
  if (a == 0) throw DomainError("inverse of zero in finite field");
  return pow(a, size_ - 2);
}

uint64_t GaloisField::frob(uint64_t a) const {
  std::vector<uint64_t> acc(k_, 0);
  const std::vector<uint32_t> d = digits(a);
  for (int i = 0; i < k_; ++i) {
    if (!d[i]) continue;
    for (int j = 0; j < k_; ++j) acc[j] += uint64_t(d[i]) * frob_cols_[i][j];
  }
  uint64_t r = 0;
  for (int j = k_ - 1; j >= 0; --j) r = r * p_ + acc[j] % p_;
  return r;
}

uint32_t GaloisField::trace(uint64_t a) const {
  uint64_t s = 0;
  const std::vector<uint32_t> d = digits(a);
  for (int i = 0; i < k_; ++i) s += uint64_t(d[i]) * trace_basis_[i];
  return uint32_t(s % p_);
}

int GaloisField::element_degree(uint64_t a) const {
  uint64_t b = frob(a);
  int d = 1;
  while (b != a) {
    b = frob(b);
    ++d;
  }
  return d;
}

uint64_t GaloisField::primitive_element() const {
  const uint64_t order = size_ - 1;
  std::vector<uint64_t> primes;
  uint64_t n = order;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) {
      primes.push_back(d);
      while (n % d == 0) n /= d;
    }
  if (n > 1) primes.push_back(n);
  for (uint64_t a = 1; a < size_; ++a) {
    bool ok = true;
    for (uint64_t q : primes)
      if (pow(a, order / q) == 1) {
        ok = false;
        break;
      }
    if (ok) return a;
  }
  throw DomainError("no primitive element");
}

uint64_t GaloisField::embed_from(const GaloisField& sub, uint64_t a) const {
  if (sub.p_ != p_ || k_ % sub.k_ != 0) throw ShapeError("field embedding degree mismatch");
  static std::mutex mu;
  static std::map<std::tuple<uint32_t, int, int>, uint64_t> roots;
  uint64_t beta = 0;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(p_, sub.k_, k_);
    auto it = roots.find(key);
    if (it == roots.end()) {
      bool found = false;
      for (uint64_t b = 0; b < size_ && !found; ++b) {
        uint64_t v = 0;
        for (int i = sub.k_; i >= 0; --i) v = add(mul(v, b), sub.g_[i]);
        if (v == 0) {
          beta = b;
          found = true;
        }
      }
      if (!found) throw DomainError("embedding root not found");
      roots.emplace(key, beta);
    } else {
      beta = it->second;
    }
  }
  const std::vector<uint32_t> d = sub.digits(a);
  uint64_t r = 0;
  for (int i = sub.k_ - 1; i >= 0; --i) r = add(mul(r, beta), d[i]);
  return r;
}

FieldPtr galois_field(uint32_t p, int k) {
  static std::mutex mu;
  static std::map<std::pair<uint32_t, int>, FieldPtr> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(p, k);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto f = std::make_shared<const GaloisField>(p, k);
  cache.emplace(key, f);
  return f;
}

}  // namespace sigmalab
