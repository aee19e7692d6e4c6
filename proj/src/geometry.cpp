#include "sigmalab/geometry.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "sigmalab/errors.hpp"
#include "sigmalab/finite_field.hpp"

namespace sigmalab {

namespace {

uint64_t checked_pow(uint64_t b, int k, uint64_t cap) {
  uint64_t r = 1;
  for (int i = 0; i < k; ++i) {
    if (r > cap / b) return cap + 1;
    r *= b;
  }
  return r;
}

}  // namespace

std::string scheme_kind_name(SchemeKind k) { return k == SchemeKind::Torus ? "gm" : "a1"; }

SchemeKind parse_scheme_kind(const std::string& s) {
  if (s == "gm" || s == "torus") return SchemeKind::Torus;
  if (s == "a1" || s == "affine") return SchemeKind::AffineSpace;
  throw ParseError("unknown scheme kind '" + s + "'");
}

std::string BaseScheme::name() const {
  return (kind == SchemeKind::Torus ? "Gm^" : "A^") + std::to_string(n) + "/F_" + std::to_string(q);
}

void BaseScheme::validate() const {
  if (n < 1) throw DomainError("scheme dimension must be >= 1");
  if (q < 2) throw DomainError("residue field size must be >= 2");
}

uint64_t BaseScheme::count_points(int m) const {
  const uint64_t qm = checked_pow(q, m, UINT64_MAX / 2);
  const uint64_t base = kind == SchemeKind::Torus ? qm - 1 : qm;
  return checked_pow(base, n, UINT64_MAX / 2);
}

std::string ClosedPoint::to_string() const {
  std::ostringstream os;
  os << "deg " << degree << " (";
  for (size_t i = 0; i < coords.size(); ++i) os << (i ? "," : "") << coords[i];
  os << ")";
  return os.str();
}

std::vector<ClosedPoint> closed_points_of_degree(const BaseScheme& X, int f) {
  X.validate();
  if (checked_pow(X.q, f * X.n, kEnumerationGuard) > kEnumerationGuard)
    throw ResourceError("closed-point enumeration exceeds 10^7 tuples (q=" + std::to_string(X.q) +
                        ", f=" + std::to_string(f) + ", n=" + std::to_string(X.n) + ")");
  const FieldPtr F = galois_field(uint32_t(X.q), f);
  const uint64_t Q = F->size();
  const uint64_t start = X.kind == SchemeKind::Torus ? 1 : 0;
  const uint64_t width = Q - start;
  const uint64_t total = checked_pow(width, X.n, kEnumerationGuard);
  std::vector<int> deg(Q);
  for (uint64_t a = 0; a < Q; ++a) deg[a] = F->element_degree(a);
  std::vector<uint64_t> fr(Q);
  for (uint64_t a = 0; a < Q; ++a) fr[a] = F->frob(a);

  std::vector<ClosedPoint> out;
  std::vector<uint64_t> tup(X.n), img(X.n);
  for (uint64_t idx = 0; idx < total; ++idx) {
    uint64_t r = idx;
    for (int i = X.n - 1; i >= 0; --i) {
      tup[i] = start + r % width;
      r /= width;
    }
    int l = 1;
    for (uint64_t c : tup) l = std::lcm(l, deg[c]);
    if (l != f) continue;
    bool minimal = true;
    img = tup;
    for (int k = 1; k < f && minimal; ++k) {
      for (auto& c : img) c = fr[c];
      if (img < tup) minimal = false;
    }
    if (minimal) out.push_back(ClosedPoint{f, tup});
  }
  return out;
}

std::vector<ClosedPoint> enumerate_closed_points(const BaseScheme& X, int f_max) {
  X.validate();
  if (f_max < 1) return {};
  if (checked_pow(X.q, f_max * X.n, kEnumerationGuard) > kEnumerationGuard)
    throw ResourceError("closed-point enumeration exceeds 10^7 tuples (q^{f_max n} with q=" +
                        std::to_string(X.q) + ", f_max=" + std::to_string(f_max) +
                        ", n=" + std::to_string(X.n) + ")");
  std::vector<ClosedPoint> out;
  for (int f = 1; f <= f_max; ++f) {
    auto pts = closed_points_of_degree(X, f);
    out.insert(out.end(), pts.begin(), pts.end());
  }
  return out;
}

std::vector<std::vector<uint64_t>> orbit(const ClosedPoint& pt, uint64_t q) {
  const FieldPtr F = galois_field(uint32_t(q), pt.degree);
  std::vector<std::vector<uint64_t>> out{pt.coords};
  for (int k = 1; k < pt.degree; ++k) {
    auto next = out.back();
    for (auto& c : next) c = F->frob(c);
    out.push_back(next);
  }
  return out;
}

std::vector<PadicNumber> teich_lift_point(const ClosedPoint& pt, const TowerPtr& tower) {
  if (tower->f() != pt.degree)
    throw ShapeError("tower residue degree " + std::to_string(tower->f()) + " does not match point degree " +
                     std::to_string(pt.degree));
  std::vector<PadicNumber> out;
  out.reserve(pt.coords.size());
  for (uint64_t c : pt.coords) out.push_back(PadicNumber::teichmuller(tower, c));
  return out;
}

std::string points_table(const std::vector<ClosedPoint>& pts) {
  std::ostringstream os;
  for (const auto& pt : pts) {
    os << pt.degree;
    for (uint64_t c : pt.coords) os << ' ' << c;
    os << '\n';
  }
  return os.str();
}

}  // namespace sigmalab
