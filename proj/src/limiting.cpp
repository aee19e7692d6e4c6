#include "sigmalab/limiting.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "sigmalab/errors.hpp"
#include "sigmalab/weight.hpp"

namespace sigmalab {

LimitingIndex LimitingIndex::make(int n1, int Q) {
  if (n1 < 0 || Q < 0) throw DomainError("limiting index needs n1 >= 0 and Q >= 0");
  LimitingIndex J;
  J.n1 = n1;
  J.Q = Q;
  for (int d = 0; d <= Q; ++d) {
    std::vector<std::vector<int>> layer;
    std::vector<int> cur(n1, 0);
    // all compositions of d into n1 parts
    std::function<void(int, int)> rec = [&](int i, int left) {
      if (i == n1) {
        if (left == 0) layer.push_back(cur);
        return;
      }
      for (int v = 0; v <= left; ++v) {
        cur[i] = v;
        rec(i + 1, left - v);
      }
      cur[i] = 0;
    };
    if (n1 == 0) {
      if (d == 0) layer.push_back({});
    } else {
      rec(0, d);
    }
    std::sort(layer.begin(), layer.end());
    for (auto& e : layer) J.q.push_back(e);
  }
  return J;
}

int LimitingIndex::degree(const std::vector<int>& e) { return std::accumulate(e.begin(), e.end(), 0); }

int LimitingIndex::find(const std::vector<int>& e) const {
  if (int(e.size()) != n1 || degree(e) > Q) return -1;
  const auto it = std::find(q.begin(), q.end(), e);
  return it == q.end() ? -1 : int(it - q.begin());
}

LimitSign parse_limit_sign(const std::string& s) {
  if (s == "+" || s == "plus") return LimitSign::Plus;
  if (s == "-" || s == "minus") return LimitSign::Minus;
  throw ParseError("unknown limiting sign '" + s + "'");
}

std::string limit_sign_name(LimitSign s) { return s == LimitSign::Plus ? "+" : "-"; }

namespace {

// Polynomials in the I_1 variables with coefficients of type C, truncated at
// total degree Q.
template <class C>
using TPoly = std::map<std::vector<int>, C>;

template <class C>
TPoly<C> tpoly_mul(const TPoly<C>& A, const TPoly<C>& B, int Q) {
  TPoly<C> out;
  for (const auto& [ea, ca] : A)
    for (const auto& [eb, cb] : B) {
      std::vector<int> e(ea.size());
      for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      if (LimitingIndex::degree(e) > Q) continue;
      auto it = out.find(e);
      if (it == out.end())
        out.emplace(e, ca * cb);
      else
        it->second = it->second + ca * cb;
    }
  return out;
}

std::vector<int> other_indices(int n, int i0) {
  std::vector<int> I1;
  for (int i = 0; i < n; ++i)
    if (i != i0) I1.push_back(i);
  return I1;
}

// Columns of the V = 0 construction: scale_d(|q2|) prod lambda_i^{q2(i)},
// where entry(i', i) returns a_{i',i}.
template <class C, class Entry, class Scale>
std::vector<TPoly<C>> limiting_columns(const LimitingIndex& J, const std::vector<int>& I1, int i0, const C& one,
                                       Entry entry, Scale scale) {
  const int n1 = int(I1.size());
  std::vector<TPoly<C>> lambda;
  for (int i : I1) {
    TPoly<C> l;
    l.emplace(std::vector<int>(n1, 0), entry(i0, i));
    for (int k = 0; k < n1; ++k) {
      std::vector<int> e(n1, 0);
      e[k] = 1;
      l.emplace(e, entry(I1[k], i));
    }
    lambda.push_back(l);
  }
  std::vector<TPoly<C>> prods(J.size());
  std::vector<TPoly<C>> cols(J.size());
  for (size_t c = 0; c < J.size(); ++c) {
    const auto& q2 = J.q[c];
    if (LimitingIndex::degree(q2) == 0) {
      prods[c].emplace(q2, one);
    } else {
      const int k = int(std::find_if(q2.begin(), q2.end(), [](int v) { return v > 0; }) - q2.begin());
      std::vector<int> prev = q2;
      --prev[k];
      prods[c] = tpoly_mul(prods[size_t(J.find(prev))], lambda[k], J.Q);
    }
    TPoly<C> s;
    s.emplace(std::vector<int>(n1, 0), scale(LimitingIndex::degree(q2)));
    cols[c] = tpoly_mul(s, prods[c], J.Q);
  }
  return cols;
}

}  // namespace

bool limiting_disk_contains(const LaurentElement& corner, const PadicNumber& y) {
  if (y.is_zero()) return true;
  const LaurentElement L = laurent_log(corner);
  if (L.is_zero()) return true;
  const int mu = L.min_ord();
  const int p = int(corner.tower()->p());
  const int e = corner.tower()->e();
  const int oy = y.valuation();
  if (mu * (p - 1) > e) return (oy + mu) * (p - 1) > e;
  // smallest b with mu p^b (p - 1) >= e, then ord_p(y) > b
  int b = 0;
  int64_t v = int64_t(mu) * (p - 1);
  while (v < e) {
    v *= p;
    ++b;
  }
  return oy > b * e;
}

LimitingMatrix build_limiting(const SigmaMatrix& M, int r, LimitSign sign, const PadicNumber& y, int Q) {
  if (!M.i0()) throw FlagError("limiting construction needs a distinguished index");
  const MatrixFlags fl = M.flags();
  if (!fl.one_normal || !fl.standard_normal) throw FlagError("limiting construction needs a standard 1-normal matrix");
  if (M.nvars() < 1) throw ShapeError("limiting construction needs variables");
  if (Q < 0) throw DomainError("truncation order must be >= 0");
  const int i0 = *M.i0();
  const int n = M.rank();
  const TowerPtr& t = M.tower();
  const int P = std::min(M.prec(), Q + 1);
  const LaurentElement a = M.at(i0, i0).reduce(P);
  if (!limiting_disk_contains(a, y)) throw DomainError("y = " + y.to_string() + " lies outside the convergence disk");

  LaurentElement ay = LaurentElement::constant(PadicNumber::one(t, P), M.nvars());
  if (!y.is_zero()) {
    const PadicNumber ys = sign == LimitSign::Plus ? y.reduce(P) : -y.reduce(P);
    ay = laurent_exp(laurent_log(a).scale(ys.lift(P)));
  }
  const LaurentElement ainv = laurent_inverse(a);
  auto a_power = [&](int k) { return k >= 0 ? a.pow(k) : ainv.pow(-k); };

  const std::vector<int> I1 = other_indices(n, i0);
  LimitingMatrix out;
  out.index = LimitingIndex::make(int(I1.size()), Q);
  out.r = r;
  out.sign = sign;
  out.y = y;
  const LaurentElement one = LaurentElement::constant(PadicNumber::one(t, P), M.nvars());
  std::vector<LaurentElement> scales;
  for (int d = 0; d <= Q; ++d) scales.push_back(ay * a_power(r - d));
  auto scale = [&](int d) { return scales[d]; };
  auto entry = [&](int i, int j) { return M.at(i, j).reduce(P); };
  const auto cols = limiting_columns<LaurentElement>(out.index, I1, i0, one, entry, scale);

  const int size = int(out.index.size());
  out.B = SigmaMatrix(t, size, M.nvars(), P);
  for (int c = 0; c < size; ++c) {
    const int deg = LimitingIndex::degree(out.index.q[c]);
    for (const auto& [e, v] : cols[c]) {
      const int row = out.index.find(e);
      if (row < 0 || v.is_zero()) continue;
      if (v.min_ord() < std::min(deg, P))
        throw AssertionFailure("limiting column " + std::to_string(c) + " has ord " + std::to_string(v.min_ord()) +
                               " < |q2| = " + std::to_string(deg));
      out.B.set(row, c, v);
    }
  }
  out.B.set_i0(0);
  out.provenance = "limiting B^" + std::to_string(r) + (sign == LimitSign::Minus ? "_-" : "") + " y=" +
                   y.to_string() + " Q=" + std::to_string(Q);
  return out;
}

PadicMatrix FibreLimiting::evaluate(const PadicNumber& z) const {
  const TowerPtr& t = C.at(0).at(0).tower();
  const PadicNumber zz = z.tower()->ring_id() == t->ring_id() ? z : z.embed(t);
  int prec = eta.prec();
  if (!zz.is_zero()) {
    if (zz.valuation() < 1) throw DomainError("U-substitution needs ord z > 0");
    prec = std::min(prec, (eta.D() + 1) * zz.valuation());
  }
  PadicNumber s = PadicNumber::zero(t, prec);
  PadicNumber zk = PadicNumber::one(t, prec);
  for (int k = 0; k <= eta.D(); ++k) {
    s += eta[k] * zk;
    zk *= zz.reduce(prec);
  }
  PadicMatrix out = C;
  for (auto& row : out)
    for (auto& v : row) v = v * s;
  return out;
}

FibreLimiting fibre_limiting(const PadicMatrix& Mx, int i0, int r, LimitSign sign, int Q, int U_prec) {
  const int n = int(Mx.size());
  if (i0 < 0 || i0 >= n) throw ShapeError("distinguished index out of range");
  const PadicNumber& a = Mx[i0][i0];
  const TowerPtr& t = a.tower();
  const PadicNumber one = PadicNumber::one(t, a.prec());
  if (!(a - one).is_zero() && (a - one).valuation() < 1) throw FlagError("fibre corner is not a 1-unit");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == i0 && j == i0) continue;
      if (j == i0 && !Mx[i][j].is_zero()) throw FlagError("fibre column i0 is not zero below the corner");
      if (!Mx[i][j].is_zero() && Mx[i][j].valuation() < 1) throw FlagError("fibre matrix is not 1-normal");
    }
  const int P = std::min(a.prec(), Q + 1);
  FibreLimiting out;
  const std::vector<int> I1 = other_indices(n, i0);
  out.index = LimitingIndex::make(int(I1.size()), Q);
  const PadicNumber ar = a.reduce(P);
  const PadicNumber ainv = ar.inverse();
  const PadicNumber onep = PadicNumber::one(t, P);
  auto scale = [&](int d) {
    const int k = r - d;
    return k >= 0 ? ar.pow(k) : ainv.pow(-k);
  };
  auto entry = [&](int i, int j) { return Mx[i][j].reduce(P); };
  const auto cols = limiting_columns<PadicNumber>(out.index, I1, i0, onep, entry, scale);
  const size_t size = out.index.size();
  out.C = padic_zero_matrix(t, int(size), P);
  for (size_t c = 0; c < size; ++c)
    for (const auto& [e, v] : cols[c]) {
      const int row = out.index.find(e);
      if (row >= 0) out.C[size_t(row)][c] = v;
    }
  PadicNumber c = p_log(a).div_p_pow(1);
  if (sign == LimitSign::Minus) c = -c;
  out.eta = binomial_series(c, U_prec);
  return out;
}

FibreCommuteReport check_fibre_commutation(const SigmaMatrix& M, const ClosedPoint& pt, int r, LimitSign sign,
                                           const PadicNumber& y, int Q, int U_prec, int N) {
  if (!M.i0()) throw FlagError("fibre commutation needs a distinguished index");
  const LimitingMatrix B = build_limiting(M, r, sign, y, Q);
  const PadicMatrix G = fibre(B.B, pt);
  const FibreLimiting F = fibre_limiting(fibre(M, pt), *M.i0(), r, sign, Q, U_prec);
  const PadicMatrix E = F.evaluate(iota(y));
  FibreCommuteReport rep;
  rep.point = pt;
  rep.agreement = INT32_MAX;
  for (size_t i = 0; i < G.size(); ++i)
    for (size_t j = 0; j < G.size(); ++j) rep.agreement = std::min(rep.agreement, (G[i][j] - E[i][j]).valuation());
  rep.equal = rep.agreement >= N;
  return rep;
}

Rk1resReport verify_rk1res(const SigmaMatrix& M, int s, LimitSign sign, const PadicNumber& y, const BaseScheme& X,
                           int D, int N, int Q) {
  if (!M.i0()) throw FlagError("rk1res needs a distinguished index");
  const int i0 = *M.i0();
  const TowerPtr& t = M.tower();
  const AlphaFn alpha = alpha_from_entry(M.at(i0, i0));
  const PadicNumber ys = sign == LimitSign::Plus ? y : -y;
  Rk1resReport rep;
  rep.lhs = euler_product(X, D, t, M.prec(), [&](const ClosedPoint& pt) {
              const PadicNumber al = alpha(pt);
              PadicNumber v = al.pow(s);
              if (!y.is_zero()) v *= unit_pow(al, ys);
              return std::vector<PadicNumber>{PadicNumber::one(t, v.prec()), -v};
            }).reduce(N);
  TruncatedSeries rhs = TruncatedSeries::one(t, D, M.prec());
  for (int r = 1; r <= M.rank(); ++r) {
    const LimitingMatrix B = build_limiting(M, s - r, sign, y, Q);
    const TruncatedSeries Lr = euler_L(tensor(B.B, wedge(M, r)), X, D);
    const int expo = (r % 2 == 1 ? 1 : -1) * r;
    rhs = rhs * Lr.pow(expo);
  }
  rep.rhs = rhs.reduce(N);
  rep.first_difference = rep.lhs.first_difference(rep.rhs);
  rep.equal = rep.first_difference < 0 && rep.lhs.prec() >= N && rep.rhs.prec() >= N;
  return rep;
}

}  // namespace sigmalab
