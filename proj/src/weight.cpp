#include "sigmalab/weight.hpp"

#include <sstream>

#include "sigmalab/errors.hpp"

namespace sigmalab {

WeightModel WeightModel::for_tower(const TowerPtr& t) {
  if (t->e() != 1 || t->f() != 1)
    throw UnsupportedScheme("weight space is implemented over Q_p only, got " + t->descriptor());
  WeightModel w;
  w.p = t->p();
  w.q = t->q();
  w.a = w.p == 2 ? 1 : 0;
  // log(U^(1)) is p Z_p for odd p and 4 Z_2 for p = 2; m is clamped at -1.
  const int min_log_ord = w.p == 2 ? 2 : 1;
  w.m = std::max(-1, -min_log_ord);
  return w;
}

int64_t WeightModel::s_count() const {
  int64_t r = 1;
  for (int i = 0; i < a; ++i) r *= int64_t(p);
  return r;
}

std::string CharacterPoint::to_string() const {
  std::ostringstream os;
  if (weight) {
    os << "weight " << *weight;
    return os.str();
  }
  os << "(s=" << s << ", t=" << t << ", z=" << (z ? z->to_string() : std::string("0")) << ")";
  return os.str();
}

UnitDecomposition decompose_unit(const PadicNumber& r) {
  if (!r.is_unit()) throw DomainError("decompose_unit needs a unit, got " + r.to_string());
  const PadicNumber v = PadicNumber::teichmuller(r.tower(), r.residue(), r.prec());
  return {v, r * v.inverse()};
}

PadicNumber iota(const PadicNumber& y) {
  const PadicNumber py = y.mul_int(int64_t(y.tower()->p()));
  if (!exp_converges(py)) throw DomainError("iota(y) needs exp(p y) to converge, y = " + y.to_string());
  return p_exp(py) - PadicNumber::one(y.tower(), py.prec());
}

namespace {

// binom(c, k) for k = 0..K, computed from c lifted by `guard` digits.
std::vector<PadicNumber> binomials(const PadicNumber& c, int K, int guard) {
  const TowerPtr& t = c.tower();
  const PadicNumber cl = c.lift(c.prec() + guard);
  std::vector<PadicNumber> b{PadicNumber::one(t, cl.prec())};
  for (int k = 1; k <= K; ++k) {
    PadicNumber x = b.back() * (cl - PadicNumber::from_int(t, k - 1, cl.prec()));
    const int v = vp_int(k, t->p());
    int64_t u = k;
    for (int j = 0; j < v; ++j) u /= int64_t(t->p());
    if (v > 0) x = x.div_p_pow(v);
    b.push_back(x * PadicNumber::from_int(t, u, x.prec()).inverse());
  }
  return b;
}

}  // namespace

PadicNumber binomial_power(const PadicNumber& z, const PadicNumber& c) {
  const TowerPtr& t = c.tower();
  const int P = std::min(c.prec(), z.prec());
  if (z.is_zero()) return PadicNumber::one(t, P);
  const int oz = z.valuation();
  if (oz < 1) throw DomainError("binomial power needs ord z > 0");
  // binom(c, k) is integral, so terms past K vanish mod pi^P.
  const int K = (P + oz - 1) / oz;
  const int guard = t->e() * vp_factorial(K, t->p()) + t->e();
  const auto b = binomials(c, K, guard);
  const PadicNumber zl = z.lift(P + guard);
  PadicNumber acc = PadicNumber::one(t, P + guard);
  PadicNumber zk = PadicNumber::one(t, P + guard);
  for (int k = 1; k <= K; ++k) {
    zk *= zl;
    acc += b[k] * zk;
  }
  return acc.reduce(P);
}

TruncatedSeries binomial_series(const PadicNumber& c, int DU) {
  if (DU < 0) throw DomainError("U truncation must be >= 0");
  const TowerPtr& t = c.tower();
  const int loss = t->e() * vp_factorial(DU, t->p());
  if (c.prec() <= loss) throw PrecisionError("binomial series exhausts the precision of the exponent");
  const auto b = binomials(c, DU, loss);
  std::vector<PadicNumber> cs;
  for (const auto& x : b) cs.push_back(x.reduce(c.prec() - loss));
  return TruncatedSeries::from_coeffs(t, cs, DU);
}

PadicNumber formal_mult(const PadicNumber& x, const PadicNumber& z) {
  const PadicNumber r = binomial_power(z, x);
  return r - PadicNumber::one(r.tower(), r.prec());
}

CharacterPoint integer_weight_point(int64_t k, const TowerPtr& t) {
  const WeightModel w = WeightModel::for_tower(t);
  const int64_t sc = w.s_count(), tc = w.t_count();
  const int64_t s = ((k % sc) + sc) % sc;
  const int64_t tt = ((k % tc) + tc) % tc;
  return CharacterPoint::disk(s, tt, iota(PadicNumber::from_int(t, k - s)));
}

PadicNumber eval_character(const CharacterPoint& kappa, const PadicNumber& r) {
  if (kappa.weight) return r.pow(*kappa.weight);
  const WeightModel w = WeightModel::for_tower(r.tower());
  if (kappa.s < 0 || kappa.s >= w.s_count() || kappa.t < 0 || kappa.t >= w.t_count())
    throw DomainError("character component out of range: " + kappa.to_string());
  const UnitDecomposition d = decompose_unit(r);
  PadicNumber out = d.v.pow(kappa.t) * d.u.pow(kappa.s);
  if (kappa.z && !kappa.z->is_zero()) {
    if (kappa.z->valuation() < 1) throw DomainError("character coordinate must satisfy ord z > 0");
    const PadicNumber c = p_log(d.u).div_p_pow(1);
    out *= binomial_power(*kappa.z, c);
  }
  return out;
}

AlphaFn alpha_from_entry(const LaurentElement& a) {
  const SigmaMatrix A = SigmaMatrix::scalar(a);
  return [A](const ClosedPoint& pt) {
    const PadicNumber v = fibre(A, pt)[0][0];
    if (!v.in_base()) throw IntegralityError("rank-one fibre outside the base ring at " + pt.to_string());
    return v.to_base();
  };
}

TruncatedSeries twisted_L(const AlphaFn& alpha, const CharacterPoint& kappa, const BaseScheme& X, int D,
                          const TowerPtr& base, int prec) {
  return euler_product(X, D, base, prec, [&](const ClosedPoint& pt) {
    const PadicNumber k = eval_character(kappa, alpha(pt));
    return std::vector<PadicNumber>{PadicNumber::one(base, k.prec()), -k};
  });
}

namespace {

const LaurentElement& unit_corner(const SigmaMatrix& M) {
  if (!M.i0()) throw FlagError("two-variable L needs a distinguished index");
  const MatrixFlags fl = M.flags();
  if (!fl.one_normal || !fl.standard_normal) throw FlagError("two-variable L needs a standard 1-normal matrix");
  return M.at(*M.i0(), *M.i0());
}

// w_x(U) = xi^t mu^s (1+U)^{log(mu)/p}.
TruncatedSeries fibre_weight_series(const PadicNumber& alpha, int64_t s, int64_t t, int DU) {
  const UnitDecomposition d = decompose_unit(alpha);
  const PadicNumber c = p_log(d.u).div_p_pow(1);
  return binomial_series(c, DU).scale(d.v.pow(t) * d.u.pow(s));
}

}  // namespace

TruncatedSeries2 two_variable_L(const SigmaMatrix& M, int64_t s, int64_t t, const BaseScheme& X, int DT, int DU) {
  const WeightModel w = WeightModel::for_tower(M.tower());
  if (s < 0 || s >= w.s_count() || t < 0 || t >= w.t_count()) throw DomainError("component out of range");
  const AlphaFn alpha = alpha_from_entry(unit_corner(M));
  const auto pts = enumerate_closed_points(X, std::max(DT, 1));
  std::vector<TruncatedSeries> ws(pts.size());
  parallel_for(pts.size(), [&](size_t i) {
    if (pts[i].degree <= DT) ws[i] = fibre_weight_series(alpha(pts[i]), s, t, DU);
  });
  int prec = M.prec();
  for (const auto& x : ws)
    if (x.tower()) prec = std::min(prec, x.prec());
  TruncatedSeries2 H = TruncatedSeries2::one(M.tower(), DT, DU, prec);
  for (size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].degree > DT) continue;
    TruncatedSeries2 F = TruncatedSeries2::one(M.tower(), DT, DU, prec);
    for (int l = 0; l <= DU; ++l) F.set(pts[i].degree, l, -ws[i][l]);
    H = H * F.inverse();
  }
  return H;
}

TwoVariableCheck two_variable_check(const SigmaMatrix& M, int64_t s, int64_t t, const BaseScheme& X, int DT,
                                    int DU, const PadicNumber& y, int N) {
  TwoVariableCheck rep;
  const TruncatedSeries2 H = two_variable_L(M, s, t, X, DT, DU);
  rep.substituted = H.evaluate_U(iota(y)).reduce(N);
  const AlphaFn alpha = alpha_from_entry(unit_corner(M));
  rep.euler = euler_product(X, DT, M.tower(), M.prec(), [&](const ClosedPoint& pt) {
                const UnitDecomposition d = decompose_unit(alpha(pt));
                const PadicNumber k = d.v.pow(t) * d.u.pow(s) * unit_pow(d.u, y);
                return std::vector<PadicNumber>{PadicNumber::one(M.tower(), k.prec()), -k};
              }).reduce(N);
  rep.first_difference = rep.substituted.first_difference(rep.euler);
  rep.equal = rep.first_difference < 0 && rep.substituted.prec() >= N && rep.euler.prec() >= N;
  return rep;
}

std::vector<std::vector<mpz_class>> extract_g(const SigmaMatrix& M, int64_t s, int64_t t, const BaseScheme& X,
                                              int m_max, int DU) {
  const AlphaFn alpha = alpha_from_entry(unit_corner(M));
  const auto pts = enumerate_closed_points(X, m_max);
  std::vector<TruncatedSeries> ws(pts.size());
  parallel_for(pts.size(), [&](size_t i) { ws[i] = fibre_weight_series(alpha(pts[i]), s, t, DU); });
  std::vector<std::vector<mpz_class>> g(static_cast<size_t>(m_max) + 1);
  for (int m = 1; m <= m_max; ++m) {
    TruncatedSeries acc;
    for (size_t i = 0; i < pts.size(); ++i) {
      const int f = pts[i].degree;
      if (m % f != 0) continue;
      const TruncatedSeries term = ws[i].pow(m / f).scale(PadicNumber::from_int(M.tower(), -f));
      acc = acc.tower() ? acc + term : term;
    }
    g[m].assign(static_cast<size_t>(DU) + 1, 0);
    if (!acc.tower()) continue;
    for (int l = 0; l <= DU; ++l) g[m][l] = mpz_class(std::to_string(acc[l].signed_coeff(0, 0)));
  }
  return g;
}

}  // namespace sigmalab
