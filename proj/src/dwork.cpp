#include "sigmalab/dwork.hpp"

#include <algorithm>
#include <cstdlib>

#include "sigmalab/errors.hpp"

namespace sigmalab {

namespace {

void require_curve(const BaseScheme& X, const char* what) {
  if (X.n != 1) throw UnsupportedScheme(std::string(what) + " is implemented for n = 1 only, got " + X.name());
}

int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

int ceil_div(int a, int b) { return -floor_div(-a, b); }

}  // namespace

LaurentElement frobenius_form(const BaseScheme& X, const TowerPtr& t, int prec) {
  require_curve(X, "frobenius_form");
  const int P = prec < 0 ? t->N() : prec;
  const PadicNumber q = PadicNumber::from_int(t, int64_t(t->q()), P);
  if (X.kind == SchemeKind::Torus) return LaurentElement::constant(q, 1);
  return LaurentElement::monomial(q, {int(t->q()) - 1});
}

LaurentElement theta_function(const LaurentElement& a, const BaseScheme& X) {
  const int q = int(a.tower()->q());
  if (X.kind == SchemeKind::AffineSpace && !a.is_polynomial())
    throw DomainError("theta on affine space needs a polynomial");
  const PadicNumber qn = PadicNumber::from_int(a.tower(), int64_t(a.tower()->q()), a.prec()).pow(a.nvars());
  LaurentElement r(a.tower(), a.nvars(), a.prec());
  for (const auto& [e, c] : a.terms()) {
    Exponent out(e.size());
    bool keep = true;
    for (size_t i = 0; i < e.size() && keep; ++i) {
      if (e[i] % q != 0) keep = false;
      out[i] = e[i] / q;
    }
    if (keep) r.add_term(out, c * qn);
  }
  return r;
}

LaurentElement theta_apply(const LaurentElement& a, const BaseScheme& X) {
  require_curve(X, "theta_apply");
  const int q = int(a.tower()->q());
  LaurentElement r(a.tower(), 1, a.prec());
  for (const auto& [e, c] : a.terms()) {
    const int m = X.kind == SchemeKind::Torus ? e[0] : e[0] + 1;
    if (m % q != 0) continue;
    r.add_term({X.kind == SchemeKind::Torus ? m / q : m / q - 1}, c);
  }
  return r;
}

PsiOperator::PsiOperator(SigmaMatrix M, BaseScheme X, int J) : M_(std::move(M)), X_(X), J_(J) {
  require_curve(X_, "psi");
  if (M_.nvars() != 1) throw ShapeError("psi needs a matrix in one variable");
  if (J_ < 0) throw DomainError("window radius must be >= 0");
  S_ = M_.max_abs_exponent();
  if (X_.kind == SchemeKind::AffineSpace)
    for (int i = 0; i < M_.rank(); ++i)
      for (int j = 0; j < M_.rank(); ++j)
        if (!M_.at(i, j).is_polynomial()) throw ShapeError("negative exponents on affine space");
}

int PsiOperator::stable_window() const {
  const int q = int(M_.tower()->q());
  if (X_.kind == SchemeKind::Torus) return ceil_div(S_, q - 1);
  return std::max(0, ceil_div(S_ + 1 - q, q - 1));
}

bool PsiOperator::in_window(int j) const {
  if (X_.kind == SchemeKind::Torus) return std::abs(j) <= J_;
  return j >= 0 && j <= J_;
}

std::vector<int> PsiOperator::window_exponents() const {
  std::vector<int> out;
  for (int j = X_.kind == SchemeKind::Torus ? -J_ : 0; j <= J_; ++j) out.push_back(j);
  return out;
}

LaurentVector PsiOperator::apply(const LaurentVector& b) const {
  const int n = M_.rank();
  if (int(b.size()) != n) throw ShapeError("psi applied to a vector of the wrong length");
  LaurentVector out;
  for (int i2 = 0; i2 < n; ++i2) {
    LaurentElement acc(M_.tower(), 1, M_.prec());
    for (int i1 = 0; i1 < n; ++i1) {
      if (b[i1].is_zero() || M_.at(i1, i2).is_zero()) continue;
      acc += theta_apply(b[i1] * M_.at(i1, i2), X_);
    }
    out.push_back(acc);
  }
  return out;
}

LaurentVector PsiOperator::restrict(const LaurentVector& b) const {
  LaurentVector out;
  for (const auto& v : b) {
    LaurentElement r(v.tower(), 1, v.prec());
    for (const auto& [e, c] : v.terms())
      if (in_window(e[0])) r.add_term(e, c);
    out.push_back(r);
  }
  return out;
}

PadicNumber PsiOperator::trace_power(int f) const {
  if (f < 1) throw DomainError("trace power must be >= 1");
  const int n = M_.rank();
  const TowerPtr& t = M_.tower();
  const int P = M_.prec();
  const std::vector<int> js = window_exponents();
  std::vector<PadicNumber> parts(size_t(n) * js.size(), PadicNumber::zero(t, P));
  parallel_for(parts.size(), [&](size_t idx) {
    const int i = int(idx / js.size());
    const int j = js[idx % js.size()];
    LaurentVector v(n, LaurentElement(t, 1, P));
    v[i] = LaurentElement::monomial(PadicNumber::one(t, P), {j});
    for (int k = 0; k < f; ++k) v = restrict(apply(v));
    parts[idx] = v[i].coeff({j});
  });
  PadicNumber s = PadicNumber::zero(t, P);
  for (const auto& x : parts) s += x;
  return s;
}

PadicMatrix PsiOperator::dense() const {
  const int n = M_.rank();
  const TowerPtr& t = M_.tower();
  const int P = M_.prec();
  const std::vector<int> js = window_exponents();
  const int B = n * int(js.size());
  PadicMatrix A = padic_zero_matrix(t, B, P);
  for (int i = 0; i < n; ++i)
    for (size_t c = 0; c < js.size(); ++c) {
      LaurentVector v(n, LaurentElement(t, 1, P));
      v[i] = LaurentElement::monomial(PadicNumber::one(t, P), {js[c]});
      const LaurentVector w = restrict(apply(v));
      for (int i2 = 0; i2 < n; ++i2)
        for (const auto& [e, x] : w[i2].terms()) {
          const int r = int(std::find(js.begin(), js.end(), e[0]) - js.begin());
          A[size_t(i2) * js.size() + r][size_t(i) * js.size() + c] = x;
        }
    }
  return A;
}

std::vector<DecayPoint> PsiOperator::decay() const {
  const int n = M_.rank();
  const TowerPtr& t = M_.tower();
  const int P = M_.prec();
  std::vector<DecayPoint> out;
  for (int j : window_exponents()) {
    int margin = P + std::abs(j);
    for (int i = 0; i < n; ++i) {
      LaurentVector v(n, LaurentElement(t, 1, P));
      v[i] = LaurentElement::monomial(PadicNumber::one(t, P), {j});
      for (const auto& w : apply(v))
        for (const auto& [e, x] : w.terms()) margin = std::min(margin, x.valuation() + std::abs(j) - std::abs(e[0]));
    }
    out.push_back({j, margin});
  }
  return out;
}

int PsiOperator::leak_ord() const {
  const int n = M_.rank();
  const TowerPtr& t = M_.tower();
  const int P = M_.prec();
  int leak = P;
  for (int i = 0; i < n; ++i)
    for (int j : window_exponents()) {
      LaurentVector v(n, LaurentElement(t, 1, P));
      v[i] = LaurentElement::monomial(PadicNumber::one(t, P), {j});
      for (const auto& w : apply(v))
        for (const auto& [e, x] : w.terms())
          if (!in_window(e[0])) leak = std::min(leak, x.valuation());
    }
  return leak;
}

PsiOperator build_psi(const SigmaMatrix& M, const BaseScheme& X, int r, int J, bool strict) {
  if (r != 0 && r != 1) throw DomainError("psi twist index must be 0 or 1");
  require_curve(X, "build_psi");
  SigmaMatrix A = M;
  if (r == 0) A = tensor(M, SigmaMatrix::scalar(frobenius_form(X, M.tower(), M.prec())));
  PsiOperator psi(A, X, J);
  if (strict && J < psi.stable_window()) {
    const int leak = psi.leak_ord();
    if (leak < A.prec())
      throw WindowError("window J = " + std::to_string(J) + " is not psi-stable (needs " +
                        std::to_string(psi.stable_window()) + "), leak has ord " + std::to_string(leak));
  }
  return psi;
}

int fredholm_working_precision(int N, int D, const TowerPtr& t) {
  return N + t->e() * vp_factorial(D, t->p()) + t->e();
}

TruncatedSeries det_from_traces(const std::vector<PadicNumber>& traces, int D) {
  std::vector<PadicNumber> K;
  for (const auto& x : traces) K.push_back(-x);
  return series_from_dlog(K, D);
}

FredholmResult fredholm_det(const SigmaMatrix& M, const BaseScheme& X, int r, int D, int N, int J0,
                            int max_doublings) {
  if (D < 1) throw DomainError("Fredholm truncation must be >= 1");
  if (J0 < 1) throw DomainError("initial window must be >= 1");
  FredholmResult res;
  std::vector<TruncatedSeries> history;
  int agree = 0;
  // Windows below the stable radius can agree on a wrong answer.
  int J = std::max(J0, build_psi(M, X, r, 0).stable_window());
  for (int step = 0; step <= max_doublings; ++step, J *= 2) {
    const PsiOperator psi = build_psi(M, X, r, J);
    std::vector<PadicNumber> tr;
    for (int f = 1; f <= D; ++f) tr.push_back(psi.trace_power(f));
    TruncatedSeries det = det_from_traces(tr, D);
    if (det.prec() < N)
      throw PrecisionError("Fredholm determinant keeps " + std::to_string(det.prec()) + " digits, need " +
                           std::to_string(N) + "; raise the matrix precision to " +
                           std::to_string(fredholm_working_precision(N, D, M.tower())));
    det = det.reduce(N);
    res.windows.push_back(J);
    if (!history.empty() && det == history.back()) {
      ++agree;
    } else {
      agree = 0;
    }
    history.push_back(det);
    res.traces = tr;
    if (agree >= 2) {
      res.det = det;
      res.J = J;
      res.doublings = step;
      return res;
    }
  }
  throw StabilizationError("Fredholm determinant did not stabilize after " + std::to_string(max_doublings) +
                           " window doublings");
}

PadicNumber trace_formula_pointsum(const SigmaMatrix& M, const BaseScheme& X, int i, int f) {
  require_curve(X, "trace_formula_pointsum");
  if (i != 0 && i != 1) throw DomainError("twist index must be 0 or 1");
  if (f < 1) throw DomainError("trace power must be >= 1");
  const TowerPtr& t = M.tower();
  const TowerPtr Rf = t->with_degree(f);
  const SigmaMatrix Dm = SigmaMatrix::scalar(frobenius_form(X, t, M.prec()));
  const FieldPtr F = galois_field(uint32_t(t->q()), f);
  if (F->size() > kEnumerationGuard) throw ResourceError("point sum over more than 1e7 points");
  PadicNumber total = PadicNumber::zero(Rf, M.prec());
  for (uint64_t x = 0; x < F->size(); ++x) {
    if (x == 0 && X.kind == SchemeKind::Torus) continue;
    const ClosedPoint pt{f, {x}};
    const PadicMatrix Mx = fibre(M, pt);
    PadicNumber tr = PadicNumber::zero(Rf, M.prec());
    for (int k = 0; k < M.rank(); ++k) tr += Mx[k][k];
    const PadicNumber Dx = fibre(Dm, pt)[0][0];
    const PadicNumber S = Dx - PadicNumber::one(Rf, Dx.prec());
    if (!S.is_unit()) throw UnitError("S_x is not a unit at " + pt.to_string());
    PadicNumber term = tr * S.inverse();
    if (i == 0) term *= Dx;
    total += term;
  }
  if (!total.in_base()) throw IntegralityError("point sum is not in the base ring: " + total.to_string());
  return total.to_base();
}

TraceFormulaReport trace_formula_L(const SigmaMatrix& M, const BaseScheme& X, int D, int N) {
  TraceFormulaReport rep;
  rep.euler = euler_L(M, X, D).reduce(N);
  const FredholmResult num = fredholm_det(M, X, 1, D, N);
  const FredholmResult den = fredholm_det(M, X, 0, D, N);
  rep.numerator = num.det;
  rep.denominator = den.det;
  rep.quotient = (num.det * den.det.inverse()).reduce(N);
  rep.doublings_numerator = num.doublings;
  rep.doublings_denominator = den.doublings;
  rep.J_numerator = num.J;
  rep.J_denominator = den.J;
  rep.first_difference = rep.quotient.first_difference(rep.euler);
  rep.equal = rep.first_difference < 0 && rep.euler.prec() >= N && rep.quotient.prec() >= N;
  return rep;
}

}  // namespace sigmalab
