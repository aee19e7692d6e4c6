#include "sigmalab/sigma_matrix.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "sigmalab/errors.hpp"

namespace sigmalab {

// --- matrices over R_f -----------------------------------------------------

PadicMatrix padic_zero_matrix(const TowerPtr& t, int n, int prec) {
  return PadicMatrix(static_cast<size_t>(n), std::vector<PadicNumber>(size_t(n), PadicNumber::zero(t, prec)));
}

PadicMatrix padic_identity(const TowerPtr& t, int n, int prec) {
  PadicMatrix I = padic_zero_matrix(t, n, prec);
  for (int i = 0; i < n; ++i) I[i][i] = PadicNumber::one(t, prec);
  return I;
}

PadicMatrix padic_mul(const PadicMatrix& A, const PadicMatrix& B) {
  if (A.empty()) return {};
  int prec = A[0][0].prec();
  for (const auto& r : A)
    for (const auto& v : r) prec = std::min(prec, v.prec());
  for (const auto& r : B)
    for (const auto& v : r) prec = std::min(prec, v.prec());
  return mat_mul(A, B, PadicNumber::zero(A[0][0].tower(), prec));
}

PadicMatrix padic_kron(const PadicMatrix& A, const PadicMatrix& B) {
  const size_t n = A.size(), m = B.size();
  PadicMatrix K(n * m, std::vector<PadicNumber>(n * m));
  for (size_t i1 = 0; i1 < n; ++i1)
    for (size_t j1 = 0; j1 < n; ++j1)
      for (size_t i2 = 0; i2 < m; ++i2)
        for (size_t j2 = 0; j2 < m; ++j2) K[i1 * m + i2][j1 * m + j2] = A[i1][j1] * B[i2][j2];
  return K;
}

std::vector<std::vector<int>> k_subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> cur(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[i] == n - k + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

PadicMatrix padic_wedge(const PadicMatrix& A, int k) {
  const int n = int(A.size());
  if (k < 0 || k > n) throw ShapeError("exterior power degree out of range");
  const TowerPtr& t = A.at(0).at(0).tower();
  const int prec = A[0][0].prec();
  const auto subs = k_subsets(n, k);
  PadicMatrix W(subs.size(), std::vector<PadicNumber>(subs.size()));
  for (size_t a = 0; a < subs.size(); ++a)
    for (size_t b = 0; b < subs.size(); ++b) {
      PadicMatrix minor(static_cast<size_t>(k), std::vector<PadicNumber>(size_t(k)));
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) minor[i][j] = A[subs[a][i]][subs[b][j]];
      W[a][b] = determinant(minor, PadicNumber::zero(t, prec), PadicNumber::one(t, prec));
    }
  return W;
}

std::vector<PadicNumber> det_one_minus(const PadicMatrix& A) {
  if (A.empty()) throw ShapeError("empty matrix");
  int prec = A[0][0].prec();
  for (const auto& r : A)
    for (const auto& v : r) prec = std::min(prec, v.prec());
  const TowerPtr& t = A[0][0].tower();
  return berkowitz(A, PadicNumber::zero(t, prec), PadicNumber::one(t, prec));
}

bool padic_equal(const PadicMatrix& A, const PadicMatrix& B) {
  if (A.size() != B.size()) return false;
  for (size_t i = 0; i < A.size(); ++i) {
    if (A[i].size() != B[i].size()) return false;
    for (size_t j = 0; j < A[i].size(); ++j)
      if (A[i][j] != B[i][j]) return false;
  }
  return true;
}

// --- SigmaMatrix -----------------------------------------------------------

SigmaMatrix::SigmaMatrix(TowerPtr base, int rank, int nvars, int prec)
    : tower_(std::move(base)), rank_(rank), nvars_(nvars) {
  if (tower_->f() != 1) throw ShapeError("sigma-module matrices live over the base ring (f = 1)");
  if (rank_ < 1) throw ShapeError("rank must be >= 1");
  a_.assign(static_cast<size_t>(rank_) * rank_, LaurentElement(tower_, nvars_, prec));
}

SigmaMatrix SigmaMatrix::identity(const TowerPtr& base, int rank, int nvars, int prec) {
  SigmaMatrix M(base, rank, nvars, prec);
  for (int i = 0; i < rank; ++i) M.set(i, i, LaurentElement::constant(PadicNumber::one(base, prec), nvars));
  return M;
}

SigmaMatrix SigmaMatrix::scalar(const LaurentElement& a) {
  SigmaMatrix M(a.tower(), 1, a.nvars(), a.prec());
  M.set(0, 0, a);
  M.set_i0(0);
  return M;
}

int SigmaMatrix::prec() const {
  int p = a_.front().prec();
  for (const auto& v : a_) p = std::min(p, v.prec());
  return p;
}

void SigmaMatrix::set(int i, int j, const LaurentElement& v) {
  if (i < 0 || j < 0 || i >= rank_ || j >= rank_) throw ShapeError("matrix index out of range");
  if (v.nvars() != nvars_) throw ShapeError("entry has the wrong number of variables");
  if (v.tower()->ring_id() != tower_->ring_id()) throw ShapeError("entry from another ring");
  a_[size_t(i) * rank_ + j] = v;
}

void SigmaMatrix::set_i0(std::optional<int> i0) {
  if (i0 && (*i0 < 0 || *i0 >= rank_)) throw ShapeError("distinguished index out of range");
  i0_ = i0;
}

MatrixFlags SigmaMatrix::flags() const {
  MatrixFlags fl;
  if (!i0_) return fl;
  const int z = *i0_;
  const LaurentElement one = LaurentElement::constant(PadicNumber::one(tower_, prec()), nvars_);
  bool others_small = true;
  for (int i = 0; i < rank_; ++i)
    for (int j = 0; j < rank_; ++j)
      if (!(i == z && j == z) && !at(i, j).is_zero() && at(i, j).min_ord() < 1) others_small = false;
  const LaurentElement corner = at(z, z);
  fl.one_normal = others_small && (corner - one).min_ord() >= 1;
  bool column_zero = true;
  for (int i = 0; i < rank_; ++i)
    if (i != z && !at(i, z).is_zero()) column_zero = false;
  int unit_terms = 0;
  for (const auto& [e, c] : corner.terms())
    if (c.valuation() == 0) ++unit_terms;
  fl.standard_normal = column_zero && others_small && unit_terms == 1;
  return fl;
}

SigmaMatrix SigmaMatrix::operator*(const SigmaMatrix& o) const {
  if (rank_ != o.rank_) throw ShapeError("rank mismatch in product");
  SigmaMatrix R(tower_, rank_, nvars_, std::min(prec(), o.prec()));
  for (int i = 0; i < rank_; ++i)
    for (int j = 0; j < rank_; ++j) {
      LaurentElement s(tower_, nvars_, R.prec());
      for (int k = 0; k < rank_; ++k)
        if (!at(i, k).is_zero() && !o.at(k, j).is_zero()) s += at(i, k) * o.at(k, j);
      R.set(i, j, s);
    }
  R.i0_ = i0_;
  return R;
}

SigmaMatrix SigmaMatrix::operator+(const SigmaMatrix& o) const {
  if (rank_ != o.rank_) throw ShapeError("rank mismatch in sum");
  SigmaMatrix R(tower_, rank_, nvars_, std::min(prec(), o.prec()));
  for (size_t k = 0; k < a_.size(); ++k) R.a_[k] = a_[k] + o.a_[k];
  R.i0_ = i0_;
  return R;
}

bool SigmaMatrix::operator==(const SigmaMatrix& o) const {
  if (rank_ != o.rank_ || nvars_ != o.nvars_) return false;
  for (size_t k = 0; k < a_.size(); ++k)
    if (a_[k] != o.a_[k]) return false;
  return true;
}

SigmaMatrix SigmaMatrix::sigma(int iterations) const {
  SigmaMatrix R = *this;
  for (auto& v : R.a_) v = v.sigma(iterations);
  return R;
}

SigmaMatrix SigmaMatrix::reduce(int prec) const {
  SigmaMatrix R = *this;
  for (auto& v : R.a_) v = v.reduce(prec);
  return R;
}

PadicMatrix SigmaMatrix::evaluate(const std::vector<PadicNumber>& point) const {
  PadicMatrix out(static_cast<size_t>(rank_), std::vector<PadicNumber>(size_t(rank_)));
  for (int i = 0; i < rank_; ++i)
    for (int j = 0; j < rank_; ++j) out[i][j] = at(i, j).evaluate(point);
  return out;
}

int SigmaMatrix::max_abs_exponent() const {
  int m = 0;
  for (const auto& v : a_) m = std::max(m, v.max_abs_exponent());
  return m;
}

size_t SigmaMatrix::max_support() const {
  size_t m = 0;
  for (const auto& v : a_) m = std::max(m, v.support_size());
  return m;
}

std::string SigmaMatrix::to_string() const {
  std::ostringstream os;
  for (int i = 0; i < rank_; ++i)
    for (int j = 0; j < rank_; ++j) os << "[" << i << "," << j << "] " << at(i, j).to_string() << "\n";
  return os.str();
}

SigmaMatrix sigma_power(const SigmaMatrix& M, int f, int exponent_cap) {
  if (f < 1) throw DomainError("sigma_power needs f >= 1");
  if (exponent_cap <= 0) {
    int64_t qf = 1;
    for (int i = 0; i < f; ++i) qf *= int64_t(M.tower()->q());
    exponent_cap = int(std::min<int64_t>(INT32_MAX, 4 * qf * std::max(1, M.max_abs_exponent())));
  }
  SigmaMatrix R = M;
  for (int k = 1; k < f; ++k) {
    R = R * M.sigma(k);
    if (R.max_abs_exponent() > exponent_cap)
      throw ResourceError("sigma_power exponent " + std::to_string(R.max_abs_exponent()) + " exceeds cap " +
                          std::to_string(exponent_cap));
  }
  return R;
}

PadicMatrix fibre(const SigmaMatrix& M, const ClosedPoint& pt, FibreRoute route) {
  if (int(pt.coords.size()) != M.nvars()) throw ShapeError("point dimension does not match the matrix variables");
  const TowerPtr Rf = M.tower()->with_degree(pt.degree);
  if (route == FibreRoute::Symbolic) return sigma_power(M, pt.degree).evaluate(teich_lift_point(pt, Rf));
  PadicMatrix F;
  for (const auto& conj : orbit(pt, M.tower()->q())) {
    const PadicMatrix E = M.evaluate(teich_lift_point(ClosedPoint{pt.degree, conj}, Rf));
    F = F.empty() ? E : padic_mul(F, E);
  }
  return F;
}

SigmaMatrix tensor(const SigmaMatrix& A, const SigmaMatrix& B) {
  if (A.nvars() != B.nvars()) throw ShapeError("tensor of matrices in different variables");
  const int n = A.rank(), m = B.rank();
  SigmaMatrix K(A.tower(), n * m, A.nvars(), std::min(A.prec(), B.prec()));
  for (int i1 = 0; i1 < n; ++i1)
    for (int j1 = 0; j1 < n; ++j1) {
      if (A.at(i1, j1).is_zero()) continue;
      for (int i2 = 0; i2 < m; ++i2)
        for (int j2 = 0; j2 < m; ++j2)
          if (!B.at(i2, j2).is_zero()) K.set(i1 * m + i2, j1 * m + j2, A.at(i1, j1) * B.at(i2, j2));
    }
  if (A.i0() && B.i0()) K.set_i0(*A.i0() * m + *B.i0());
  return K;
}

SigmaMatrix wedge(const SigmaMatrix& M, int k) {
  const int n = M.rank();
  if (k < 0 || k > n) throw ShapeError("exterior power degree out of range");
  const auto subs = k_subsets(n, k);
  SigmaMatrix W(M.tower(), int(subs.size()), M.nvars(), M.prec());
  const LaurentElement zero(M.tower(), M.nvars(), M.prec());
  const LaurentElement one = LaurentElement::constant(PadicNumber::one(M.tower(), M.prec()), M.nvars());
  for (size_t a = 0; a < subs.size(); ++a)
    for (size_t b = 0; b < subs.size(); ++b) {
      Matrix<LaurentElement> minor(static_cast<size_t>(k), std::vector<LaurentElement>(size_t(k)));
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) minor[i][j] = M.at(subs[a][i], subs[b][j]);
      W.set(int(a), int(b), determinant(minor, zero, one));
    }
  return W;
}

SigmaMatrix block_upper(const SigmaMatrix& A, const SigmaMatrix& C, const SigmaMatrix& B) {
  const int n = A.rank(), m = B.rank();
  SigmaMatrix R(A.tower(), n + m, A.nvars(), std::min({A.prec(), B.prec(), C.prec()}));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) R.set(i, j, A.at(i, j));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) R.set(n + i, n + j, B.at(i, j));
  // C is n x m, stored in the top-left of a rank max(n,m) matrix.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      if (i < C.rank() && j < C.rank()) R.set(i, n + j, C.at(i, j));
  return R;
}

int worker_threads() {
  if (const char* env = std::getenv("SIGMALAB_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return std::min(v, 256);
  }
  return 1;
}

void parallel_for(size_t n, const std::function<void(size_t)>& fn) {
  const size_t T = std::min<size_t>(size_t(worker_threads()), n);
  if (T <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (size_t w = 0; w < T; ++w)
    pool.emplace_back([&, w] {
      for (size_t i = w; i < n; i += T) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

TruncatedSeries euler_product(const BaseScheme& X, int D, const TowerPtr& base, int prec, const EulerFactorFn& factor) {
  if (D < 0) throw DomainError("truncation order must be >= 0");
  const auto pts = enumerate_closed_points(X, std::max(D, 1));
  std::vector<std::vector<PadicNumber>> polys(pts.size());
  parallel_for(pts.size(), [&](size_t i) {
    if (pts[i].degree <= D) polys[i] = factor(pts[i]);
  });
  TruncatedSeries L = TruncatedSeries::one(base, D, prec);
  for (size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].degree > D) continue;
    const TruncatedSeries P = TruncatedSeries::from_coeffs(base, polys[i], D);
    L = L * P.substitute_power(pts[i].degree).inverse();
  }
  return L;
}

std::vector<PadicNumber> euler_factor(const SigmaMatrix& M, const ClosedPoint& pt, FibreRoute route) {
  const std::vector<PadicNumber> c = det_one_minus(fibre(M, pt, route));
  std::vector<PadicNumber> out;
  for (const auto& v : c) {
    if (!v.in_base())
      throw IntegralityError("Euler factor coefficient outside the base ring at " + pt.to_string() + ": " +
                             v.to_string());
    out.push_back(v.to_base());
  }
  return out;
}

TruncatedSeries euler_L(const SigmaMatrix& M, const BaseScheme& X, int D, FibreRoute route) {
  if (X.n != M.nvars()) throw ShapeError("scheme dimension does not match the matrix variables");
  if (X.kind == SchemeKind::AffineSpace)
    for (int i = 0; i < M.rank(); ++i)
      for (int j = 0; j < M.rank(); ++j)
        if (!M.at(i, j).is_polynomial()) throw ShapeError("negative exponents on affine space");
  return euler_product(X, D, M.tower(), M.prec(), [&](const ClosedPoint& pt) { return euler_factor(M, pt, route); });
}

// --- unit-root splitting ---------------------------------------------------

SigmaMatrix unipotent_inverse(const SigmaMatrix& S) {
  if (!S.i0()) throw FlagError("unipotent inverse needs a distinguished index");
  const int z = *S.i0();
  SigmaMatrix R = S;
  for (int i = 0; i < S.rank(); ++i)
    if (i != z) R.set(i, z, -S.at(i, z));
  return R;
}

UnitRootSplit unit_root_split(const SigmaMatrix& M, size_t support_cap) {
  if (!M.i0()) throw FlagError("unit_root_split needs a distinguished index");
  if (!M.flags().one_normal) throw FlagError("unit_root_split needs a 1-normal matrix");
  const int z = *M.i0();
  const int n = M.rank();
  const int N = M.prec();
  const TowerPtr& t = M.tower();
  std::vector<int> I1;
  for (int i = 0; i < n; ++i)
    if (i != z) I1.push_back(i);
  const LaurentElement zero(t, M.nvars(), N);
  // w_i <- (c_i + sum_j D_ij sigma(w_j)) / (a + sum_j b_j sigma(w_j))
  std::vector<LaurentElement> w(I1.size(), zero);
  int it = 0;
  for (; it <= N + 2; ++it) {
    std::vector<LaurentElement> sw;
    for (const auto& v : w) sw.push_back(v.sigma(1));
    LaurentElement den = M.at(z, z);
    for (size_t j = 0; j < I1.size(); ++j) den += M.at(z, I1[j]) * sw[j];
    const LaurentElement inv = laurent_inverse(den, support_cap);
    std::vector<LaurentElement> next;
    for (size_t i = 0; i < I1.size(); ++i) {
      LaurentElement num = M.at(I1[i], z);
      for (size_t j = 0; j < I1.size(); ++j) num += M.at(I1[i], I1[j]) * sw[j];
      next.push_back(num * inv);
      if (next.back().support_size() > support_cap) throw ResourceError("unit_root_split support exceeds cap");
    }
    bool same = true;
    for (size_t i = 0; i < w.size(); ++i)
      if (next[i] != w[i]) same = false;
    w = std::move(next);
    if (same) break;
  }
  if (it > N + 2) throw ConvergenceError("unit_root_split defect did not contract");
  SigmaMatrix S = SigmaMatrix::identity(t, n, M.nvars(), N);
  S.set_i0(z);
  for (size_t i = 0; i < I1.size(); ++i) S.set(I1[i], z, w[i]);
  SigmaMatrix Mstd = unipotent_inverse(S) * M * S.sigma(1);
  Mstd.set_i0(z);
  for (int i : I1)
    if (!Mstd.at(i, z).is_zero()) throw ConvergenceError("unit_root_split left a nonzero entry below the corner");
  const MatrixFlags fl = Mstd.flags();
  if (!fl.one_normal || !fl.standard_normal) throw ConvergenceError("unit_root_split output is not standard 1-normal");
  return {S, Mstd, it + 1};
}

}  // namespace sigmalab
