#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sigmalab/geometry.hpp"
#include "sigmalab/laurent.hpp"
#include "sigmalab/linalg.hpp"
#include "sigmalab/series.hpp"

namespace sigmalab {

using PadicMatrix = Matrix<PadicNumber>;

PadicMatrix padic_zero_matrix(const TowerPtr& t, int n, int prec);
PadicMatrix padic_identity(const TowerPtr& t, int n, int prec);
PadicMatrix padic_mul(const PadicMatrix& A, const PadicMatrix& B);
PadicMatrix padic_kron(const PadicMatrix& A, const PadicMatrix& B);
/// k-th exterior power, rows/columns indexed by ascending k-subsets.
PadicMatrix padic_wedge(const PadicMatrix& A, int k);
/// Coefficients of det(1 - A T), degree rank(A).
std::vector<PadicNumber> det_one_minus(const PadicMatrix& A);
bool padic_equal(const PadicMatrix& A, const PadicMatrix& B);

/// Ascending k-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> k_subsets(int n, int k);

struct MatrixFlags {
  bool one_normal = false;
  bool standard_normal = false;
};

/// Square matrix of Laurent elements over the base ring O_K (f = 1), acting
/// on columns: phi(e_j) = sum_i a_ij e_i.
class SigmaMatrix {
 public:
  SigmaMatrix() = default;
  SigmaMatrix(TowerPtr base, int rank, int nvars, int prec = -1);
  static SigmaMatrix identity(const TowerPtr& base, int rank, int nvars, int prec = -1);
  /// 1x1 matrix (a).
  static SigmaMatrix scalar(const LaurentElement& a);

  const TowerPtr& tower() const { return tower_; }
  int rank() const { return rank_; }
  int nvars() const { return nvars_; }
  int prec() const;
  const LaurentElement& at(int i, int j) const { return a_.at(size_t(i) * rank_ + j); }
  void set(int i, int j, const LaurentElement& v);
  std::optional<int> i0() const { return i0_; }
  void set_i0(std::optional<int> i0);

  /// Computed from the entries on every call.
  MatrixFlags flags() const;

  SigmaMatrix operator*(const SigmaMatrix& o) const;
  SigmaMatrix operator+(const SigmaMatrix& o) const;
  bool operator==(const SigmaMatrix& o) const;
  SigmaMatrix sigma(int iterations = 1) const;
  SigmaMatrix reduce(int prec) const;
  PadicMatrix evaluate(const std::vector<PadicNumber>& point) const;
  int max_abs_exponent() const;
  size_t max_support() const;
  std::string to_string() const;

 private:
  TowerPtr tower_;
  int rank_ = 0, nvars_ = 0;
  std::vector<LaurentElement> a_;
  std::optional<int> i0_;
};

/// M sigma(M) ... sigma^{f-1}(M). ResourceError once an exponent exceeds
/// exponent_cap (0 selects 4 q^f max(1, max |exponent of M|)).
SigmaMatrix sigma_power(const SigmaMatrix& M, int f, int exponent_cap = 0);

enum class FibreRoute { Direct, Symbolic };

/// The fibre x(M^{(sigma)^f}) at a closed point of degree f, over R_f.
/// Direct multiplies M evaluated along the Teichmuller orbit; Symbolic
/// evaluates sigma_power(M, f) at the lifted representative.
PadicMatrix fibre(const SigmaMatrix& M, const ClosedPoint& pt, FibreRoute route = FibreRoute::Direct);

SigmaMatrix tensor(const SigmaMatrix& A, const SigmaMatrix& B);
SigmaMatrix wedge(const SigmaMatrix& M, int k);
/// [[A, C], [0, B]].
SigmaMatrix block_upper(const SigmaMatrix& A, const SigmaMatrix& C, const SigmaMatrix& B);

/// Number of worker threads for point-parallel loops (SIGMALAB_THREADS,
/// default 1).
int worker_threads();

/// Calls fn(i) for i in [0, n) on worker_threads() threads. Exceptions are
/// rethrown for the smallest failing index.
void parallel_for(size_t n, const std::function<void(size_t)>& fn);

/// Polynomial det(1 - F T) with coefficients in the base ring, for the
/// Euler factor at pt.
using EulerFactorFn = std::function<std::vector<PadicNumber>(const ClosedPoint&)>;

/// prod over closed points of degree <= D of 1/P_x(T^deg x) mod T^{D+1}.
/// Factors are computed in parallel, multiplied in point order.
TruncatedSeries euler_product(const BaseScheme& X, int D, const TowerPtr& base, int prec, const EulerFactorFn& factor);

/// Euler factor polynomial of M at pt, descended to the base ring;
/// IntegralityError if a coefficient has a nonzero t-component.
std::vector<PadicNumber> euler_factor(const SigmaMatrix& M, const ClosedPoint& pt,
                                      FibreRoute route = FibreRoute::Direct);

TruncatedSeries euler_L(const SigmaMatrix& M, const BaseScheme& X, int D, FibreRoute route = FibreRoute::Direct);

struct UnitRootSplit {
  SigmaMatrix S;
  SigmaMatrix M_std;
  int iterations = 0;
};

/// Successive approximation S = [[1, 0], [w, 1]] (block form at i0) with
/// S^{-1} M sigma(S) standard 1-normal. FlagError if M is not 1-normal,
/// ConvergenceError if w does not stabilize.
UnitRootSplit unit_root_split(const SigmaMatrix& M, size_t support_cap = kDefaultSupportCap);

/// Inverse of S = [[1,0],[w,1]] computed as [[1,0],[-w,1]] (block form at i0).
SigmaMatrix unipotent_inverse(const SigmaMatrix& S);

}  // namespace sigmalab
