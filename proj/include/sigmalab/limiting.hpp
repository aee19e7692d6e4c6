#pragma once

#include <string>
#include <vector>

#include "sigmalab/series.hpp"
#include "sigmalab/sigma_matrix.hpp"

namespace sigmalab {

/// Exponent maps q: I_1 -> N_0 with |q| <= Q, graded lexicographic order
/// (by |q|, then lexicographic). I_1 = {0..n-1} minus i0, in increasing order.
struct LimitingIndex {
  int n1 = 0;
  int Q = 0;
  std::vector<std::vector<int>> q;

  static LimitingIndex make(int n1, int Q);
  size_t size() const { return q.size(); }
  /// Position of e, or -1 when |e| > Q.
  int find(const std::vector<int>& e) const;
  static int degree(const std::vector<int>& e);
};

enum class LimitSign { Plus, Minus };

LimitSign parse_limit_sign(const std::string& s);
std::string limit_sign_name(LimitSign s);

/// Truncation of B^r(M) (Plus) or B^r_-(M) (Minus) with V specialized to y.
struct LimitingMatrix {
  LimitingIndex index;
  SigmaMatrix B;
  int r = 0;
  LimitSign sign = LimitSign::Plus;
  PadicNumber y;
  std::string provenance;
};

/// Admissible ord bound for y given the corner a of M: true if a^y converges
/// in the Laurent ring (both nu regimes).
bool limiting_disk_contains(const LaurentElement& corner, const PadicNumber& y);

/// Column q2 is the truncated expansion of
///   a^{+-y} a^{r - |q2|} prod_{i in I_1} lambda(a_(i))^{q2(i)},
///   lambda(a_(i)) = a_{i0,i} + sum_{i' in I_1} a_{i',i} X_{i'},
/// where a = a_{i0,i0}. FlagError unless M is standard 1-normal, DomainError
/// for y outside the disk or Q + 1 < prec (dropped columns must vanish),
/// AssertionFailure if a column has ord_pi < |q2|.
LimitingMatrix build_limiting(const SigmaMatrix& M, int r, LimitSign sign, const PadicNumber& y, int Q);

/// Fibre version over R_f: entries eta(U) C_{q1,q2}, eta = (1+U)^{+-log(a^x)/p},
/// C the V = 0 construction applied to the fibre matrix.
struct FibreLimiting {
  LimitingIndex index;
  TruncatedSeries eta;
  PadicMatrix C;

  TruncatedSeries entry(size_t i, size_t j) const { return eta.scale(C[i][j]); }
  /// eta(z) C.
  PadicMatrix evaluate(const PadicNumber& z) const;
};

FibreLimiting fibre_limiting(const PadicMatrix& Mx, int i0, int r, LimitSign sign, int Q, int U_prec);

struct FibreCommuteReport {
  ClosedPoint point;
  bool equal = false;
  /// Smallest ord_pi of (global fibre - fibre limiting), prec if equal.
  int agreement = 0;
};

/// fibre(build_limiting(M, r, sign, y, Q), pt) against
/// fibre_limiting(fibre(M, pt), ...) at U = iota(y), entrywise mod pi^N.
FibreCommuteReport check_fibre_commutation(const SigmaMatrix& M, const ClosedPoint& pt, int r, LimitSign sign,
                                           const PadicNumber& y, int Q, int U_prec, int N);

struct Rk1resReport {
  TruncatedSeries lhs;
  TruncatedSeries rhs;
  bool equal = false;
  int first_difference = -1;
};

/// L(a^s a^{+-y}) against prod_{r=1}^{n} L(B^{s-r}_{(+-)}(M) tensor wedge^r M)^{(-1)^{r-1} r},
/// both mod (T^{D+1}, pi^N).
Rk1resReport verify_rk1res(const SigmaMatrix& M, int s, LimitSign sign, const PadicNumber& y, const BaseScheme& X,
                           int D, int N, int Q);

}  // namespace sigmalab
