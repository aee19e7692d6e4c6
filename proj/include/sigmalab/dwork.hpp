#pragma once

#include <string>
#include <vector>

#include "sigmalab/geometry.hpp"
#include "sigmalab/series.hpp"
#include "sigmalab/sigma_matrix.hpp"

namespace sigmalab {

/// Matrix of sigma on Omega^1 in the form basis: q for dx/x on G_m,
/// q x^{q-1} for dx on A^1. UnsupportedScheme unless n = 1.
LaurentElement frobenius_form(const BaseScheme& X, const TowerPtr& t, int prec = -1);

/// sigma^{-1} o Tr on functions: x^m -> q x^{m/q} if q | m, else 0.
LaurentElement theta_function(const LaurentElement& a, const BaseScheme& X);

/// The Dwork operator transported to the form basis, used by psi:
/// G_m (dx/x): x^m -> x^{m/q} if q | m; A^1 (dx): x^m -> x^{(m+1)/q - 1} if
/// q | m+1. Satisfies theta(sigma(a) b) = a theta(b).
LaurentElement theta_apply(const LaurentElement& a, const BaseScheme& X);

using LaurentVector = std::vector<LaurentElement>;

struct DecayPoint {
  int j = 0;
  /// min over nonzero outputs of ord_pi + |j| - |j'| for the column x^j e_i.
  int margin = 0;
};

/// psi[M] on the monomial window {x^j e_i : |j| <= J} (0 <= j <= J on A^1).
class PsiOperator {
 public:
  PsiOperator(SigmaMatrix M, BaseScheme X, int J);

  const SigmaMatrix& matrix() const { return M_; }
  const BaseScheme& scheme() const { return X_; }
  int window() const { return J_; }
  int rank() const { return M_.rank(); }
  /// Largest |exponent| in the entries.
  int spread() const { return S_; }
  /// Smallest J for which the window is psi-stable.
  int stable_window() const;
  bool in_window(int j) const;
  std::vector<int> window_exponents() const;

  /// psi(sum b_i e_i), no truncation.
  LaurentVector apply(const LaurentVector& b) const;
  LaurentVector restrict(const LaurentVector& b) const;
  /// Trace of (P psi P)^f for the window projection P.
  PadicNumber trace_power(int f) const;
  /// Dense matrix on the window, basis ordered (i, j) with i major.
  PadicMatrix dense() const;
  /// Column decay margins for every window exponent.
  std::vector<DecayPoint> decay() const;
  /// ord_pi of the smallest component that leaves the window (prec if none).
  int leak_ord() const;

 private:
  SigmaMatrix M_;
  BaseScheme X_;
  int J_;
  int S_;
};

/// psi[M tensor D^{wedge (1-r)}], r in {0, 1}. With strict = true, a WindowError
/// is raised when the window is not psi-stable and the leak is not zero mod
/// pi^prec.
PsiOperator build_psi(const SigmaMatrix& M, const BaseScheme& X, int r, int J, bool strict = false);

/// Working precision needed to return N digits from a degree-D Fredholm
/// expansion: N + e v_p(D!) + e.
int fredholm_working_precision(int N, int D, const TowerPtr& t);

struct FredholmResult {
  TruncatedSeries det;
  int J = 0;
  int doublings = 0;
  std::vector<int> windows;
  std::vector<PadicNumber> traces;
};

/// det(1 - psi T) mod T^{D+1} from exp(-sum Tr(psi^f) T^f / f), doubling J
/// from max(J0, stable window) until two consecutive doublings agree. The result is reduced to N
/// digits; PrecisionError if fewer remain, StabilizationError after
/// max_doublings.
FredholmResult fredholm_det(const SigmaMatrix& M, const BaseScheme& X, int r, int D, int N, int J0 = 1,
                            int max_doublings = 8);

/// Characteristic series from power traces t_1..t_D.
TruncatedSeries det_from_traces(const std::vector<PadicNumber>& traces, int D);

/// sum over x in X(F_{q^f}) of Tr(D^{wedge(1-i)}_x) Tr(M_x) / S_x, where M_x,
/// D_x are sigma^f-fibres and S_x = Tr(D_x) - 1. UnitError if S_x is not a
/// unit.
PadicNumber trace_formula_pointsum(const SigmaMatrix& M, const BaseScheme& X, int i, int f = 1);

struct TraceFormulaReport {
  TruncatedSeries euler;
  TruncatedSeries numerator;    // det(1 - psi[M] T)
  TruncatedSeries denominator;  // det(1 - psi[M tensor D] T)
  TruncatedSeries quotient;
  bool equal = false;
  int first_difference = -1;
  int doublings_numerator = 0;
  int doublings_denominator = 0;
  int J_numerator = 0;
  int J_denominator = 0;
};

/// Euler product vs det(1 - psi[M] T) / det(1 - psi[M tensor D] T), both
/// mod (T^{D+1}, pi^N). M must carry at least fredholm_working_precision digits.
TraceFormulaReport trace_formula_L(const SigmaMatrix& M, const BaseScheme& X, int D, int N);

}  // namespace sigmalab
