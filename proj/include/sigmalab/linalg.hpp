#pragma once

#include <vector>

#include "sigmalab/errors.hpp"

namespace sigmalab {

template <class R>
using Matrix = std::vector<std::vector<R>>;

template <class R>
Matrix<R> mat_mul(const Matrix<R>& A, const Matrix<R>& B, const R& zero) {
  const size_t n = A.size(), m = B.empty() ? 0 : B[0].size(), k = B.size();
  if (!A.empty() && A[0].size() != k) throw ShapeError("matrix product dimension mismatch");
  Matrix<R> C(n, std::vector<R>(m, zero));
  for (size_t i = 0; i < n; ++i)
    for (size_t l = 0; l < k; ++l) {
      if (A[i][l].is_zero()) continue;
      for (size_t j = 0; j < m; ++j)
        if (!B[l][j].is_zero()) C[i][j] += A[i][l] * B[l][j];
    }
  return C;
}

/// Division-free characteristic polynomial (Berkowitz). Returns c_0..c_n with
/// det(lambda - A) = sum c_k lambda^{n-k}; equivalently det(1 - A T) = sum c_k T^k.
template <class R>
std::vector<R> berkowitz(const Matrix<R>& A, const R& zero, const R& one) {
  const size_t n = A.size();
  for (const auto& row : A)
    if (row.size() != n) throw ShapeError("characteristic polynomial of a non-square matrix");
  if (n == 0) return {one};
  std::vector<R> C{one, zero - A[0][0]};
  for (size_t r = 1; r < n; ++r) {
    // t = [1, -a_rr, -R C, -R A_r C, ..., -R A_r^{r-1} C]
    std::vector<R> t{one, zero - A[r][r]};
    std::vector<R> v(r, zero);
    for (size_t i = 0; i < r; ++i) v[i] = A[i][r];
    for (size_t k = 0; k < r; ++k) {
      R s = zero;
      for (size_t j = 0; j < r; ++j)
        if (!A[r][j].is_zero() && !v[j].is_zero()) s += A[r][j] * v[j];
      t.push_back(zero - s);
      if (k + 1 < r) {
        std::vector<R> w(r, zero);
        for (size_t i = 0; i < r; ++i)
          for (size_t j = 0; j < r; ++j)
            if (!A[i][j].is_zero() && !v[j].is_zero()) w[i] += A[i][j] * v[j];
        v = std::move(w);
      }
    }
    std::vector<R> next(r + 2, zero);
    for (size_t i = 0; i < r + 2; ++i)
      for (size_t j = 0; j <= i && j < C.size(); ++j)
        if (!t[i - j].is_zero() && !C[j].is_zero()) next[i] += t[i - j] * C[j];
    C = std::move(next);
  }
  return C;
}

template <class R>
R determinant(const Matrix<R>& A, const R& zero, const R& one) {
  const std::vector<R> c = berkowitz(A, zero, one);
  return A.size() % 2 == 0 ? c.back() : zero - c.back();
}

}  // namespace sigmalab
