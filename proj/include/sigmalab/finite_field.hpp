#pragma once

#include <cstdint>
#include <memory>
#include <vector>

namespace sigmalab {

// Dense polynomial over F_p, lowest degree first, no trailing zeros except
// for the zero polynomial which is empty.
using FpPoly = std::vector<uint32_t>;

namespace fp {
FpPoly trim(FpPoly a);
FpPoly mul(const FpPoly& a, const FpPoly& b, uint32_t p);
FpPoly rem(FpPoly a, const FpPoly& m, uint32_t p);
FpPoly gcd(FpPoly a, FpPoly b, uint32_t p);
FpPoly sub(const FpPoly& a, const FpPoly& b, uint32_t p);
bool is_irreducible(const FpPoly& g, uint32_t p);
}  // namespace fp

/// Monic irreducible polynomial of degree k over F_p that is smallest with
/// respect to the code sum_{i<k} c_i p^i of its lower coefficients. For k = 1
/// this is t itself; for p = 2, k = 2 it is t^2 + t + 1.
FpPoly lowest_irreducible(uint32_t p, int k);

/// F_{p^k} realized as F_p[t]/(g) with g = lowest_irreducible(p, k).
/// Elements are encoded by the integer sum c_i p^i of their coefficients.
class GaloisField {
 public:
  GaloisField(uint32_t p, int k);

  uint32_t p() const { return p_; }
  int degree() const { return k_; }
  uint64_t size() const { return size_; }
  const FpPoly& modulus() const { return g_; }

  std::vector<uint32_t> digits(uint64_t a) const;
  uint64_t encode(const std::vector<uint32_t>& d) const;

  uint64_t add(uint64_t a, uint64_t b) const;
  uint64_t sub(uint64_t a, uint64_t b) const;
  uint64_t neg(uint64_t a) const;
  uint64_t mul(uint64_t a, uint64_t b) const;
  uint64_t pow(uint64_t a, uint64_t e) const;
  uint64_t inv(uint64_t a) const;
  /// a^p, via the precomputed F_p-linear Frobenius matrix.
  uint64_t frob(uint64_t a) const;
  /// Absolute trace to F_p.
  uint32_t trace(uint64_t a) const;
  /// Smallest d >= 1 with a^{p^d} = a.
  int element_degree(uint64_t a) const;
  /// Smallest-code generator of the multiplicative group.
  uint64_t primitive_element() const;
  /// Image of a in this field under the embedding sending the generator t of
  /// `sub` to the smallest-code root of sub.modulus(). Requires sub.k | k.
  uint64_t embed_from(const GaloisField& sub, uint64_t a) const;

 private:
  uint32_t p_;
  int k_;
  uint64_t size_;
  FpPoly g_;
  std::vector<uint64_t> pw_;             // p^i
  std::vector<std::vector<uint32_t>> frob_cols_;  // t^i -> (t^i)^p
  std::vector<uint32_t> trace_basis_;   // Tr(t^i)
};

using FieldPtr = std::shared_ptr<const GaloisField>;

/// Shared, lazily built field for (p, k).
FieldPtr galois_field(uint32_t p, int k);

}  // namespace sigmalab
