#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sigmalab/padic.hpp"

namespace sigmalab {

enum class SchemeKind { Torus, AffineSpace };

/// X = G_m^n (torus) or A^n (affine space) over F_q.
struct BaseScheme {
  SchemeKind kind = SchemeKind::Torus;
  int n = 1;
  uint64_t q = 2;

  static BaseScheme torus(uint64_t q, int n = 1) { return {SchemeKind::Torus, n, q}; }
  static BaseScheme affine(uint64_t q, int n = 1) { return {SchemeKind::AffineSpace, n, q}; }
  std::string name() const;
  /// #X(F_{q^m}).
  uint64_t count_points(int m) const;
  void validate() const;
};

SchemeKind parse_scheme_kind(const std::string& s);
std::string scheme_kind_name(SchemeKind k);

/// A Frobenius orbit of geometric points. `coords` is the lexicographically
/// smallest orbit member, each coordinate an F_{q^degree} code.
struct ClosedPoint {
  int degree = 1;
  std::vector<uint64_t> coords;
  bool operator==(const ClosedPoint&) const = default;
  std::string to_string() const;
};

/// Upper bound on q^{f_max * n} accepted by point enumeration.
inline constexpr uint64_t kEnumerationGuard = 10'000'000;

/// All closed points of degree <= f_max, sorted by (degree, coords).
/// ResourceError if q^{f_max * n} exceeds the guard.
std::vector<ClosedPoint> enumerate_closed_points(const BaseScheme& X, int f_max);

/// Closed points of exactly degree f.
std::vector<ClosedPoint> closed_points_of_degree(const BaseScheme& X, int f);

/// Frobenius orbit of the representative (length degree).
std::vector<std::vector<uint64_t>> orbit(const ClosedPoint& pt, uint64_t q);

/// Coordinate-wise Teichmuller lift into R_f. The tower's residue degree must
/// equal pt.degree (ShapeError otherwise).
std::vector<PadicNumber> teich_lift_point(const ClosedPoint& pt, const TowerPtr& tower);

/// Plain text table, one line per point: "degree coord1 coord2 ...".
std::string points_table(const std::vector<ClosedPoint>& pts);

}  // namespace sigmalab
