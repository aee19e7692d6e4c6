#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sigmalab/geometry.hpp"
#include "sigmalab/sigma_matrix.hpp"

namespace sigmalab {

/// Tower parameters as written in a descriptor header.
struct TowerSpec {
  uint64_t p = 2;
  std::vector<int64_t> eisenstein;  // empty: pi = p
  int N = 8;
  TowerPtr make() const;
};

/// A parsed matrix descriptor:
///
///   tower p=2 e=1 eis=-2 N=8      (optional)
///   scheme gm 1
///   rank 2
///   i0 0                          (optional)
///   entry 0 0 1 + p*x
///   entry 0 1 p*x^-1
///
/// Expressions are sums of products of integers, p, pi, p^k, pi^k, x, x^k,
/// x1..xn with integer (possibly negative) exponents.
struct Descriptor {
  std::optional<TowerSpec> tower;
  SchemeKind kind = SchemeKind::Torus;
  int n = 1;
  int rank = 1;
  std::optional<int> i0;
  /// (row, column, expression text)
  std::vector<std::tuple<int, int, std::string>> entries;
  std::string name;
};

Descriptor parse_descriptor(const std::string& text);
/// Expression parser; nvars variables over the given tower.
LaurentElement parse_expression(const std::string& expr, const TowerPtr& t, int nvars);
/// Builds the matrix over the given tower (the descriptor's own tower header
/// is only used when t is null).
SigmaMatrix build_matrix(const Descriptor& d, TowerPtr t = nullptr);
BaseScheme descriptor_scheme(const Descriptor& d, uint64_t q);

/// Canonical text for a matrix; parse_descriptor + build_matrix inverts it.
std::string write_descriptor(const SigmaMatrix& M, SchemeKind kind, bool with_tower = true,
                             const std::string& header_comment = "");
std::string write_expression(const LaurentElement& a);

/// Names of the descriptors compiled into the library.
std::vector<std::string> builtin_names();
/// ParseError for an unknown name.
std::string builtin_text(const std::string& name);
Descriptor builtin_descriptor(const std::string& name);

}  // namespace sigmalab
