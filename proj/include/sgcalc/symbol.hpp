#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sgcalc/cutoff.hpp"
#include "sgcalc/expr.hpp"
#include "sgcalc/orders.hpp"

namespace sgcalc {

using MultiIndex = std::vector<int>;

/// Symbol of a differential operator sum_alpha c_alpha(x) xi^alpha.
struct DiffSymbol {
  int n = 1;
  std::map<MultiIndex, Expr> coeffs;  // c_alpha, functions of x only
  SGOrder order;
  double nu = 1.0;

  /// The full symbol as one expression.
  Expr to_expr() const;
  /// Highest |alpha| with a nonzero coefficient.
  int degree() const;
  /// Highest power of xi_n.
  int normal_degree() const;
  /// P_j(x, xi') = sum over alpha_n == j of c_alpha xi'^alpha'.
  Expr normal_coefficient(int j) const;
  /// Structural degree of the coefficients in x (summed over coordinates).
  int x_degree() const;

  /// Recovers the coefficients of a symbol polynomial in xi. Fails with
  /// NotRational when e is not polynomial in xi.
  static DiffSymbol from_expr(const Expr& e, int n, SGOrder order, double nu = 1.0);
};

/// Truncated asymptotic sum sum_j a_j, term j of nominal order
/// (m1 - j, m2 - j). Terms are stored before multiplication by the cutoff;
/// when a cutoff is attached every evaluation multiplies by it.
struct FormalSum {
  int n = 1;
  SGOrder base_order;
  GevreyIndices indices;
  std::vector<Expr> terms;
  double B = 1.0;
  std::optional<GevreyCutoff> cutoff;

  int N() const { return static_cast<int>(terms.size()); }
  SGOrder term_order(int j) const { return {base_order.m1 - j, base_order.m2 - j}; }
  /// Sum of the raw terms (without cutoff).
  Expr raw_sum() const;
  /// chi(p) * sum of the first `count` terms (all when count < 0).
  cplx eval(const Point& p, int count = -1) const;

  static FormalSum single(const Expr& e, int n, SGOrder order, int N = 1);
  static FormalSum from_symbol(const DiffSymbol& a, int N = 1);
};

void to_json(nlohmann::json& j, const FormalSum& s);
FormalSum formal_sum_from_json(const nlohmann::json& j);

}  // namespace sgcalc
