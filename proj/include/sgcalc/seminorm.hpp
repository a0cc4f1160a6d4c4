#pragma once

#include <span>
#include <vector>

#include "sgcalc/expr.hpp"
#include "sgcalc/orders.hpp"

namespace sgcalc {

/// Derivative orders above this are numerically meaningless in double precision.
inline constexpr int kDefaultSeminormCap = 6;

struct SeminormEntry {
  std::vector<int> alpha;  // xi derivatives
  std::vector<int> beta;   // x derivatives
  double constant = 0.0;   // sup |d_x^beta d_xi^alpha e| <xi>^{|alpha|-m1} <x>^{|beta|-m2}
};

/// All multi-index pairs (alpha, beta) in n dimensions with |alpha|+|beta| <= max_total.
std::vector<std::pair<std::vector<int>, std::vector<int>>> multi_index_pairs(int n, int max_total);

/// Grid supremum of the weighted SG seminorm quotients of e for every
/// (alpha, beta) with |alpha|+|beta| <= max_total.
std::vector<SeminormEntry> sg_seminorm_estimate(const Expr& e, SGOrder order, int n, int max_total,
                                                std::span<const Point> grid,
                                                int cap = kDefaultSeminormCap);

/// Single (alpha, beta) quotient supremum.
double sg_seminorm(const Expr& e, SGOrder order, std::span<const int> alpha, std::span<const int> beta,
                   std::span<const Point> grid);

}  // namespace sgcalc
