#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "sgcalc/calculus.hpp"
#include "sgcalc/orders.hpp"
#include "sgcalc/symbol.hpp"

namespace sgcalc {

struct RemainderProbe {
  double r_min = 10.0;
  double r_max = 1e3;
  int radii = 9;
  /// Values held fixed in the other group of coordinates along each ray.
  std::vector<double> anchors{0.0, 1.0};
  /// Magnitudes below this are treated as exact zeros.
  double floor = 1e-300;
};

/// Worst-ray log-log decay slopes: slope_x of log|c| against log<x> along
/// x-rays (xi fixed), slope_xi against log<xi> along xi-rays. A remainder
/// that vanishes on every ray of a group reports -infinity with degenerate
/// set; that counts as a pass.
struct RemainderFit {
  double slope_x = 0.0;
  double slope_xi = 0.0;
  double ci95_x = 0.0;
  double ci95_xi = 0.0;
  double residual_x = 0.0;
  double residual_xi = 0.0;
  bool degenerate_x = false;
  bool degenerate_xi = false;
  std::size_t points = 0;

  bool within(SGOrder expected, double tol) const {
    return slope_x <= expected.m2 + tol && slope_xi <= expected.m1 + tol;
  }
};

using PhaseFunction = std::function<cplx(const Point&)>;

RemainderFit remainder_order(const PhaseFunction& c, int n, const RemainderProbe& probe = {});
RemainderFit remainder_order(const Expr& c, int n, const RemainderProbe& probe = {});
RemainderFit remainder_order(const FormalSum& c, const RemainderProbe& probe = {});

/// compose(b, a) - 1 carried to enough terms that every nonvanishing
/// contribution of the differential symbol a is present; the truncation of b
/// is then the only source of the remainder.
FormalSum parametrix_defect(const FormalSum& b, const DiffSymbol& a);

}  // namespace sgcalc
