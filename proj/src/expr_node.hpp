#pragma once

#include <vector>

#include "sgcalc/expr.hpp"

namespace sgcalc::detail {

struct Node {
  Expr::Kind kind = Expr::Kind::Const;
  cplx value{};
  Var var{};
  int ipow = 0;
  BracketGroup group = BracketGroup::X;
  int dim = 0;
  double rpow = 0.0;
  std::vector<Expr> args;

  std::uint64_t hash = 0;
  std::uint64_t mask = 0;  // bit i: x_i, bit 32+i: xi_i
  std::size_t count = 1;   // size of the unfolded tree
};

inline std::uint64_t var_bit(Var v) {
  return std::uint64_t{1} << (v.kind == VarKind::X ? v.index : 32 + v.index);
}

inline bool group_contains(BracketGroup g, int dim, Var v) {
  const bool want_x = (g == BracketGroup::X || g == BracketGroup::XTangential);
  if ((v.kind == VarKind::X) != want_x) return false;
  const bool tangential = (g == BracketGroup::XTangential || g == BracketGroup::XiTangential);
  const int last = tangential ? dim - 1 : dim;
  return v.index >= 0 && v.index < last;
}

}  // namespace sgcalc::detail
