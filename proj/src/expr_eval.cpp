#include <cmath>
#include <string>
#include <unordered_map>

#include "expr_node.hpp"
#include "sgcalc/errors.hpp"
#include "sgcalc/expr.hpp"

namespace sgcalc {

namespace {

void check_point(const Point& p, const EvalOptions& opt) {
  if (p.x.size() != p.xi.size()) fail(ErrorCode::InvalidPoint, "x and xi dimensions differ");
  const std::size_t n = p.xi.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (p.xi[i].imag() != 0.0) fail(ErrorCode::InvalidPoint, "only xi_n may be complex");
  }
  if (n > 0 && p.xi[n - 1].imag() != 0.0 && !opt.allow_complex_normal) {
    fail(ErrorCode::InvalidPoint, "complex xi_n requires allow_complex_normal");
  }
}

cplx int_pow(cplx base, int n) {
  if (n < 0) return 1.0 / int_pow(base, -n);
  cplx r = 1.0;
  while (n > 0) {
    if (n & 1) r *= base;
    base *= base;
    n >>= 1;
  }
  return r;
}

cplx coordinate(const Point& p, Var v) {
  const std::size_t i = static_cast<std::size_t>(v.index);
  if (v.kind == VarKind::X) {
    if (i >= p.x.size()) fail(ErrorCode::InvalidPoint, "x index out of range");
    return p.x[i];
  }
  if (i >= p.xi.size()) fail(ErrorCode::InvalidPoint, "xi index out of range");
  return p.xi[i];
}

cplx bracket_value(const Point& p, BracketGroup g, int dim, double power, double pole_tol) {
  if (p.dim() != dim) fail(ErrorCode::InvalidPoint, "bracket dimension does not match the point");
  const bool tangential = (g == BracketGroup::XTangential || g == BracketGroup::XiTangential);
  const int last = tangential ? dim - 1 : dim;
  cplx base = 1.0;
  for (int i = 0; i < last; ++i) {
    if (g == BracketGroup::X || g == BracketGroup::XTangential) {
      base += p.x[i] * p.x[i];
    } else {
      base += p.xi[i] * p.xi[i];
    }
  }
  const double half = power / 2.0;
  if (power < 0 && std::abs(base) < pole_tol) fail(ErrorCode::PoleHit, "bracket vanishes");
  if (half == std::round(half) && std::abs(half) < 1e6) return int_pow(base, static_cast<int>(half));
  if (base.imag() == 0.0 && base.real() > 0.0) return std::pow(base.real(), half);
  return std::pow(base, half);
}

}  // namespace

CompiledExpr::CompiledExpr(const Expr& e) {
  std::unordered_map<const detail::Node*, int> slot;
  // iterative post-order over the DAG
  std::vector<std::pair<Expr, bool>> stack{{e, false}};
  while (!stack.empty()) {
    auto [cur, expanded] = stack.back();
    stack.pop_back();
    if (slot.contains(cur.raw())) continue;
    if (!expanded) {
      stack.emplace_back(cur, true);
      for (const Expr& a : cur.args()) {
        if (!slot.contains(a.raw())) stack.emplace_back(a, false);
      }
      continue;
    }
    const detail::Node& n = *cur.raw();
    Instr ins{n.kind, n.value, n.var, n.ipow, n.group, n.dim, n.rpow, {}};
    for (const Expr& a : n.args) ins.args.push_back(slot.at(a.raw()));
    slot.emplace(cur.raw(), static_cast<int>(tape_.size()));
    tape_.push_back(std::move(ins));
  }
}

cplx CompiledExpr::operator()(const Point& p, const EvalOptions& opt) const {
  check_point(p, opt);
  std::vector<cplx> val(tape_.size());
  for (std::size_t k = 0; k < tape_.size(); ++k) {
    const Instr& ins = tape_[k];
    switch (ins.kind) {
      case Expr::Kind::Const: val[k] = ins.value; break;
      case Expr::Kind::Variable: val[k] = coordinate(p, ins.var); break;
      case Expr::Kind::Add: {
        cplx s = 0.0;
        for (int a : ins.args) s += val[a];
        val[k] = s;
        break;
      }
      case Expr::Kind::Mul: {
        cplx s = 1.0;
        for (int a : ins.args) s *= val[a];
        val[k] = s;
        break;
      }
      case Expr::Kind::Pow: {
        const cplx b = val[ins.args.front()];
        if (ins.ipow < 0 && std::abs(b) < opt.pole_tol) {
          fail(ErrorCode::PoleHit, "denominator magnitude " + std::to_string(std::abs(b)));
        }
        val[k] = int_pow(b, ins.ipow);
        break;
      }
      case Expr::Kind::Bracket: val[k] = bracket_value(p, ins.group, ins.dim, ins.rpow, opt.pole_tol); break;
    }
  }
  return tape_.empty() ? cplx(0.0) : val.back();
}

cplx eval(const Expr& e, const Point& p, const EvalOptions& opt) { return CompiledExpr(e)(p, opt); }

}  // namespace sgcalc
