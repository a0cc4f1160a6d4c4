#include "sgcalc/expr.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <unordered_map>

#include "expr_node.hpp"
#include "sgcalc/errors.hpp"

namespace sgcalc {

using detail::Node;

struct ExprAccess {
  static Expr wrap(std::shared_ptr<const Node> n) { return Expr(std::move(n)); }
};

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  // splitmix64 step folded into the running hash
  v += 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ULL;
  v = (v ^ (v >> 27)) * 0x94d049bb133111ebULL;
  return h ^ (v ^ (v >> 31));
}

std::uint64_t bits_of(double d) {
  if (d == 0.0) d = 0.0;  // fold -0
  return std::bit_cast<std::uint64_t>(d);
}

std::uint64_t group_mask(BracketGroup g, int dim) {
  std::uint64_t m = 0;
  for (int i = 0; i < dim; ++i) {
    Var v = (g == BracketGroup::X || g == BracketGroup::XTangential) ? Var::x(i) : Var::xi(i);
    if (detail::group_contains(g, dim, v)) m |= detail::var_bit(v);
  }
  return m;
}

void finish(Node& n) {
  std::uint64_t h = mix(0, static_cast<std::uint64_t>(n.kind) + 1);
  n.count = 1;
  switch (n.kind) {
    case Expr::Kind::Const:
      h = mix(h, bits_of(n.value.real()));
      h = mix(h, bits_of(n.value.imag()));
      break;
    case Expr::Kind::Variable:
      h = mix(h, static_cast<std::uint64_t>(n.var.kind));
      h = mix(h, static_cast<std::uint64_t>(n.var.index));
      n.mask = detail::var_bit(n.var);
      break;
    case Expr::Kind::Bracket:
      h = mix(h, static_cast<std::uint64_t>(n.group));
      h = mix(h, static_cast<std::uint64_t>(n.dim));
      h = mix(h, bits_of(n.rpow));
      n.mask = group_mask(n.group, n.dim);
      break;
    case Expr::Kind::Pow:
      h = mix(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(n.ipow)));
      [[fallthrough]];
    case Expr::Kind::Add:
    case Expr::Kind::Mul:
      for (const Expr& a : n.args) {
        h = mix(h, a.hash());
        n.mask |= a.raw()->mask;
        n.count += a.raw()->count;
      }
      break;
  }
  n.hash = h;
}

Expr make_const(cplx c) {
  auto n = std::make_shared<Node>();
  n->kind = Expr::Kind::Const;
  n->value = cplx(c.real() == 0.0 ? 0.0 : c.real(), c.imag() == 0.0 ? 0.0 : c.imag());
  finish(*n);
  return ExprAccess::wrap(std::move(n));
}

Expr make_raw(Expr::Kind kind, std::vector<Expr> args, int ipow = 0) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->args = std::move(args);
  n->ipow = ipow;
  finish(*n);
  return ExprAccess::wrap(std::move(n));
}

Expr make_bracket_raw(BracketGroup g, int dim, double p) {
  auto n = std::make_shared<Node>();
  n->kind = Expr::Kind::Bracket;
  n->group = g;
  n->dim = dim;
  n->rpow = p;
  finish(*n);
  return ExprAccess::wrap(std::move(n));
}

bool hash_less(const Expr& a, const Expr& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind();
  return a.hash() < b.hash();
}

cplx int_pow(cplx base, int n) {
  if (n < 0) return 1.0 / int_pow(base, -n);
  cplx r = 1.0;
  cplx b = base;
  while (n > 0) {
    if (n & 1) r *= b;
    b *= b;
    n >>= 1;
  }
  return r;
}

// Splits a canonical term into (numeric coefficient, remaining factor).
std::pair<cplx, Expr> split_coefficient(const Expr& t) {
  if (t.kind() == Expr::Kind::Mul && t.args().front().is_constant()) {
    const auto& a = t.args();
    if (a.size() == 2) return {a[0].constant_value(), a[1]};
    return {a[0].constant_value(), make_raw(Expr::Kind::Mul, std::vector<Expr>(a.begin() + 1, a.end()))};
  }
  return {1.0, t};
}

Expr attach_coefficient(cplx c, const Expr& rest) {
  if (c == cplx(1.0)) return rest;
  std::vector<Expr> f{make_const(c)};
  if (rest.kind() == Expr::Kind::Mul) {
    f.insert(f.end(), rest.args().begin(), rest.args().end());
  } else {
    f.push_back(rest);
  }
  return make_raw(Expr::Kind::Mul, std::move(f));
}

struct Grouped {
  Expr base;
  cplx coef{};     // sums
  int ipow = 0;    // products
  double rpow = 0; // bracket products
};

Grouped* find_group(std::vector<Grouped>& groups,
                    std::unordered_multimap<std::uint64_t, std::size_t>& index, const Expr& key) {
  auto [lo, hi] = index.equal_range(key.hash());
  for (auto it = lo; it != hi; ++it) {
    if (structurally_equal(groups[it->second].base, key)) return &groups[it->second];
  }
  return nullptr;
}

}  // namespace

// ---------------------------------------------------------------------------

Point::Point(std::vector<double> x_, std::vector<double> xi_) : x(std::move(x_)) {
  xi.assign(xi_.begin(), xi_.end());
}
Point::Point(std::vector<double> x_, std::vector<cplx> xi_) : x(std::move(x_)), xi(std::move(xi_)) {}

Expr::Expr() : Expr(make_const(0.0)) {}
Expr::Expr(double value) : Expr(make_const(value)) {}
Expr::Expr(cplx value) : Expr(make_const(value)) {}
Expr::Expr(std::shared_ptr<const detail::Node> node) : node_(std::move(node)) {}

Expr Expr::constant(cplx value) { return make_const(value); }

Expr Expr::var(Var v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->var = v;
  finish(*n);
  return Expr(std::move(n));
}

Expr Expr::bracket(BracketGroup group, int dim, double power) {
  if (power == 0.0) return make_const(1.0);
  if ((group == BracketGroup::XTangential || group == BracketGroup::XiTangential) && dim <= 1) {
    return make_const(1.0);  // no tangential coordinates: <.> == 1
  }
  return make_bracket_raw(group, dim, power);
}

Expr::Kind Expr::kind() const { return node_->kind; }
const std::vector<Expr>& Expr::args() const { return node_->args; }
cplx Expr::constant_value() const { return node_->value; }
Var Expr::variable() const { return node_->var; }
int Expr::int_exponent() const { return node_->ipow; }
BracketGroup Expr::group() const { return node_->group; }
int Expr::bracket_dim() const { return node_->dim; }
double Expr::real_exponent() const { return node_->rpow; }
bool Expr::is_zero() const { return kind() == Kind::Const && node_->value == cplx(0.0); }
bool Expr::is_one() const { return kind() == Kind::Const && node_->value == cplx(1.0); }
bool Expr::depends_on(Var v) const { return (node_->mask & detail::var_bit(v)) != 0; }
bool Expr::depends_on_any(VarKind k) const {
  const std::uint64_t lo = 0xffffffffULL;
  return (node_->mask & (k == VarKind::X ? lo : lo << 32)) != 0;
}
std::uint64_t Expr::hash() const { return node_->hash; }
std::size_t Expr::node_count() const { return node_->count; }

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.raw() == b.raw()) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind()) return false;
  const Node& x = *a.raw();
  const Node& y = *b.raw();
  switch (x.kind) {
    case Expr::Kind::Const: return x.value == y.value;
    case Expr::Kind::Variable: return x.var == y.var;
    case Expr::Kind::Bracket: return x.group == y.group && x.dim == y.dim && x.rpow == y.rpow;
    case Expr::Kind::Pow:
      if (x.ipow != y.ipow) return false;
      [[fallthrough]];
    case Expr::Kind::Add:
    case Expr::Kind::Mul:
      if (x.args.size() != y.args.size()) return false;
      for (std::size_t i = 0; i < x.args.size(); ++i) {
        if (!structurally_equal(x.args[i], y.args[i])) return false;
      }
      return true;
  }
  return false;
}

Expr Expr::sum(std::vector<Expr> terms) {
  std::vector<Expr> flat;
  flat.reserve(terms.size());
  for (auto& t : terms) {
    if (t.kind() == Kind::Add) {
      flat.insert(flat.end(), t.args().begin(), t.args().end());
    } else {
      flat.push_back(std::move(t));
    }
  }
  cplx constant = 0.0;
  std::vector<Grouped> groups;
  std::unordered_multimap<std::uint64_t, std::size_t> index;
  for (const Expr& t : flat) {
    if (t.is_constant()) {
      constant += t.constant_value();
      continue;
    }
    auto [c, rest] = split_coefficient(t);
    if (Grouped* g = find_group(groups, index, rest)) {
      g->coef += c;
    } else {
      index.emplace(rest.hash(), groups.size());
      groups.push_back({rest, c});
    }
  }
  std::vector<Expr> out;
  for (const auto& g : groups) {
    if (g.coef != cplx(0.0)) out.push_back(attach_coefficient(g.coef, g.base));
  }
  std::sort(out.begin(), out.end(), hash_less);
  if (constant != cplx(0.0)) out.insert(out.begin(), make_const(constant));
  if (out.empty()) return make_const(0.0);
  if (out.size() == 1) return out.front();
  return make_raw(Kind::Add, std::move(out));
}

Expr Expr::product(std::vector<Expr> factors) {
  std::vector<Expr> flat;
  flat.reserve(factors.size());
  for (auto& f : factors) {
    if (f.kind() == Kind::Mul) {
      flat.insert(flat.end(), f.args().begin(), f.args().end());
    } else {
      flat.push_back(std::move(f));
    }
  }
  cplx constant = 1.0;
  std::vector<Grouped> groups;
  std::unordered_multimap<std::uint64_t, std::size_t> index;
  // brackets keyed by (group, dim)
  struct BracketAcc {
    BracketGroup g;
    int dim;
    double p;
  };
  std::vector<BracketAcc> brackets;
  for (const Expr& f : flat) {
    switch (f.kind()) {
      case Kind::Const:
        constant *= f.constant_value();
        if (constant == cplx(0.0)) return make_const(0.0);
        continue;
      case Kind::Bracket: {
        auto it = std::find_if(brackets.begin(), brackets.end(), [&](const BracketAcc& b) {
          return b.g == f.group() && b.dim == f.bracket_dim();
        });
        if (it != brackets.end()) {
          it->p += f.real_exponent();
        } else {
          brackets.push_back({f.group(), f.bracket_dim(), f.real_exponent()});
        }
        continue;
      }
      default: break;
    }
    Expr base = f;
    int n = 1;
    if (f.kind() == Kind::Pow) {
      base = f.args().front();
      n = f.int_exponent();
    }
    if (Grouped* g = find_group(groups, index, base)) {
      g->ipow += n;
    } else {
      index.emplace(base.hash(), groups.size());
      groups.push_back({base, 0.0, n});
    }
  }
  std::vector<Expr> out;
  for (const auto& g : groups) {
    if (g.ipow == 0) continue;
    out.push_back(g.ipow == 1 ? g.base : make_raw(Kind::Pow, {g.base}, g.ipow));
  }
  for (const auto& b : brackets) {
    if (b.p != 0.0) out.push_back(make_bracket_raw(b.g, b.dim, b.p));
  }
  std::sort(out.begin(), out.end(), hash_less);
  if (out.empty()) return make_const(constant);
  if (constant != cplx(1.0)) out.insert(out.begin(), make_const(constant));
  if (out.size() == 1) return out.front();
  return make_raw(Kind::Mul, std::move(out));
}

Expr Expr::power(const Expr& base, int exponent) {
  if (exponent == 0) return make_const(1.0);
  if (exponent == 1) return base;
  switch (base.kind()) {
    case Kind::Const: {
      if (exponent < 0 && base.constant_value() == cplx(0.0)) {
        fail(ErrorCode::PoleHit, "negative power of the constant 0");
      }
      return make_const(int_pow(base.constant_value(), exponent));
    }
    case Kind::Pow: return power(base.args().front(), base.int_exponent() * exponent);
    case Kind::Bracket:
      return bracket(base.group(), base.bracket_dim(), base.real_exponent() * exponent);
    case Kind::Mul: {
      std::vector<Expr> f;
      f.reserve(base.args().size());
      for (const Expr& a : base.args()) f.push_back(power(a, exponent));
      return product(std::move(f));
    }
    default: return make_raw(Kind::Pow, {base}, exponent);
  }
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::sum({a, -b}); }
Expr operator-(const Expr& a) { return Expr::product({Expr(-1.0), a}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }
Expr operator/(const Expr& a, const Expr& b) {
  return Expr::product({a, Expr::power(b, -1)});
}
Expr pow(const Expr& base, int exponent) { return Expr::power(base, exponent); }

// ---------------------------------------------------------------------------
// differentiation and rewriting

namespace {

class Differentiator {
 public:
  explicit Differentiator(Var v) : v_(v) {}

  Expr operator()(const Expr& e) {
    if (!e.depends_on(v_)) return Expr(0.0);
    if (auto it = memo_.find(e.raw()); it != memo_.end()) return it->second;
    Expr r = compute(e);
    memo_.emplace(e.raw(), r);
    return r;
  }

 private:
  Expr compute(const Expr& e) {
    switch (e.kind()) {
      case Expr::Kind::Const: return Expr(0.0);
      case Expr::Kind::Variable: return Expr(e.variable() == v_ ? 1.0 : 0.0);
      case Expr::Kind::Add: {
        std::vector<Expr> t;
        for (const Expr& a : e.args()) t.push_back((*this)(a));
        return Expr::sum(std::move(t));
      }
      case Expr::Kind::Mul: {
        const auto& a = e.args();
        std::vector<Expr> terms;
        for (std::size_t i = 0; i < a.size(); ++i) {
          Expr d = (*this)(a[i]);
          if (d.is_zero()) continue;
          std::vector<Expr> f(a.begin(), a.end());
          f[i] = d;
          terms.push_back(Expr::product(std::move(f)));
        }
        return Expr::sum(std::move(terms));
      }
      case Expr::Kind::Pow: {
        const Expr& b = e.args().front();
        const int n = e.int_exponent();
        return Expr::product({Expr(static_cast<double>(n)), Expr::power(b, n - 1), (*this)(b)});
      }
      case Expr::Kind::Bracket: {
        const double p = e.real_exponent();
        return Expr::product({Expr(p), Expr::var(v_), Expr::bracket(e.group(), e.bracket_dim(), p - 2.0)});
      }
    }
    return Expr(0.0);
  }

  Var v_;
  std::unordered_map<const detail::Node*, Expr> memo_;
};

template <class Leaf>
Expr rebuild(const Expr& e, Leaf&& leaf, std::unordered_map<const detail::Node*, Expr>& memo) {
  if (auto it = memo.find(e.raw()); it != memo.end()) return it->second;
  Expr r;
  switch (e.kind()) {
    case Expr::Kind::Const:
    case Expr::Kind::Variable:
    case Expr::Kind::Bracket: r = leaf(e); break;
    case Expr::Kind::Add:
    case Expr::Kind::Mul: {
      std::vector<Expr> a;
      a.reserve(e.args().size());
      for (const Expr& c : e.args()) a.push_back(rebuild(c, leaf, memo));
      r = e.kind() == Expr::Kind::Add ? Expr::sum(std::move(a)) : Expr::product(std::move(a));
      break;
    }
    case Expr::Kind::Pow: r = Expr::power(rebuild(e.args().front(), leaf, memo), e.int_exponent()); break;
  }
  memo.emplace(e.raw(), r);
  return r;
}

}  // namespace

Expr diff(const Expr& e, Var v) { return Differentiator(v)(e); }

Expr diff(const Expr& e, std::span<const int> alpha, std::span<const int> beta) {
  Expr r = e;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    for (int k = 0; k < alpha[i]; ++k) r = diff(r, Var::xi(static_cast<int>(i)));
  }
  for (std::size_t i = 0; i < beta.size(); ++i) {
    for (int k = 0; k < beta[i]; ++k) r = diff(r, Var::x(static_cast<int>(i)));
  }
  return r;
}

Expr conj(const Expr& e) {
  std::unordered_map<const detail::Node*, Expr> memo;
  return rebuild(
      e,
      [](const Expr& leaf) {
        return leaf.is_constant() ? Expr(std::conj(leaf.constant_value())) : leaf;
      },
      memo);
}

Expr substitute_xi_zero(const Expr& e) {
  std::unordered_map<const detail::Node*, Expr> memo;
  return rebuild(
      e,
      [](const Expr& leaf) -> Expr {
        if (leaf.kind() == Expr::Kind::Variable && leaf.variable().kind == VarKind::Xi) return Expr(0.0);
        if (leaf.kind() == Expr::Kind::Bracket &&
            (leaf.group() == BracketGroup::Xi || leaf.group() == BracketGroup::XiTangential)) {
          return Expr(1.0);
        }
        return leaf;
      },
      memo);
}

Expr substitute(const Expr& e, Var v, cplx c) {
  std::unordered_map<const detail::Node*, Expr> memo;
  return rebuild(
      e,
      [&](const Expr& leaf) -> Expr {
        if (leaf.kind() == Expr::Kind::Variable && leaf.variable() == v) return Expr(c);
        if (leaf.kind() == Expr::Kind::Bracket && leaf.depends_on(v)) {
          fail(ErrorCode::InvalidArgument, "cannot substitute a single coordinate inside a bracket");
        }
        return leaf;
      },
      memo);
}

double structural_degree(const Expr& e, Var v) {
  if (!e.depends_on(v)) return 0.0;
  switch (e.kind()) {
    case Expr::Kind::Const: return 0.0;
    case Expr::Kind::Variable: return 1.0;
    case Expr::Kind::Add: {
      double d = -1e300;
      for (const Expr& a : e.args()) d = std::max(d, structural_degree(a, v));
      return d;
    }
    case Expr::Kind::Mul: {
      double d = 0.0;
      for (const Expr& a : e.args()) d += structural_degree(a, v);
      return d;
    }
    case Expr::Kind::Pow: return e.int_exponent() * structural_degree(e.args().front(), v);
    case Expr::Kind::Bracket: return e.real_exponent();
  }
  return 0.0;
}

}  // namespace sgcalc
