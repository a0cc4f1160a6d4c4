#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sgcalc {

using cplx = std::complex<double>;

enum class VarKind : std::uint8_t { X, Xi };

/// A coordinate of phase space: x_{index+1} or xi_{index+1} (index is 0-based).
struct Var {
  VarKind kind = VarKind::X;
  int index = 0;

  static constexpr Var x(int i) { return {VarKind::X, i}; }
  static constexpr Var xi(int i) { return {VarKind::Xi, i}; }
  friend constexpr bool operator==(Var, Var) = default;
};

/// Which coordinates a bracket <.> = sqrt(1 + |.|^2) runs over. The tangential
/// groups drop the last (normal) coordinate.
enum class BracketGroup : std::uint8_t { X, Xi, XTangential, XiTangential };

/// A phase-space point. x is always real; xi is stored complex so that the
/// normal covariable xi_n can be continued into the complex plane.
struct Point {
  std::vector<double> x;
  std::vector<cplx> xi;

  Point() = default;
  Point(std::vector<double> x_, std::vector<double> xi_);
  Point(std::vector<double> x_, std::vector<cplx> xi_);
  int dim() const { return static_cast<int>(x.size()); }
};

struct EvalOptions {
  bool allow_complex_normal = false;
  double pole_tol = 1e-14;
};

namespace detail {
struct Node;
}

/// Immutable expression over (x, xi). Values share structure; every
/// constructor returns a best-effort canonical form (flattened sums and
/// products, folded constants, merged powers).
class Expr {
 public:
  enum class Kind : std::uint8_t { Const, Variable, Add, Mul, Pow, Bracket };

  Expr();
  Expr(double value);  // NOLINT(google-explicit-constructor)
  Expr(cplx value);    // NOLINT(google-explicit-constructor)

  static Expr constant(cplx value);
  static Expr var(Var v);
  static Expr x(int i) { return var(Var::x(i)); }
  static Expr xi(int i) { return var(Var::xi(i)); }
  /// <group>^power in dimension dim.
  static Expr bracket(BracketGroup group, int dim, double power = 1.0);

  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr power(const Expr& base, int exponent);

  Kind kind() const;
  const std::vector<Expr>& args() const;
  cplx constant_value() const;  // Const only
  Var variable() const;         // Variable only
  int int_exponent() const;     // Pow only
  BracketGroup group() const;   // Bracket only
  int bracket_dim() const;      // Bracket only
  double real_exponent() const; // Bracket only

  bool is_zero() const;
  bool is_one() const;
  bool is_constant() const { return kind() == Kind::Const; }
  bool depends_on(Var v) const;
  bool depends_on_any(VarKind kind) const;
  std::uint64_t hash() const;
  std::size_t node_count() const;

  const detail::Node* raw() const { return node_.get(); }

 private:
  explicit Expr(std::shared_ptr<const detail::Node> node);
  std::shared_ptr<const detail::Node> node_;
  friend struct ExprAccess;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr pow(const Expr& base, int exponent);

/// Structural equality of canonical forms. Not a semantic test.
bool structurally_equal(const Expr& a, const Expr& b);

Expr diff(const Expr& e, Var v);
/// d_xi^alpha d_x^beta e.
Expr diff(const Expr& e, std::span<const int> alpha, std::span<const int> beta);

/// Complex conjugate, valid for real arguments.
Expr conj(const Expr& e);
/// e with every xi set to zero.
Expr substitute_xi_zero(const Expr& e);
/// e with variable v replaced by the constant c.
Expr substitute(const Expr& e, Var v, cplx c);

/// Evaluation. Throws PoleHit when a denominator falls below pole_tol and
/// InvalidPoint when a non-normal coordinate is complex, or when xi_n is
/// complex without allow_complex_normal.
cplx eval(const Expr& e, const Point& p, const EvalOptions& opt = {});

/// Flattened evaluation tape for repeated evaluation of one expression over
/// many points (shared subexpressions are evaluated once per point).
class CompiledExpr {
 public:
  CompiledExpr() = default;
  explicit CompiledExpr(const Expr& e);
  cplx operator()(const Point& p, const EvalOptions& opt = {}) const;

 private:
  struct Instr {
    Expr::Kind kind;
    cplx value;
    Var var;
    int ipow;
    BracketGroup group;
    int dim;
    double rpow;
    std::vector<int> args;
  };
  std::vector<Instr> tape_;
};

/// Upper bound of the polynomial degree of e in v counted structurally
/// (negative for decay). Brackets containing v count as their exponent.
double structural_degree(const Expr& e, Var v);

/// Parenthesized prefix form, e.g. (add (pow (var xi 1) 2) (bracket x 2)).
std::string to_prefix(const Expr& e);
/// Inverse of to_prefix. dim fixes the bracket dimension.
Expr parse_prefix(std::string_view text, int dim);

}  // namespace sgcalc
