#include "sgcalc/calculus.hpp"

#include <numeric>

#include "sgcalc/errors.hpp"
#include "sgcalc/seminorm.hpp"

namespace sgcalc {

namespace {

double factorial_of(const std::vector<int>& alpha) {
  double f = 1.0;
  for (int a : alpha) {
    for (int k = 2; k <= a; ++k) f *= k;
  }
  return f;
}

cplx minus_i_pow(int k) {
  static const cplx table[4] = {1.0, cplx(0, -1), -1.0, cplx(0, 1)};
  return table[k % 4];
}

std::vector<std::vector<int>> indices_of_order(int n, int total) {
  std::vector<std::vector<int>> out;
  for (const auto& [alpha, beta] : multi_index_pairs(n, total)) {
    if (std::accumulate(alpha.begin(), alpha.end(), 0) == total) out.push_back(alpha);
  }
  return out;
}

void check_cap(int N, int cap) {
  if (N < 1) fail(ErrorCode::InvalidArgument, "truncation must be at least 1");
  if (N > cap) {
    fail(ErrorCode::TruncationCap, "truncation " + std::to_string(N) + " exceeds cap " + std::to_string(cap));
  }
}

// (1/alpha!) d_xi^alpha a * D_x^alpha b
Expr leibniz_term(const Expr& a, const Expr& b, const std::vector<int>& alpha) {
  const std::vector<int> zero(alpha.size(), 0);
  const Expr da = diff(a, alpha, zero);
  if (da.is_zero()) return Expr(0.0);
  const Expr db = diff(b, zero, alpha);
  if (db.is_zero()) return Expr(0.0);
  const int k = std::accumulate(alpha.begin(), alpha.end(), 0);
  return Expr(minus_i_pow(k) / factorial_of(alpha)) * da * db;
}

}  // namespace

FormalSum compose(const FormalSum& a, const FormalSum& b, int N, int cap) {
  check_cap(N, cap);
  if (a.n != b.n) fail(ErrorCode::InvalidArgument, "dimension mismatch in composition");
  const int n = a.n;
  FormalSum c;
  c.n = n;
  c.base_order = a.base_order + b.base_order;
  c.indices = a.indices;
  c.B = std::max(a.B, b.B);
  c.cutoff = a.cutoff ? a.cutoff : b.cutoff;
  std::vector<std::vector<std::vector<int>>> by_order;
  for (int k = 0; k < N; ++k) by_order.push_back(indices_of_order(n, k));
  for (int l = 0; l < N; ++l) {
    std::vector<Expr> parts;
    for (int j = 0; j < a.N() && j <= l; ++j) {
      for (int k = 0; k < b.N() && j + k <= l; ++k) {
        const Expr& aj = a.terms[static_cast<std::size_t>(j)];
        const Expr& bk = b.terms[static_cast<std::size_t>(k)];
        if (aj.is_zero() || bk.is_zero()) continue;
        for (const auto& alpha : by_order[static_cast<std::size_t>(l - j - k)]) {
          const Expr t = leibniz_term(aj, bk, alpha);
          if (!t.is_zero()) parts.push_back(t);
        }
      }
    }
    c.terms.push_back(Expr::sum(std::move(parts)));
  }
  return c;
}

FormalSum adjoint(const FormalSum& a, int N, int cap) {
  check_cap(N, cap);
  const int n = a.n;
  FormalSum c = a;
  c.terms.clear();
  for (int l = 0; l < N; ++l) {
    std::vector<Expr> parts;
    for (int j = 0; j < a.N() && j <= l; ++j) {
      const Expr ca = conj(a.terms[static_cast<std::size_t>(j)]);
      if (ca.is_zero()) continue;
      for (const auto& alpha : indices_of_order(n, l - j)) {
        const Expr d = diff(ca, alpha, alpha);
        if (d.is_zero()) continue;
        const int k = std::accumulate(alpha.begin(), alpha.end(), 0);
        parts.push_back(Expr(minus_i_pow(k) / factorial_of(alpha)) * d);
      }
    }
    c.terms.push_back(Expr::sum(std::move(parts)));
  }
  return c;
}

FormalSum parametrix(const DiffSymbol& a, int N, double B, const ParametrixOptions& opt) {
  check_cap(N, opt.cap);
  const EllipticReport er = sg_elliptic_check(a, B, opt.grid, opt.elliptic);
  if (!er.pass) {
    fail(ErrorCode::NotElliptic, "symbol is not SG-elliptic at radius " + std::to_string(B) + ": margin " +
                                     std::to_string(er.margin) + ", outer slope " + std::to_string(er.outer_slope));
  }
  const int n = a.n;
  const Expr sym = a.to_expr();
  FormalSum b;
  b.n = n;
  b.base_order = -a.order;
  b.indices = GevreyIndices::with_minimal_theta(opt.theta_c, a.nu);
  b.B = B;
  b.cutoff.emplace(B, opt.theta_c);
  const Expr b0 = Expr(1.0) / sym;
  b.terms.push_back(b0);
  for (int j = 1; j < N; ++j) {
    std::vector<Expr> parts;
    for (int k = 0; k < j; ++k) {
      const Expr& bk = b.terms[static_cast<std::size_t>(k)];
      if (bk.is_zero()) continue;
      for (const auto& alpha : indices_of_order(n, j - k)) {
        const Expr t = leibniz_term(bk, sym, alpha);
        if (!t.is_zero()) parts.push_back(t);
      }
    }
    b.terms.push_back(-b0 * Expr::sum(std::move(parts)));
  }
  return b;
}

int exact_extra_terms(const DiffSymbol& a) { return std::max(a.degree(), a.x_degree()); }

}  // namespace sgcalc
