#include "sgcalc/symbol.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "sgcalc/errors.hpp"

namespace sgcalc {

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

Expr monomial(const MultiIndex& alpha, int skip = -1) {
  std::vector<Expr> f;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (static_cast<int>(i) == skip || alpha[i] == 0) continue;
    f.push_back(pow(Expr::xi(static_cast<int>(i)), alpha[i]));
  }
  return Expr::product(std::move(f));
}

void bounded_indices(const std::vector<int>& bound, int total, std::size_t pos, MultiIndex& cur,
                     std::vector<MultiIndex>& out) {
  if (pos == bound.size()) {
    out.push_back(cur);
    return;
  }
  for (int e = 0; e <= bound[pos] && e <= total; ++e) {
    cur[pos] = e;
    bounded_indices(bound, total - e, pos + 1, cur, out);
  }
  cur[pos] = 0;
}

}  // namespace

Expr DiffSymbol::to_expr() const {
  std::vector<Expr> t;
  for (const auto& [alpha, c] : coeffs) t.push_back(c * monomial(alpha));
  return Expr::sum(std::move(t));
}

int DiffSymbol::degree() const {
  int d = 0;
  for (const auto& [alpha, c] : coeffs) {
    if (!c.is_zero()) d = std::max(d, std::accumulate(alpha.begin(), alpha.end(), 0));
  }
  return d;
}

int DiffSymbol::normal_degree() const {
  int d = 0;
  for (const auto& [alpha, c] : coeffs) {
    if (!c.is_zero()) d = std::max(d, alpha.back());
  }
  return d;
}

Expr DiffSymbol::normal_coefficient(int j) const {
  std::vector<Expr> t;
  for (const auto& [alpha, c] : coeffs) {
    if (alpha.back() == j) t.push_back(c * monomial(alpha, n - 1));
  }
  return Expr::sum(std::move(t));
}

int DiffSymbol::x_degree() const {
  int d = 0;
  for (const auto& [alpha, c] : coeffs) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::max(0.0, structural_degree(c, Var::x(i)));
    d = std::max(d, static_cast<int>(std::ceil(s)));
  }
  return d;
}

DiffSymbol DiffSymbol::from_expr(const Expr& e, int n, SGOrder order, double nu) {
  DiffSymbol s;
  s.n = n;
  s.order = order;
  s.nu = nu;
  std::vector<int> bound(static_cast<std::size_t>(n));
  int total = 0;
  for (int i = 0; i < n; ++i) {
    const double d = structural_degree(e, Var::xi(i));
    if (d < 0.0 || d != std::floor(d)) fail(ErrorCode::NotRational, "symbol is not polynomial in xi");
    bound[static_cast<std::size_t>(i)] = static_cast<int>(d);
    total += static_cast<int>(d);
  }
  std::vector<MultiIndex> alphas;
  MultiIndex cur(static_cast<std::size_t>(n), 0);
  bounded_indices(bound, total, 0, cur, alphas);
  const std::vector<int> none(static_cast<std::size_t>(n), 0);
  for (const auto& alpha : alphas) {
    double f = 1.0;
    for (int a : alpha) f *= factorial(a);
    const Expr c = substitute_xi_zero(diff(e, alpha, none)) * (1.0 / f);
    if (!c.is_zero()) s.coeffs.emplace(alpha, c);
  }
  // Structural degrees can overestimate but never underestimate; confirm by sampling.
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const CompiledExpr lhs(e), rhs(s.to_expr());
  for (int k = 0; k < 16; ++k) {
    std::vector<double> x(static_cast<std::size_t>(n)), xi(static_cast<std::size_t>(n));
    for (auto& v : x) v = u(rng);
    for (auto& v : xi) v = u(rng);
    const Point p(x, xi);
    const cplx a = lhs(p), b = rhs(p);
    if (std::abs(a - b) > 1e-9 * std::max(1.0, std::abs(a))) {
      fail(ErrorCode::NotRational, "symbol is not polynomial in xi: " + to_prefix(e));
    }
  }
  return s;
}

Expr FormalSum::raw_sum() const { return Expr::sum(terms); }

cplx FormalSum::eval(const Point& p, int count) const {
  double chi = 1.0;
  if (cutoff) {
    chi = (*cutoff)(p);
    if (chi == 0.0) return 0.0;
  }
  const int m = count < 0 ? N() : std::min(count, N());
  cplx s = 0.0;
  for (int j = 0; j < m; ++j) s += sgcalc::eval(terms[static_cast<std::size_t>(j)], p);
  return chi * s;
}

FormalSum FormalSum::single(const Expr& e, int n, SGOrder order, int N) {
  FormalSum s;
  s.n = n;
  s.base_order = order;
  s.terms.assign(static_cast<std::size_t>(std::max(1, N)), Expr(0.0));
  s.terms[0] = e;
  return s;
}

FormalSum FormalSum::from_symbol(const DiffSymbol& a, int N) {
  FormalSum s = single(a.to_expr(), a.n, a.order, N);
  s.indices = GevreyIndices::with_minimal_theta(1.0, a.nu);
  return s;
}

void to_json(nlohmann::json& j, const FormalSum& s) {
  j = nlohmann::json::object();
  j["n"] = s.n;
  j["base_order"] = {s.base_order.m1, s.base_order.m2};
  j["indices"] = {{"mu", s.indices.mu}, {"nu", s.indices.nu}, {"theta", s.indices.theta}};
  j["N"] = s.N();
  j["B"] = s.B;
  auto& terms = j["terms"] = nlohmann::json::array();
  for (const Expr& t : s.terms) terms.push_back(to_prefix(t));
  if (s.cutoff) {
    j["cutoff"] = {{"B", s.cutoff->B()}, {"theta_c", s.cutoff->theta_c()}};
  } else {
    j["cutoff"] = nullptr;
  }
}

FormalSum formal_sum_from_json(const nlohmann::json& j) {
  FormalSum s;
  try {
    s.n = j.at("n").get<int>();
    s.base_order = {j.at("base_order").at(0).get<double>(), j.at("base_order").at(1).get<double>()};
    const auto& ind = j.at("indices");
    s.indices = {ind.at("mu").get<double>(), ind.at("nu").get<double>(), ind.at("theta").get<double>()};
    s.B = j.value("B", 1.0);
    for (const auto& t : j.at("terms")) s.terms.push_back(parse_prefix(t.get<std::string>(), s.n));
    if (j.contains("cutoff") && !j["cutoff"].is_null()) {
      s.cutoff.emplace(j["cutoff"].at("B").get<double>(), j["cutoff"].at("theta_c").get<double>());
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, std::string("formal sum: ") + e.what());
  }
  if (static_cast<int>(s.terms.size()) != j.value("N", s.N())) {
    fail(ErrorCode::ParseError, "formal sum: N does not match the number of terms");
  }
  return s;
}

}  // namespace sgcalc
