#include "sgcalc/seminorm.hpp"

#include <cmath>
#include <numeric>

#include "sgcalc/errors.hpp"
#include "sgcalc/parallel.hpp"

namespace sgcalc {

namespace {

void enumerate_total(int n, int total, std::vector<int>& cur, int pos, std::vector<std::vector<int>>& out) {
  if (pos == n) {
    if (total == 0) out.push_back(cur);
    return;
  }
  for (int e = total; e >= 0; --e) {
    cur[static_cast<std::size_t>(pos)] = e;
    enumerate_total(n, total - e, cur, pos + 1, out);
  }
  cur[static_cast<std::size_t>(pos)] = 0;
}

std::vector<std::vector<int>> indices_of_order(int n, int total) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(n), 0);
  enumerate_total(n, total, cur, 0, out);
  return out;
}

double bracket_norm(const std::vector<double>& v) {
  double s = 1.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

double bracket_norm(const std::vector<cplx>& v) {
  double s = 1.0;
  for (const cplx& c : v) s += std::norm(c);
  return std::sqrt(s);
}

double quotient_sup(const Expr& d, SGOrder order, int a, int b, std::span<const Point> grid) {
  const CompiledExpr f(d);
  std::vector<double> vals(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const Point& p = grid[i];
    const double w = std::pow(bracket_norm(p.xi), a - order.m1) * std::pow(bracket_norm(p.x), b - order.m2);
    vals[i] = std::abs(f(p)) * w;
  });
  double sup = 0.0;
  for (double v : vals) sup = std::max(sup, v);
  return sup;
}

}  // namespace

std::vector<std::pair<std::vector<int>, std::vector<int>>> multi_index_pairs(int n, int max_total) {
  std::vector<std::pair<std::vector<int>, std::vector<int>>> out;
  for (int total = 0; total <= max_total; ++total) {
    for (int a = total; a >= 0; --a) {
      for (const auto& alpha : indices_of_order(n, a)) {
        for (const auto& beta : indices_of_order(n, total - a)) out.emplace_back(alpha, beta);
      }
    }
  }
  return out;
}

double sg_seminorm(const Expr& e, SGOrder order, std::span<const int> alpha, std::span<const int> beta,
                   std::span<const Point> grid) {
  if (grid.empty()) fail(ErrorCode::InvalidArgument, "seminorm grid is empty");
  const int a = std::accumulate(alpha.begin(), alpha.end(), 0);
  const int b = std::accumulate(beta.begin(), beta.end(), 0);
  return quotient_sup(diff(e, alpha, beta), order, a, b, grid);
}

std::vector<SeminormEntry> sg_seminorm_estimate(const Expr& e, SGOrder order, int n, int max_total,
                                                std::span<const Point> grid, int cap) {
  if (grid.empty()) fail(ErrorCode::InvalidArgument, "seminorm grid is empty");
  if (max_total > cap) {
    fail(ErrorCode::InvalidArgument, "derivative order " + std::to_string(max_total) + " exceeds cap " +
                                         std::to_string(cap));
  }
  std::vector<SeminormEntry> out;
  for (auto& [alpha, beta] : multi_index_pairs(n, max_total)) {
    const double c = sg_seminorm(e, order, alpha, beta, grid);
    out.push_back({std::move(alpha), std::move(beta), c});
  }
  return out;
}

}  // namespace sgcalc
