#include "sgcalc/jet.hpp"

#include <cmath>
#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <tuple>

#include "sgcalc/errors.hpp"

namespace sgcalc {

struct Jet::Table {
  int dims = 0;
  int order = 0;
  std::vector<std::vector<int>> monomials;
  std::map<std::vector<int>, int> index;
  std::vector<std::tuple<int, int, int>> products;  // (i, j) -> k, deg_i + deg_j <= order
};

namespace {

void enumerate(int dims, int order, std::vector<int>& cur, int pos, int remaining,
               std::vector<std::vector<int>>& out) {
  if (pos == dims) {
    out.push_back(cur);
    return;
  }
  for (int e = 0; e <= remaining; ++e) {
    cur[pos] = e;
    enumerate(dims, order, cur, pos + 1, remaining - e, out);
  }
  cur[pos] = 0;
}

std::shared_ptr<const Jet::Table> table_for(int dims, int order) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const Jet::Table>> cache;
  std::lock_guard lock(mutex);
  auto key = std::make_pair(dims, order);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  auto t = std::make_shared<Jet::Table>();
  t->dims = dims;
  t->order = order;
  std::vector<int> cur(static_cast<std::size_t>(dims), 0);
  std::vector<std::vector<int>> all;
  enumerate(dims, order, cur, 0, order, all);
  auto degree = [](const std::vector<int>& m) { return std::accumulate(m.begin(), m.end(), 0); };
  std::stable_sort(all.begin(), all.end(),
                   [&](const auto& a, const auto& b) { return degree(a) < degree(b); });
  t->monomials = all;
  for (std::size_t i = 0; i < all.size(); ++i) t->index.emplace(all[i], static_cast<int>(i));
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = 0; j < all.size(); ++j) {
      if (degree(all[i]) + degree(all[j]) > order) continue;
      std::vector<int> s(all[i]);
      for (int d = 0; d < dims; ++d) s[d] += all[j][d];
      t->products.emplace_back(static_cast<int>(i), static_cast<int>(j), t->index.at(s));
    }
  }
  cache.emplace(key, t);
  return t;
}

}  // namespace

Jet::Jet(int dims, int order) : table_(table_for(dims, order)) {
  coef_.assign(table_->monomials.size(), 0.0);
}

Jet Jet::constant(int dims, int order, double c) {
  Jet j(dims, order);
  j.coef_[0] = c;
  return j;
}

Jet Jet::variable(int dims, int order, int i, double at) {
  Jet j(dims, order);
  j.coef_[0] = at;
  if (order >= 1) {
    std::vector<int> m(static_cast<std::size_t>(dims), 0);
    m[static_cast<std::size_t>(i)] = 1;
    j.coef_[static_cast<std::size_t>(j.table_->index.at(m))] = 1.0;
  }
  return j;
}

int Jet::dims() const { return table_->dims; }
int Jet::order() const { return table_->order; }

double Jet::coefficient(std::span<const int> gamma) const {
  std::vector<int> m(gamma.begin(), gamma.end());
  auto it = table_->index.find(m);
  return it == table_->index.end() ? 0.0 : coef_[static_cast<std::size_t>(it->second)];
}

double Jet::derivative(std::span<const int> gamma) const {
  double fact = 1.0;
  for (int g : gamma) {
    for (int k = 2; k <= g; ++k) fact *= k;
  }
  return coefficient(gamma) * fact;
}

Jet& Jet::operator+=(const Jet& o) {
  for (std::size_t i = 0; i < coef_.size(); ++i) coef_[i] += o.coef_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  for (std::size_t i = 0; i < coef_.size(); ++i) coef_[i] -= o.coef_[i];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (double& c : coef_) c *= s;
  return *this;
}

Jet& Jet::operator+=(double s) {
  coef_[0] += s;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  Jet r(a.dims(), a.order());
  for (const auto& [i, j, k] : a.table_->products) {
    r.coef_[static_cast<std::size_t>(k)] += a.coef_[static_cast<std::size_t>(i)] * b.coef_[static_cast<std::size_t>(j)];
  }
  return r;
}

Jet Jet::compose(std::span<const double> taylor) const {
  Jet d = *this;
  d.coef_[0] = 0.0;
  const int top = std::min<int>(order(), static_cast<int>(taylor.size()) - 1);
  Jet r = constant(dims(), order(), top >= 0 ? taylor[static_cast<std::size_t>(top)] : 0.0);
  for (int m = top - 1; m >= 0; --m) {
    r = r * d;
    r += taylor[static_cast<std::size_t>(m)];
  }
  return r;
}

std::vector<double> taylor_pow(double y0, double p, int order) {
  std::vector<double> t(static_cast<std::size_t>(order) + 1);
  double binom = 1.0;
  for (int m = 0; m <= order; ++m) {
    t[static_cast<std::size_t>(m)] = binom * std::pow(y0, p - m);
    binom *= (p - m) / (m + 1);
  }
  return t;
}

std::vector<double> taylor_exp(double y0, int order) {
  std::vector<double> t(static_cast<std::size_t>(order) + 1);
  double v = std::exp(y0);
  for (int m = 0; m <= order; ++m) {
    t[static_cast<std::size_t>(m)] = v;
    v /= (m + 1);
  }
  return t;
}

}  // namespace sgcalc
