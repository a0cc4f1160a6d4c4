#include "sgcalc/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "sgcalc/errors.hpp"

namespace sgcalc {

cplx poly_eval(const Poly& p, cplx z) {
  cplx s = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) s = s * z + *it;
  return s;
}

int poly_degree(const Poly& p) {
  for (int k = static_cast<int>(p.size()) - 1; k >= 0; --k) {
    if (p[static_cast<std::size_t>(k)] != 0.0) return k;
  }
  return -1;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

Poly poly_add(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

Poly poly_from_roots(const std::vector<cplx>& roots) {
  Poly p{1.0};
  for (const cplx& r : roots) p = poly_mul(p, Poly{-r, 1.0});
  return p;
}

PolyDivision poly_divmod(const Poly& num, const Poly& monic) {
  const int d = poly_degree(monic);
  if (d < 0 || monic[static_cast<std::size_t>(d)] != 1.0) {
    fail(ErrorCode::InvalidArgument, "divisor must be monic");
  }
  Poly rem(num);
  const int top = poly_degree(num);
  Poly quot(static_cast<std::size_t>(std::max(0, top - d + 1)), 0.0);
  for (int k = top; k >= d; --k) {
    const cplx c = rem[static_cast<std::size_t>(k)];
    quot[static_cast<std::size_t>(k - d)] = c;
    for (int i = 0; i <= d; ++i) rem[static_cast<std::size_t>(k - d + i)] -= c * monic[static_cast<std::size_t>(i)];
    rem[static_cast<std::size_t>(k)] = 0.0;
  }
  rem.resize(static_cast<std::size_t>(d), 0.0);
  return {quot, rem};
}

std::vector<cplx> poly_roots(const Poly& p, double rel_tol) {
  double scale = 0.0;
  for (const cplx& c : p) scale = std::max(scale, std::abs(c));
  if (p.empty() || scale == 0.0) fail(ErrorCode::LeadingCoeffVanishes, "zero polynomial");
  const int n = static_cast<int>(p.size()) - 1;
  if (std::abs(p.back()) <= rel_tol * scale) {
    fail(ErrorCode::LeadingCoeffVanishes, "leading coefficient vanishes");
  }
  int zeros = 0;
  while (zeros < n && p[static_cast<std::size_t>(zeros)] == 0.0) ++zeros;
  std::vector<cplx> roots(static_cast<std::size_t>(zeros), 0.0);
  const int m = n - zeros;
  if (m == 1) {
    roots.push_back(-p[static_cast<std::size_t>(zeros)] / p.back());
  } else if (m > 1) {
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(m, m);
    for (int i = 1; i < m; ++i) c(i, i - 1) = 1.0;
    for (int i = 0; i < m; ++i) c(i, m - 1) = -p[static_cast<std::size_t>(zeros + i)] / p.back();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(c, false);
    if (es.info() != Eigen::Success) fail(ErrorCode::InvalidArgument, "companion eigenvalue solver failed");
    for (int i = 0; i < m; ++i) roots.push_back(es.eigenvalues()(i));
  }
  std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return roots;
}

double poly_root_bound(const Poly& p) {
  const int n = poly_degree(p);
  if (n < 0) fail(ErrorCode::LeadingCoeffVanishes, "zero polynomial");
  double r = 0.0;
  for (int j = 0; j < n; ++j) {
    const double q = n * std::abs(p[static_cast<std::size_t>(j)] / p[static_cast<std::size_t>(n)]);
    if (q == 0.0) continue;
    r = std::max(r, n - j == 1 ? q : std::pow(q, 1.0 / (n - j)));
  }
  return r;
}

}  // namespace sgcalc
