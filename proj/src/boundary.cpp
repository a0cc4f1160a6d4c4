#include "sgcalc/boundary.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "sgcalc/errors.hpp"
#include "sgcalc/parallel.hpp"

namespace sgcalc {

namespace {

double bracket(const std::vector<double>& v) {
  double s = 1.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

const cplx kI(0.0, 1.0);

}  // namespace

BoundarySymbol::BoundarySymbol(const Expr& term, int n, int k, int j, BoundarySymbolOptions opt)
    : n_(n),
      k_(k),
      j_(j),
      opt_(opt),
      integrand_(pow(Expr::xi(n - 1), k + j) * term),
      compiled_(integrand_),
      poles_(term, n),
      degree_(structural_degree(integrand_, Var::xi(n - 1))) {
  if (k < 0 || j < 0) fail(ErrorCode::InvalidArgument, "boundary symbol indices must be nonnegative");
  if (degree_ > -1.0 && !opt_.allow_polynomial_part && !integrand_.is_zero()) {
    fail(ErrorCode::DegreeTooHigh, "integrand has degree " + std::to_string(degree_) +
                                       " in xi_n; the boundary limit needs degree <= -1");
  }
}

cplx BoundarySymbol::operator()(const std::vector<double>& x_t, const std::vector<double>& xi_t) const {
  if (integrand_.is_zero()) return 0.0;
  EvalOptions eo;
  eo.allow_complex_normal = true;
  const auto poles = poles_.at(x_t, xi_t);
  for (const cplx& z : poles) {
    if (std::abs(z.imag()) < 1e-12 * std::max(1.0, std::abs(z))) {
      fail(ErrorCode::RealPoleOnPath, "pole on the real xi_n axis at " + std::to_string(z.real()));
    }
  }
  auto f = [&](cplx z) { return compiled_(normal_line_point(x_t, xi_t, z), eo); };
  if (opt_.method == BoundaryMethod::Residue) {
    cplx sum = 0.0;
    for (std::size_t a = 0; a < poles.size(); ++a) {
      const cplx z0 = poles[a];
      if (z0.imag() <= 0.0) continue;
      double gap = std::numeric_limits<double>::infinity();
      for (std::size_t b = 0; b < poles.size(); ++b) {
        if (b != a) gap = std::min(gap, std::abs(poles[b] - z0));
      }
      const double radius = std::isfinite(gap) ? 0.5 * gap : 0.5 * std::max(1.0, std::abs(z0));
      sum += circle_residue(f, z0, radius, opt_.residue_nodes);
    }
    return kI * sum;
  }
  const double R = opt_.B * bracket(xi_t);
  for (const cplx& z : poles) {
    if (std::abs(z) >= 0.95 * R) {
      fail(ErrorCode::InvalidArgument, "pole outside the quadrature contour; increase the contour radius factor");
    }
  }
  ContourPath closed = make_contour(ContourKind::Semicircle, opt_.B, xi_t);
  ContourSegment seg;
  seg.a = -R;
  seg.b = R;
  closed.segments.insert(closed.segments.begin(), seg);
  return integrate(f, closed, opt_.abs_tol) / (2.0 * std::numbers::pi);
}

cplx boundary_symbol(const Expr& term, int n, int k, int j, const std::vector<double>& x_t,
                     const std::vector<double>& xi_t, const BoundarySymbolOptions& opt) {
  return BoundarySymbol(term, n, k, j, opt)(x_t, xi_t);
}

BoundarySymbolTable BoundarySymbolTable::build(const FormalSum& a, int size, const BoundarySymbolOptions& opt) {
  BoundarySymbolTable t;
  t.n = a.n;
  t.size = size;
  t.source_order = a.base_order;
  for (int k = 0; k < size; ++k) {
    for (int j = 0; j < size; ++j) {
      std::vector<BoundarySymbol> parts;
      for (const Expr& term : a.terms) {
        if (!term.is_zero()) parts.emplace_back(term, a.n, k, j, opt);
      }
      t.terms.push_back(std::move(parts));
    }
  }
  return t;
}

cplx BoundarySymbolTable::value(int k, int j, const std::vector<double>& x_t, const std::vector<double>& xi_t) const {
  cplx s = 0.0;
  for (const auto& b : terms.at(static_cast<std::size_t>(k * size + j))) s += b(x_t, xi_t);
  return s;
}

std::map<std::pair<int, int>, Expr> assemble_Ptilde(const DiffSymbol& P) {
  std::map<std::pair<int, int>, Expr> table;
  const int m1 = P.normal_degree();
  const Var xn = Var::x(P.n - 1);
  for (int l = 0; l < m1; ++l) {
    for (int j = 0; j + l + 1 <= m1; ++j) {
      const Expr e = substitute(P.normal_coefficient(j + l + 1), xn, 0.0);
      if (!e.is_zero()) table.emplace(std::make_pair(l, j), Expr(-kI) * e);
    }
  }
  return table;
}

BoundarySystem::BoundarySystem(const BVProblem& problem, const FormalSum& parametrix, int N,
                               const BoundarySymbolOptions& opt)
    : n_(problem.n()), m1_(problem.m1()), r_(problem.r()), problem_(problem) {
  problem.validate();
  if (parametrix.n != n_) fail(ErrorCode::InvalidArgument, "parametrix dimension mismatch");
  FormalSum b = parametrix;
  if (N < b.N()) b.terms.resize(static_cast<std::size_t>(std::max(N, 1)));
  BoundarySymbolOptions o = opt;
  o.allow_polynomial_part = true;
  table_ = BoundarySymbolTable::build(b, m1_, o);
  for (int j = 0; j <= m1_; ++j) P_.emplace_back(problem.P.normal_coefficient(j));
}

Eigen::MatrixXcd BoundarySystem::qbar(const std::vector<double>& x_t, const std::vector<double>& xi_t) const {
  const Point p0 = normal_line_point(x_t, xi_t, 0.0);
  std::vector<cplx> P(P_.size());
  for (std::size_t j = 0; j < P_.size(); ++j) P[j] = P_[j](p0);
  const double c = bracket(xi_t);
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(m1_, m1_);
  for (int k = 0; k < m1_; ++k) {
    for (int l = 0; l < m1_; ++l) {
      cplx s = 0.0;
      for (int j = 0; j + l + 1 <= m1_; ++j) {
        const cplx pj = P[static_cast<std::size_t>(j + l + 1)];
        if (pj == 0.0) continue;
        s += table_.value(k, j, x_t, xi_t) * pj;
      }
      q(k, l) = -kI * s * std::pow(c, l - k);
    }
  }
  return q;
}

Eigen::MatrixXcd BoundarySystem::operator()(const std::vector<double>& x_t, const std::vector<double>& xi_t) const {
  Eigen::MatrixXcd m(m1_ + r_, m1_);
  m.topRows(m1_) = Eigen::MatrixXcd::Identity(m1_, m1_) - qbar(x_t, xi_t);
  const Point p0 = normal_line_point(x_t, xi_t, 0.0);
  const double bx = bracket(x_t), c = bracket(xi_t);
  for (int k = 0; k < r_; ++k) {
    const BoundaryRow& row = problem_.rows[static_cast<std::size_t>(k)];
    for (int l = 0; l < m1_; ++l) {
      cplx v = 0.0;
      if (l < static_cast<int>(row.B.size()) && !row.B[static_cast<std::size_t>(l)].is_zero()) {
        v = eval(row.B[static_cast<std::size_t>(l)], p0) * std::pow(bx, -row.m2j) * std::pow(c, l - row.m1j);
      }
      m(m1_ + k, l) = v;
    }
  }
  return m;
}

BoundarySystem assemble_system(const BVProblem& problem, const FormalSum& parametrix, int N,
                               const BoundarySymbolOptions& opt) {
  return BoundarySystem(problem, parametrix, N, opt);
}

LeftEllipticReport left_elliptic_check(const MatrixSymbol& system, int n, double R, const RadialGridSpec& grid,
                                       double threshold) {
  LeftEllipticReport rep;
  rep.R = R;
  rep.grid = grid;
  rep.grid.r_min = R;
  rep.threshold = threshold;
  const auto pts = boundary_grid(n, R, grid);
  rep.points = pts.size();
  std::vector<double> sv(pts.size(), 0.0);
  std::vector<std::string> errs(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    const std::vector<double> x_t(pts[i].begin(), pts[i].begin() + (n - 1));
    const std::vector<double> xi_t(pts[i].begin() + (n - 1), pts[i].end());
    try {
      const Eigen::MatrixXcd m = system(x_t, xi_t);
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
      const auto& s = svd.singularValues();
      sv[i] = m.rows() >= m.cols() ? s(s.size() - 1) : 0.0;
    } catch (const Error& e) {
      errs[i] = std::string(to_string(e.code())) + ": " + e.what();
    }
  });
  rep.min_singular_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!errs[i].empty()) {
      rep.error = errs[i];
      rep.witness = pts[i];
      rep.min_singular_value = 0.0;
      break;
    }
    if (sv[i] < rep.min_singular_value) {
      rep.min_singular_value = sv[i];
      rep.witness = pts[i];
    }
  }
  rep.pass = rep.error.empty() && rep.min_singular_value >= threshold;
  return rep;
}

LeftEllipticReport left_elliptic_check(const BoundarySystem& system, double R, const RadialGridSpec& grid,
                                       double threshold) {
  return left_elliptic_check([&system](const auto& x, const auto& xi) { return system(x, xi); }, system.n(), R,
                             grid, threshold);
}

void to_json(nlohmann::json& j, const LeftEllipticReport& r) {
  j = {{"check", "left_elliptic"},
       {"R", r.R},
       {"grid", r.grid},
       {"points", r.points},
       {"min_singular_value", r.min_singular_value},
       {"threshold", r.threshold},
       {"witness", r.witness},
       {"error", r.error},
       {"pass", r.pass}};
}

}  // namespace sgcalc
