#include "sgcalc/ellipticity.hpp"

#include <cmath>
#include <limits>

#include "sgcalc/errors.hpp"
#include "sgcalc/parallel.hpp"

namespace sgcalc {

namespace {

double bracket(const std::vector<double>& v) {
  double s = 1.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

std::vector<CompiledExpr> compiled_normal_coefficients(const DiffSymbol& a) {
  std::vector<CompiledExpr> c;
  for (int j = 0; j <= a.normal_degree(); ++j) c.emplace_back(a.normal_coefficient(j));
  return c;
}

Point normal_point(int n, const std::vector<double>& x, const std::vector<double>& xi_t) {
  std::vector<double> xi(xi_t);
  xi.resize(static_cast<std::size_t>(n), 0.0);
  return Point(x, xi);
}

std::vector<double> boundary_x(int n, const std::vector<double>& x_t) {
  std::vector<double> x(x_t);
  x.resize(static_cast<std::size_t>(n), 0.0);
  return x;
}

Poly eval_normal(const std::vector<CompiledExpr>& c, const Point& p) {
  Poly poly;
  for (const auto& f : c) poly.push_back(f(p));
  return poly;
}

RootProfile profile_from(const DiffSymbol& a, const std::vector<CompiledExpr>& c, const std::vector<double>& x_t,
                         const std::vector<double>& xi_t) {
  const int n = a.n;
  if (static_cast<int>(x_t.size()) != n - 1 || static_cast<int>(xi_t.size()) != n - 1) {
    fail(ErrorCode::InvalidArgument, "tangential point has the wrong dimension");
  }
  Poly poly = eval_normal(c, normal_point(n, boundary_x(n, x_t), xi_t));
  const double bx = bracket(x_t), bxi = bracket(xi_t);
  const double w = std::pow(bx, -a.order.m2) * std::pow(bxi, -a.order.m1);
  double scale = 1.0;
  for (auto& coef : poly) {
    coef *= w * scale;
    scale *= bxi;
  }
  RootProfile prof;
  prof.x_t = x_t;
  prof.xi_t = xi_t;
  prof.leading = poly.back();
  prof.roots = poly_roots(poly);
  for (const cplx& z : prof.roots) {
    if (std::abs(z.imag()) < kRealRootBand) {
      fail(ErrorCode::RealRootDetected, "root " + std::to_string(z.real()) + std::string(" lies on the real axis"));
    }
    if (z.imag() > 0.0) prof.upper.push_back(z);
  }
  prof.a_plus = poly_from_roots(prof.upper);
  return prof;
}

}  // namespace

void BVProblem::validate() const {
  const int m = m1();
  if (m % 2 != 0) fail(ErrorCode::InvalidArgument, "normal order must be even");
  if (static_cast<int>(rows.size()) != r()) {
    fail(ErrorCode::InvalidArgument, "expected " + std::to_string(r()) + " boundary rows, got " +
                                         std::to_string(rows.size()));
  }
  for (const auto& row : rows) {
    if (row.m1j < 0 || row.m1j > m - 1) fail(ErrorCode::InvalidArgument, "boundary order out of range");
    if (static_cast<int>(row.B.size()) > m) fail(ErrorCode::InvalidArgument, "too many boundary coefficients");
    for (std::size_t k = static_cast<std::size_t>(row.m1j) + 1; k < row.B.size(); ++k) {
      if (!row.B[k].is_zero()) fail(ErrorCode::InvalidArgument, "boundary coefficient above the row order");
    }
  }
}

std::vector<std::vector<double>> boundary_grid(int n, double R, const RadialGridSpec& grid) {
  RadialGridSpec g = grid;
  g.r_min = R;
  if (g.r_max < g.r_min) g.r_max = g.r_min;
  return radial_grid(2 * (n - 1), g);
}

EllipticReport sg_elliptic_check(const DiffSymbol& a, double R, const RadialGridSpec& grid,
                                 const EllipticOptions& opt) {
  EllipticReport rep;
  rep.R = R;
  rep.grid = grid;
  rep.grid.r_min = R;
  rep.C_min = opt.C_min;
  rep.slope_limit = opt.slope_limit;
  const int n = a.n;
  const auto pts = radial_grid(2 * n, rep.grid);
  const CompiledExpr f(a.to_expr());
  std::vector<double> ratio(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    const Point p = phase_point(pts[i], n);
    std::vector<double> xi(p.xi.size());
    for (std::size_t k = 0; k < xi.size(); ++k) xi[k] = p.xi[k].real();
    ratio[i] = std::abs(f(p)) * std::pow(bracket(p.x), -a.order.m2) * std::pow(bracket(xi), -a.order.m1);
  });
  rep.points = pts.size();
  rep.margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (ratio[i] < rep.margin) {
      rep.margin = ratio[i];
      rep.witness = pts[i];
    }
  }
  const auto radii = log_space(rep.grid.r_min, rep.grid.r_max, rep.grid.radii);
  const std::size_t nr = radii.size();
  rep.outer_slope = 0.0;
  if (nr >= 2) {
    std::size_t k = 0;
    while (k + 1 < nr && radii[k] < radii.back() / 10.0) ++k;
    if (k + 1 == nr) k = nr - 2;
    const double dl = std::log(radii.back()) - std::log(radii[k]);
    for (std::size_t ray = 0; ray * nr < pts.size(); ++ray) {
      const double q0 = ratio[ray * nr + k], q1 = ratio[ray * nr + nr - 1];
      if (q0 <= 0.0 || q1 <= 0.0) continue;
      rep.outer_slope = std::min(rep.outer_slope, (std::log(q1) - std::log(q0)) / dl);
    }
  }
  rep.pass = rep.margin >= rep.C_min && rep.outer_slope >= rep.slope_limit;
  return rep;
}

Poly normal_polynomial(const DiffSymbol& a, const std::vector<double>& x, const std::vector<double>& xi_t) {
  if (static_cast<int>(x.size()) != a.n || static_cast<int>(xi_t.size()) != a.n - 1) {
    fail(ErrorCode::InvalidArgument, "point has the wrong dimension");
  }
  return eval_normal(compiled_normal_coefficients(a), normal_point(a.n, x, xi_t));
}

double root_bound(const DiffSymbol& a, const std::vector<double>& x, const std::vector<double>& xi_t) {
  const Poly p = normal_polynomial(a, x, xi_t);
  double scale = 0.0;
  for (const cplx& c : p) scale = std::max(scale, std::abs(c));
  if (p.empty() || std::abs(p.back()) <= 1e-14 * scale || scale == 0.0) {
    fail(ErrorCode::LeadingCoeffVanishes, "leading normal coefficient vanishes");
  }
  return poly_root_bound(p);
}

RootProfile roots_in_normal(const DiffSymbol& a, const std::vector<double>& x_t, const std::vector<double>& xi_t) {
  return profile_from(a, compiled_normal_coefficients(a), x_t, xi_t);
}

ProperReport properly_elliptic_check(const DiffSymbol& P, double R, const RadialGridSpec& grid) {
  ProperReport rep;
  rep.R = R;
  rep.grid = grid;
  rep.grid.r_min = R;
  rep.r = P.normal_degree() / 2;
  const int n = P.n;
  const auto pts = boundary_grid(n, R, grid);
  rep.points = pts.size();
  const auto c = compiled_normal_coefficients(P);
  struct Outcome {
    bool ok = true;
    std::string reason;
    std::vector<cplx> roots;
  };
  std::vector<Outcome> out(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    const std::vector<double> x_t(pts[i].begin(), pts[i].begin() + (n - 1));
    const std::vector<double> xi_t(pts[i].begin() + (n - 1), pts[i].end());
    try {
      const RootProfile prof = profile_from(P, c, x_t, xi_t);
      if (P.normal_degree() % 2 != 0 || static_cast<int>(prof.upper.size()) != rep.r) {
        out[i] = {false, std::to_string(prof.upper.size()) + " roots in the upper half-plane, expected " +
                             std::to_string(rep.r), prof.roots};
      }
    } catch (const Error& e) {
      out[i] = {false, std::string(to_string(e.code())) + ": " + e.what(), {}};
    }
  });
  rep.pass = true;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!out[i].ok) {
      rep.pass = false;
      rep.witness = pts[i];
      rep.witness_roots = out[i].roots;
      rep.reason = out[i].reason;
      break;
    }
  }
  return rep;
}

Eigen::MatrixXcd ls_matrix(const BVProblem& problem, const RootProfile& profile) {
  const int r = static_cast<int>(problem.rows.size());
  if (static_cast<int>(profile.upper.size()) != r) {
    fail(ErrorCode::InvalidArgument, "root profile does not have r upper roots");
  }
  const int n = problem.n();
  const Point p = normal_point(n, boundary_x(n, profile.x_t), profile.xi_t);
  const double bx = bracket(profile.x_t), bxi = bracket(profile.xi_t);
  Eigen::MatrixXcd m(r, r);
  for (int j = 0; j < r; ++j) {
    const BoundaryRow& row = problem.rows[static_cast<std::size_t>(j)];
    Poly b(row.B.size(), 0.0);
    for (std::size_t k = 0; k < row.B.size(); ++k) {
      if (row.B[k].is_zero()) continue;
      b[k] = eval(row.B[k], p) * std::pow(bx, -row.m2j) * std::pow(bxi, static_cast<double>(k) - row.m1j);
    }
    const PolyDivision d = poly_divmod(b, profile.a_plus);
    for (int k = 0; k < r; ++k) m(j, k) = d.remainder[static_cast<std::size_t>(k)];
  }
  return m;
}

Eigen::MatrixXcd ls_matrix(const BVProblem& problem, const std::vector<double>& x_t,
                           const std::vector<double>& xi_t) {
  return ls_matrix(problem, roots_in_normal(problem.P, x_t, xi_t));
}

LSReport ls_check(const BVProblem& problem, double R, const RadialGridSpec& grid, double C_min) {
  LSReport rep;
  rep.R = R;
  rep.grid = grid;
  rep.grid.r_min = R;
  rep.C = C_min;
  const int n = problem.n();
  rep.points = boundary_grid(n, R, grid);
  rep.det.assign(rep.points.size(), 0.0);
  std::vector<std::string> errs(rep.points.size());
  const auto c = compiled_normal_coefficients(problem.P);
  parallel_for(rep.points.size(), [&](std::size_t i) {
    const auto& y = rep.points[i];
    const std::vector<double> x_t(y.begin(), y.begin() + (n - 1));
    const std::vector<double> xi_t(y.begin() + (n - 1), y.end());
    try {
      rep.det[i] = std::abs(ls_matrix(problem, profile_from(problem.P, c, x_t, xi_t)).determinant());
    } catch (const Error& e) {
      errs[i] = std::string(to_string(e.code())) + ": " + e.what();
    }
  });
  rep.min_det = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rep.points.size(); ++i) {
    if (!errs[i].empty()) {
      rep.min_det = 0.0;
      rep.witness = rep.points[i];
      rep.error = errs[i];
      break;
    }
    if (rep.det[i] < rep.min_det) {
      rep.min_det = rep.det[i];
      rep.witness = rep.points[i];
    }
  }
  rep.pass = rep.error.empty() && rep.min_det >= rep.C;
  return rep;
}

namespace {

nlohmann::json cplx_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

}  // namespace

void to_json(nlohmann::json& j, const RadialGridSpec& g) {
  j = {{"r_min", g.r_min}, {"r_max", g.r_max}, {"radii", g.radii}, {"rays", g.rays}, {"seed", g.seed}};
}

void to_json(nlohmann::json& j, const EllipticReport& r) {
  j = {{"check", "sg_elliptic"}, {"R", r.R},         {"grid", r.grid},
       {"points", r.points},     {"margin", r.margin}, {"C_min", r.C_min},
       {"outer_slope", r.outer_slope}, {"slope_limit", r.slope_limit},
       {"witness", r.witness},   {"pass", r.pass}};
}

void to_json(nlohmann::json& j, const ProperReport& r) {
  auto roots = nlohmann::json::array();
  for (const cplx& z : r.witness_roots) roots.push_back(cplx_json(z));
  j = {{"check", "properly_elliptic"}, {"R", r.R}, {"grid", r.grid}, {"points", r.points}, {"r", r.r},
       {"pass", r.pass}, {"witness", r.witness}, {"witness_roots", roots}, {"reason", r.reason}};
}

void to_json(nlohmann::json& j, const LSReport& r) {
  j = {{"check", "lopatinski_shapiro"}, {"R", r.R},   {"grid", r.grid}, {"points", r.points.size()},
       {"min_det", r.min_det},           {"C", r.C},   {"witness", r.witness},
       {"error", r.error},               {"pass", r.pass}};
}

}  // namespace sgcalc
