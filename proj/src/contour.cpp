#include "sgcalc/contour.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sgcalc/errors.hpp"
#include "sgcalc/parallel.hpp"
#include "sgcalc/polynomial.hpp"

namespace sgcalc {

namespace {

double bracket(const std::vector<double>& v) {
  double s = 1.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

}  // namespace

ContourPath make_contour(ContourKind kind, double B, const std::vector<double>& xi_t, int M, double mu, double nu) {
  if (!(B > 0.0)) fail(ErrorCode::InvalidArgument, "contour radius factor must be positive");
  ContourPath p;
  p.kind = kind;
  p.B = B;
  p.xi_t = xi_t;
  p.M = M;
  p.mu = mu;
  p.nu = nu;
  const double R = B * bracket(xi_t);
  const double far = B * std::pow(static_cast<double>(M), mu + nu - 1.0);
  ContourSegment arc;
  arc.type = ContourSegment::Type::Arc;
  arc.radius = R;
  arc.theta0 = 0.0;
  arc.theta1 = std::numbers::pi;
  double start = 0.0;
  bool bridge = false;
  if (kind == ContourKind::Bridged) {
    start = far;
    bridge = true;
  } else if (kind == ContourKind::Clipped) {
    const double d = far * far - R * R / (B * B);
    start = d >= 0.0 ? std::sqrt(d) : 0.0;
    bridge = true;
  }
  if (bridge) {
    ContourSegment g1;
    g1.a = start;
    g1.b = R;
    p.segments.push_back(g1);
  }
  p.segments.push_back(arc);
  if (bridge) {
    ContourSegment g2;
    g2.a = -R;
    g2.b = -start;
    p.segments.push_back(g2);
  }
  return p;
}

cplx integrate_segment(const ComplexFunction& f, const ContourSegment& s, double abs_tol) {
  using Q = boost::math::quadrature::gauss_kronrod<double, 31>;
  double err = 0.0;
  auto run = [&](auto&& g, double lo, double hi) {
    // Split real and imaginary parts so the tolerance applies to each.
    const double re = Q::integrate([&](double t) { return g(t).real(); }, lo, hi, 20, abs_tol, &err);
    const double re_err = err;
    const double im = Q::integrate([&](double t) { return g(t).imag(); }, lo, hi, 20, abs_tol, &err);
    if (!std::isfinite(re) || !std::isfinite(im)) fail(ErrorCode::QuadratureFailure, "non-finite contour integral");
    if (re_err > 1e3 * std::max(abs_tol, 1e-14 * std::abs(re)) || err > 1e3 * std::max(abs_tol, 1e-14 * std::abs(im))) {
      fail(ErrorCode::QuadratureFailure, "contour quadrature did not converge");
    }
    return cplx(re, im);
  };
  if (s.type == ContourSegment::Type::Line) {
    if (s.a == s.b) return 0.0;
    const cplx d = s.b - s.a;
    return run([&](double t) { return f(s.a + t * d) * d; }, 0.0, 1.0);
  }
  return run(
      [&](double th) {
        const cplx z = std::polar(s.radius, th);
        return f(z) * cplx(0.0, 1.0) * z;
      },
      s.theta0, s.theta1);
}

cplx integrate(const ComplexFunction& f, const ContourPath& path, double abs_tol) {
  cplx s = 0.0;
  for (const auto& seg : path.segments) s += integrate_segment(f, seg, abs_tol);
  return s;
}

cplx circle_residue(const ComplexFunction& f, cplx z0, double radius, int nodes) {
  if (!(radius > 0.0)) fail(ErrorCode::InvalidArgument, "residue circle radius must be positive");
  cplx s = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const cplx w = std::polar(radius, 2.0 * std::numbers::pi * (k + 0.5) / nodes);
    s += f(z0 + w) * w;
  }
  return s / static_cast<double>(nodes);
}

Point normal_line_point(const std::vector<double>& x_t, const std::vector<double>& xi_t, cplx z) {
  std::vector<double> x(x_t);
  x.push_back(0.0);
  std::vector<cplx> xi(xi_t.begin(), xi_t.end());
  xi.push_back(z);
  return Point(std::move(x), std::move(xi));
}

namespace {

bool contains_normal(BracketGroup g) { return g == BracketGroup::Xi; }

struct Collector {
  int n;
  Var normal;
  std::vector<Expr> denominators;

  void visit(const Expr& e) {
    if (!e.depends_on(normal)) return;
    switch (e.kind()) {
      case Expr::Kind::Const:
      case Expr::Kind::Variable:
        return;
      case Expr::Kind::Add:
      case Expr::Kind::Mul:
        for (const Expr& a : e.args()) visit(a);
        return;
      case Expr::Kind::Pow:
        if (e.int_exponent() < 0) denominators.push_back(e.args()[0]);
        visit(e.args()[0]);
        return;
      case Expr::Kind::Bracket: {
        if (!contains_normal(e.group())) return;
        const double p = e.real_exponent();
        if (p != std::floor(p) || static_cast<long>(p) % 2 != 0) {
          fail(ErrorCode::NotRational, "odd bracket power in the normal covariable");
        }
        if (p < 0) denominators.push_back(Expr::bracket(e.group(), e.bracket_dim(), 2.0));
        return;
      }
    }
  }
};

}  // namespace

NormalPoles::NormalPoles(const Expr& e, int n) : n_(n) {
  const Var z = Var::xi(n - 1);
  Collector c{n, z, {}};
  c.visit(e);
  for (const Expr& d : c.denominators) {
    const double deg = structural_degree(d, z);
    if (deg < 0.0 || deg != std::floor(deg)) fail(ErrorCode::NotRational, "denominator is not polynomial in xi_n");
    std::vector<CompiledExpr> coeffs;
    Expr cur = d;
    double fact = 1.0;
    for (int m = 0; m <= static_cast<int>(deg); ++m) {
      if (m > 0) {
        cur = diff(cur, z);
        fact *= m;
      }
      coeffs.emplace_back(substitute(cur, z, 0.0) * (1.0 / fact));
    }
    factors_.push_back(std::move(coeffs));
    bases_.emplace_back(d);
  }
}

std::vector<cplx> NormalPoles::at(const std::vector<double>& x_t, const std::vector<double>& xi_t) const {
  if (static_cast<int>(x_t.size()) != n_ - 1 || static_cast<int>(xi_t.size()) != n_ - 1) {
    fail(ErrorCode::InvalidArgument, "tangential point has the wrong dimension");
  }
  EvalOptions opt;
  opt.allow_complex_normal = true;
  std::vector<cplx> poles;
  for (std::size_t f = 0; f < factors_.size(); ++f) {
    const Point p0 = normal_line_point(x_t, xi_t, 0.0);
    Poly poly;
    for (const auto& c : factors_[f]) poly.push_back(c(p0));
    // The structural degree may overestimate; trim vanishing leading terms.
    double scale = 0.0;
    for (const cplx& c : poly) scale = std::max(scale, std::abs(c));
    while (poly.size() > 1 && std::abs(poly.back()) <= 1e-14 * scale) poly.pop_back();
    for (const cplx& zt : {cplx(0.37, 0.61), cplx(-1.3, 0.2)}) {
      const cplx want = bases_[f](normal_line_point(x_t, xi_t, zt), opt);
      if (std::abs(poly_eval(poly, zt) - want) > 1e-9 * std::max(1.0, std::abs(want))) {
        fail(ErrorCode::NotRational, "denominator is not polynomial in xi_n");
      }
    }
    if (poly.size() <= 1) continue;
    for (const cplx& r : poly_roots(poly)) poles.push_back(r);
  }
  // Merge numerically split multiple roots.
  std::sort(poles.begin(), poles.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  std::vector<cplx> distinct;
  for (const cplx& p : poles) {
    bool merged = false;
    for (cplx& d : distinct) {
      if (std::abs(d - p) <= 1e-6 * std::max(1.0, std::abs(p))) {
        merged = true;
        break;
      }
    }
    if (!merged) distinct.push_back(p);
  }
  return distinct;
}

AssumptionAProfile audit_assumption_a(const FormalSum& a, double B, double r, double R, const RadialGridSpec& grid,
                                      int M) {
  if (!(B > r && r > 0.0)) fail(ErrorCode::InvalidArgument, "assumption (A) needs B > r > 0");
  AssumptionAProfile prof;
  prof.B = B;
  prof.r = r;
  prof.M = M;
  prof.validity_radius = B * std::pow(static_cast<double>(M), a.indices.mu + a.indices.nu - 1.0);
  const int n = a.n;
  std::vector<NormalPoles> poles;
  for (const Expr& t : a.terms) poles.emplace_back(t, n);
  RadialGridSpec g = grid;
  g.r_min = R;
  const auto pts = radial_grid(2 * (n - 1), g);
  prof.points = pts.size();
  const std::size_t T = poles.size();
  std::vector<double> ratio(pts.size() * T, 0.0);
  std::vector<std::size_t> counts(pts.size() * T, 0);
  std::vector<char> bad(pts.size(), 0);
  parallel_for(pts.size(), [&](std::size_t i) {
    const std::vector<double> x_t(pts[i].begin(), pts[i].begin() + (n - 1));
    const std::vector<double> xi_t(pts[i].begin() + (n - 1), pts[i].end());
    const double bxi = bracket(xi_t);
    double radius2 = 0.0;
    for (double v : pts[i]) radius2 += v * v;
    for (std::size_t t = 0; t < T; ++t) {
      const auto zs = poles[t].at(x_t, xi_t);
      counts[i * T + t] = zs.size();
      for (const cplx& z : zs) {
        ratio[i * T + t] = std::max(ratio[i * T + t], std::abs(z) / bxi);
        if (std::abs(z) > r * bxi) bad[i] = 1;
        if (std::abs(z.imag()) < 1e-12 * std::max(1.0, std::abs(z)) &&
            std::sqrt(radius2 + std::norm(z)) > B) {
          bad[i] = 1;
        }
      }
    }
  });
  prof.max_pole_ratio.assign(T, 0.0);
  prof.pole_counts.assign(T, 0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t t = 0; t < T; ++t) {
      prof.max_pole_ratio[t] = std::max(prof.max_pole_ratio[t], ratio[i * T + t]);
      prof.pole_counts[t] = std::max(prof.pole_counts[t], counts[i * T + t]);
    }
    if (bad[i]) {
      if (prof.violations == 0) prof.witness = pts[i];
      ++prof.violations;
    }
  }
  prof.pass = prof.violations == 0;
  return prof;
}

void to_json(nlohmann::json& j, const AssumptionAProfile& p) {
  j = {{"B", p.B},
       {"r", p.r},
       {"C", p.C},
       {"D", p.D},
       {"M", p.M},
       {"validity_radius", p.validity_radius},
       {"points", p.points},
       {"max_pole_ratio", p.max_pole_ratio},
       {"pole_counts", p.pole_counts},
       {"violations", p.violations},
       {"witness", p.witness},
       {"pass", p.pass}};
}

}  // namespace sgcalc
