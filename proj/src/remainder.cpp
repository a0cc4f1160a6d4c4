#include "sgcalc/remainder.hpp"

#include <cmath>

#include "sgcalc/errors.hpp"
#include "sgcalc/fit.hpp"
#include "sgcalc/grid.hpp"
#include "sgcalc/parallel.hpp"

namespace sgcalc {

namespace {

struct GroupFit {
  double slope = -std::numeric_limits<double>::infinity();
  double ci95 = 0.0;
  double residual = 0.0;
  bool degenerate = true;
};

// Rays along +-e_i of one coordinate group, anchors on the other group.
GroupFit fit_group(const PhaseFunction& c, int n, bool along_x, const RemainderProbe& probe,
                   std::size_t& points) {
  const auto radii = log_space(probe.r_min, probe.r_max, probe.radii);
  struct Ray {
    int axis;
    double sign;
    double anchor;
  };
  std::vector<Ray> rays;
  for (int i = 0; i < n; ++i) {
    for (double s : {1.0, -1.0}) {
      for (double a : probe.anchors) rays.push_back({i, s, a});
    }
  }
  std::vector<std::vector<double>> values(rays.size(), std::vector<double>(radii.size()));
  parallel_for(rays.size() * radii.size(), [&](std::size_t idx) {
    const Ray& ray = rays[idx / radii.size()];
    const double r = radii[idx % radii.size()];
    std::vector<double> moving(static_cast<std::size_t>(n), 0.0), fixed(static_cast<std::size_t>(n), ray.anchor);
    moving[static_cast<std::size_t>(ray.axis)] = ray.sign * r;
    const Point p = along_x ? Point(moving, fixed) : Point(fixed, moving);
    values[idx / radii.size()][idx % radii.size()] = std::abs(c(p));
  });
  GroupFit g;
  for (const auto& v : values) {
    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < radii.size(); ++k) {
      if (!(v[k] > probe.floor)) continue;
      lx.push_back(0.5 * std::log1p(radii[k] * radii[k]));
      ly.push_back(std::log(v[k]));
    }
    points += lx.size();
    if (lx.size() < 3) continue;
    const LinearFit f = line_fit(lx, ly);
    if (g.degenerate || f.coef(1) > g.slope) {
      g.slope = f.coef(1);
      g.ci95 = f.ci95(1);
      g.residual = f.rms_residual;
    }
    g.degenerate = false;
  }
  return g;
}

}  // namespace

RemainderFit remainder_order(const PhaseFunction& c, int n, const RemainderProbe& probe) {
  if (probe.r_min <= 0.0 || probe.r_max < 100.0 * probe.r_min) {
    fail(ErrorCode::InvalidArgument, "remainder probe radii must span at least two decades");
  }
  if (probe.radii < 3) fail(ErrorCode::InvalidArgument, "remainder probe needs at least three radii");
  RemainderFit r;
  const GroupFit gx = fit_group(c, n, true, probe, r.points);
  const GroupFit gxi = fit_group(c, n, false, probe, r.points);
  r.slope_x = gx.slope;
  r.ci95_x = gx.ci95;
  r.residual_x = gx.residual;
  r.degenerate_x = gx.degenerate;
  r.slope_xi = gxi.slope;
  r.ci95_xi = gxi.ci95;
  r.residual_xi = gxi.residual;
  r.degenerate_xi = gxi.degenerate;
  return r;
}

RemainderFit remainder_order(const Expr& c, int n, const RemainderProbe& probe) {
  const CompiledExpr f(c);
  return remainder_order([&f](const Point& p) { return f(p); }, n, probe);
}

RemainderFit remainder_order(const FormalSum& c, const RemainderProbe& probe) {
  std::vector<CompiledExpr> terms;
  for (const Expr& t : c.terms) terms.emplace_back(t);
  return remainder_order(
      [&](const Point& p) {
        double chi = 1.0;
        if (c.cutoff) {
          chi = (*c.cutoff)(p);
          if (chi == 0.0) return cplx(0.0);
        }
        cplx s = 0.0;
        for (const auto& t : terms) s += t(p);
        return chi * s;
      },
      c.n, probe);
}

FormalSum parametrix_defect(const FormalSum& b, const DiffSymbol& a) {
  const int M = b.N() + exact_extra_terms(a);
  FormalSum c = compose(b, FormalSum::from_symbol(a), M, M);
  c.terms[0] = c.terms[0] - 1.0;
  c.cutoff.reset();
  return c;
}

}  // namespace sgcalc
