#pragma once

#include <functional>
#include <vector>

#include <json.hpp>

#include "sgcalc/expr.hpp"
#include "sgcalc/grid.hpp"
#include "sgcalc/symbol.hpp"

namespace sgcalc {

enum class ContourKind { Semicircle, Bridged, Clipped };

struct ContourSegment {
  enum class Type { Line, Arc } type = Type::Line;
  cplx a = 0.0, b = 0.0;                  // Line endpoints
  double radius = 0.0, theta0 = 0.0, theta1 = 0.0;  // Arc around the origin
};

/// Integration paths in the xi_n plane: the semicircle {B<xi'> e^{i theta}},
/// optionally bridged to +-B M^{mu+nu-1} (or clipped to the disc boundary)
/// by real segments.
struct ContourPath {
  ContourKind kind = ContourKind::Semicircle;
  double B = 1.0;
  std::vector<double> xi_t;
  int M = 1;
  double mu = 1.0, nu = 1.0;
  std::vector<ContourSegment> segments;
};

ContourPath make_contour(ContourKind kind, double B, const std::vector<double>& xi_t, int M = 1, double mu = 1.0,
                         double nu = 1.0);

using ComplexFunction = std::function<cplx(cplx)>;

/// Adaptive Gauss-Kronrod along every segment.
cplx integrate(const ComplexFunction& f, const ContourPath& path, double abs_tol = 1e-10);
cplx integrate_segment(const ComplexFunction& f, const ContourSegment& s, double abs_tol = 1e-10);

/// Residue at z0 by the trapezoid rule on a circle of the given radius, which
/// must enclose no other singularity.
cplx circle_residue(const ComplexFunction& f, cplx z0, double radius, int nodes = 64);

/// Poles in xi_n of an expression rational in xi_n, found from the
/// denominator factors of its canonical form. Extra candidates (removable
/// singularities) are harmless to residue sums since their residue is zero.
class NormalPoles {
 public:
  /// Fails with NotRational when xi_n enters through a non-polynomial
  /// denominator or an odd bracket power.
  NormalPoles(const Expr& e, int n);
  /// Distinct candidate poles at the tangential point (x', xi') with x_n = 0.
  std::vector<cplx> at(const std::vector<double>& x_t, const std::vector<double>& xi_t) const;
  std::size_t factor_count() const { return factors_.size(); }

 private:
  int n_;
  std::vector<std::vector<CompiledExpr>> factors_;  // ascending coefficients in xi_n
  std::vector<CompiledExpr> bases_;
};

/// Point (x', 0, xi', z).
Point normal_line_point(const std::vector<double>& x_t, const std::vector<double>& xi_t, cplx z);

/// Audit of the pole conditions on the rational terms of a formal sum: every
/// pole z0 satisfies |z0| <= r <xi'>, and real poles occur only where
/// |(x', 0, xi', z0)| <= B.
struct AssumptionAProfile {
  double B = 2.0;
  double r = 1.5;
  double C = 1.0;
  double D = 1.0;
  int M = 1;
  double validity_radius = 0.0;  // B M^{mu+nu-1}
  std::size_t points = 0;
  std::vector<double> max_pole_ratio;  // per term, max |z0| / <xi'>
  std::vector<std::size_t> pole_counts;
  std::size_t violations = 0;
  std::vector<double> witness;
  bool pass = false;
};

AssumptionAProfile audit_assumption_a(const FormalSum& a, double B, double r, double R, const RadialGridSpec& grid,
                                      int M = 1);

void to_json(nlohmann::json& j, const AssumptionAProfile& p);

}  // namespace sgcalc
