#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "sgcalc/grid.hpp"
#include "sgcalc/polynomial.hpp"
#include "sgcalc/symbol.hpp"

namespace sgcalc {

/// Boundary operator B^j = sum_k B_{j,k}(x', D') D_{x_n}^k.
struct BoundaryRow {
  int m1j = 0;
  double m2j = 0.0;
  std::vector<Expr> B;  // B_{j,k} for k = 0..m1-1, expressions in (x', xi')
};

struct BVProblem {
  std::string name;
  DiffSymbol P;
  std::vector<BoundaryRow> rows;

  int n() const { return P.n; }
  int m1() const { return P.normal_degree(); }
  int r() const { return m1() / 2; }
  /// Throws InvalidArgument when the structural conditions fail.
  void validate() const;
};

struct EllipticReport {
  double R = 0.0;
  RadialGridSpec grid;
  std::size_t points = 0;
  double margin = 0.0;  // inf |a| <x>^{-m2} <xi>^{-m1}
  double C_min = 1e-6;
  /// Worst log-log slope of the margin ratio over the outer decade of any ray.
  double outer_slope = 0.0;
  double slope_limit = -0.5;
  std::vector<double> witness;  // (x, xi) where the margin is attained
  bool pass = false;
};

struct EllipticOptions {
  double C_min = 1e-6;
  /// A ratio still decaying like r^{slope} at the grid edge is not bounded
  /// below, whatever its value at r_max.
  double slope_limit = -0.5;
};

EllipticReport sg_elliptic_check(const DiffSymbol& a, double R, const RadialGridSpec& grid,
                                 const EllipticOptions& opt = {});

/// Coefficients of z -> a(x, xi', z) at the full point x.
Poly normal_polynomial(const DiffSymbol& a, const std::vector<double>& x, const std::vector<double>& xi_t);

/// Radius enclosing every root of z -> a(x, xi', z).
double root_bound(const DiffSymbol& a, const std::vector<double>& x, const std::vector<double>& xi_t);

struct RootProfile {
  std::vector<double> x_t;
  std::vector<double> xi_t;
  std::vector<cplx> roots;  // of the normalized polynomial
  std::vector<cplx> upper;
  Poly a_plus;              // monic, ascending
  cplx leading = 0.0;
};

inline constexpr double kRealRootBand = 1e-9;

/// Roots of <x'>^{-m2} <xi'>^{-m1} a(x', 0, xi', <xi'> z). Fails with
/// RealRootDetected when a root lies within the dead band of the real axis.
RootProfile roots_in_normal(const DiffSymbol& a, const std::vector<double>& x_t, const std::vector<double>& xi_t);

struct ProperReport {
  double R = 0.0;
  RadialGridSpec grid;
  std::size_t points = 0;
  int r = 0;
  bool pass = false;
  std::vector<double> witness;  // (x', xi') of the first failure
  std::vector<cplx> witness_roots;
  std::string reason;
};

ProperReport properly_elliptic_check(const DiffSymbol& P, double R, const RadialGridSpec& grid);

/// Reduced boundary matrix b~^{j,k}, rows reduced modulo a+.
Eigen::MatrixXcd ls_matrix(const BVProblem& problem, const std::vector<double>& x_t,
                           const std::vector<double>& xi_t);
Eigen::MatrixXcd ls_matrix(const BVProblem& problem, const RootProfile& profile);

struct LSReport {
  double R = 0.0;
  RadialGridSpec grid;
  std::vector<std::vector<double>> points;
  std::vector<double> det;
  double min_det = 0.0;
  double C = 1e-4;
  std::vector<double> witness;
  std::string error;
  bool pass = false;
};

LSReport ls_check(const BVProblem& problem, double R, const RadialGridSpec& grid, double C_min = 1e-4);

/// Tangential grid for a boundary problem in n dimensions.
std::vector<std::vector<double>> boundary_grid(int n, double R, const RadialGridSpec& grid);

void to_json(nlohmann::json& j, const RadialGridSpec& g);
void to_json(nlohmann::json& j, const EllipticReport& r);
void to_json(nlohmann::json& j, const ProperReport& r);
void to_json(nlohmann::json& j, const LSReport& r);

}  // namespace sgcalc
