#pragma once

#include <functional>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "sgcalc/contour.hpp"
#include "sgcalc/ellipticity.hpp"
#include "sgcalc/symbol.hpp"

namespace sgcalc {

enum class BoundaryMethod { Residue, Quadrature };

struct BoundarySymbolOptions {
  BoundaryMethod method = BoundaryMethod::Residue;
  /// Integrands of degree -1 are handled by closing the contour upward for
  /// x_n > 0 before the limit. This flag also accepts degree >= 0: the
  /// polynomial part is supported on x_n = 0 and drops out of the limit
  /// x_n -> 0+, leaving i * (sum of upper residues).
  bool allow_polynomial_part = false;
  /// Contour radius factor: the closed path is the segment
  /// [-B<xi'>, B<xi'>] plus the upper semicircle.
  double B = 4.0;
  double abs_tol = 1e-10;
  int residue_nodes = 64;
};

/// Symbol of u -> lim_{x_n -> 0+} D_{x_n}^k op(term)(u (x) D^j delta), i.e.
/// (1/2 pi) int xi_n^{k+j} term(x', 0, xi', xi_n) d xi_n, at (x', xi').
cplx boundary_symbol(const Expr& term, int n, int k, int j, const std::vector<double>& x_t,
                     const std::vector<double>& xi_t, const BoundarySymbolOptions& opt = {});

/// Reusable version for sweeps: the pole structure of term is analysed once.
class BoundarySymbol {
 public:
  BoundarySymbol(const Expr& term, int n, int k, int j, BoundarySymbolOptions opt = {});
  cplx operator()(const std::vector<double>& x_t, const std::vector<double>& xi_t) const;
  int k() const { return k_; }
  int j() const { return j_; }
  /// Degree in xi_n of the integrand.
  double degree() const { return degree_; }

 private:
  int n_, k_, j_;
  BoundarySymbolOptions opt_;
  Expr integrand_;
  CompiledExpr compiled_;
  NormalPoles poles_;
  double degree_;
};

/// Table q^{kj} for 0 <= k, j < size of the sum of the terms of a, each
/// entry of declared order (m1 + j + k + 1, m2) relative to a.
struct BoundarySymbolTable {
  int n = 1;
  int size = 0;
  SGOrder source_order;
  std::vector<std::vector<BoundarySymbol>> terms;  // [k * size + j] -> one per term of a

  static BoundarySymbolTable build(const FormalSum& a, int size, const BoundarySymbolOptions& opt);
  cplx value(int k, int j, const std::vector<double>& x_t, const std::vector<double>& xi_t) const;
  SGOrder declared_order(int k, int j) const { return {source_order.m1 + j + k + 1, source_order.m2}; }
};

/// Entries (l, j) -> (1/i) P_{j+l+1}(x', 0, xi'), present iff j + l + 1 <= m1.
std::map<std::pair<int, int>, Expr> assemble_Ptilde(const DiffSymbol& P);

/// Leading symbol of the normalized boundary system (I - Qbar; Bbar), of shape
/// (m1 + r) x m1, evaluated pointwise in (x', xi').
class BoundarySystem {
 public:
  BoundarySystem(const BVProblem& problem, const FormalSum& parametrix, int N, const BoundarySymbolOptions& opt);
  Eigen::MatrixXcd operator()(const std::vector<double>& x_t, const std::vector<double>& xi_t) const;
  int rows() const { return m1_ + r_; }
  int cols() const { return m1_; }
  int n() const { return n_; }
  /// The Qbar block alone.
  Eigen::MatrixXcd qbar(const std::vector<double>& x_t, const std::vector<double>& xi_t) const;

 private:
  int n_, m1_, r_;
  BVProblem problem_;
  BoundarySymbolTable table_;
  std::vector<CompiledExpr> P_;  // P_j at x_n = 0
};

BoundarySystem assemble_system(const BVProblem& problem, const FormalSum& parametrix, int N,
                               const BoundarySymbolOptions& opt = {});

using MatrixSymbol = std::function<Eigen::MatrixXcd(const std::vector<double>&, const std::vector<double>&)>;

struct LeftEllipticReport {
  double R = 0.0;
  RadialGridSpec grid;
  std::size_t points = 0;
  double min_singular_value = 0.0;
  double threshold = 1e-4;
  std::vector<double> witness;
  std::string error;
  bool pass = false;
};

LeftEllipticReport left_elliptic_check(const MatrixSymbol& system, int n, double R, const RadialGridSpec& grid,
                                       double threshold = 1e-4);
LeftEllipticReport left_elliptic_check(const BoundarySystem& system, double R, const RadialGridSpec& grid,
                                       double threshold = 1e-4);

void to_json(nlohmann::json& j, const LeftEllipticReport& r);

}  // namespace sgcalc
