#pragma once

#include <optional>
#include <vector>

#include "sgcalc/grid_function.hpp"

namespace sgcalc {

/// Constants of the Dzanasija cutoffs and the extension series.
struct ExtensionParams {
  double mu = 2.0;
  double nu = 1.0;
  double D = 1.0;
  double r_exp = 1.0;
  int K = 12;
  double quad_tol = 1e-12;

  /// (16/3)^{2r}.
  double a() const;
  /// D^{-1} k^{-(mu-1)}; k = 0 shares the support of k = 1.
  double sigma(int k) const;
  /// Throws InvalidArgument when a field is out of range.
  void validate() const;
  /// max{1, 2 B e^{a+1}}.
  static double proof_D(double B, double r_exp);
};

/// Normal derivatives d^k f/dx_n^k (x', 0), k = 0..K. values[k][i] belongs to
/// boundary sample i; n = 1 has a single sample and no boundary axis.
struct BoundaryJet {
  std::optional<Axis> boundary;
  std::vector<std::vector<cplx>> values;
  double B = 1.0;

  int n() const { return boundary ? 2 : 1; }
  int K() const { return static_cast<int>(values.size()) - 1; }
  std::size_t points() const { return boundary ? boundary->count : 1; }
  GridFunction derivative(int k) const;

  /// Throws JetGrowthViolation when |jet_k| > B^{k+1} (k!)^mu somewhere.
  void check_growth(double mu) const;

  static BoundaryJet scalar(std::vector<cplx> jets, double B);
};

double dzanasija_b(int k, double t, const ExtensionParams& p);
double dzanasija_a(int k, double t, const ExtensionParams& p);

/// d^m a_k/dt^m (t) for m = 0..order.
std::vector<double> dzanasija_a_derivatives(int k, double t, int order, const ExtensionParams& p);

/// d^m/dt^m [a_k(t) t^k / k!] for m = 0..order.
std::vector<double> extension_term_derivatives(int k, double t, int order, const ExtensionParams& p);

/// Exact d^q h/dx_n^q, q = 0..order, of the n = 1 series on xn.
std::vector<GridFunction> extension_derivatives(const BoundaryJet& jet, const ExtensionParams& p, const Axis& xn,
                                                int order);

/// h(x', x_n) = sum_{k<=K} a_k(x_n) jet_k(x') x_n^k / k! on x_n in xn (all
/// samples must be <= 0). 1-D over xn for n = 1, (x', x_n) for n = 2.
GridFunction extend_half_space(const BoundaryJet& jet, const ExtensionParams& p, const Axis& xn);

/// Joins h (x_n <= 0) and f (x_n > 0) along the last axis. f must continue
/// h's last axis with the same step.
GridFunction glue(const GridFunction& h, const GridFunction& f_plus);

/// Per order l <= max_order: max over boundary samples of
/// |d^l h(x', -offset) - jet_l(x')| / max(1, |jet_l(x')|), from exact
/// derivatives of the truncated series. offset <= 0 picks 1e-9 sigma_K.
std::vector<double> jet_match_errors(const BoundaryJet& jet, const ExtensionParams& p, int max_order,
                                     double offset = 0.0);

/// Geometric bound on the neglected terms k > K: q = e^a B / D and
/// q^{K+1}/(1-q), infinite when q >= 1.
struct ExtensionTail {
  double q = 0.0;
  double bound = 0.0;
};
ExtensionTail extension_tail(double B, const ExtensionParams& p);

/// Smallest T >= 1 for which the two derivative bounds on a_k(t) t^k hold
/// at every sampled t, k <= k_max, 1 <= alpha <= alpha_max.
struct EmpiricalT {
  double T = 1.0;
  int worst_k = 0;
  int worst_alpha = 0;
};
EmpiricalT empirical_T(const ExtensionParams& p, int k_max = 12, int alpha_max = 6, int samples = 256);

}  // namespace sgcalc
