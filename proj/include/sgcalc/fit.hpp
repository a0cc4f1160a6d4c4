#pragma once

#include <vector>

#include <Eigen/Dense>

#include "sgcalc/grid_function.hpp"

namespace sgcalc {

/// Ordinary least squares y ~ X beta.
struct LinearFit {
  Eigen::VectorXd coef;
  Eigen::VectorXd stderr_;   // standard errors of coef
  Eigen::VectorXd ci95;      // half-widths of the 95% intervals
  double rms_residual = 0.0;
  std::size_t points = 0;
};

/// Fails with DegenerateFit when there are fewer rows than columns and with
/// IllConditionedFit when the design matrix is numerically rank deficient.
LinearFit least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

/// Slope and intercept of y against x.
LinearFit line_fit(const std::vector<double>& x, const std::vector<double>& y);

struct DecayFit {
  double epsilon = 0.0;
  double log_C = 0.0;
  double residual = 0.0;  // RMS of log|u| residuals
  double p = 1.0;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t points = 0;
};

/// log|u(x)| ~ log C - epsilon |x|^p on lo <= x <= hi (1-D grid functions).
DecayFit decay_fit(const GridFunction& u, double lo, double hi, double p);

struct SeminormFit {
  double C = 0.0;
  double D = 0.0;
  double mu = 0.0;
  double nu = 0.0;
  double residual = 0.0;
  int alpha_max = 0;
  int beta_max = 0;
  /// sup_x |x^alpha u^(beta)(x)|, row-major in (alpha, beta).
  std::vector<double> sup;
};

/// Fits log sup|x^alpha d^beta u| ~ log C + (alpha+beta) log D + nu log alpha! + mu log beta!.
/// Derivatives are spectral, so u must decay to negligible values at both
/// ends of its grid. Fails with IllConditionedFit when beta_max < 3.
SeminormFit seminorm_fit(const GridFunction& u, int alpha_max, int beta_max);

/// Same fit from caller-supplied derivative samples derivatives[beta] on
/// 1-D grids, beta = 0..size-1.
SeminormFit seminorm_fit(const std::vector<GridFunction>& derivatives, int alpha_max);

}  // namespace sgcalc
