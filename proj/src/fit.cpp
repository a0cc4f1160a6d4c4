#include "sgcalc/fit.hpp"

#include <array>
#include <cmath>

#include <boost/math/distributions/students_t.hpp>

#include "sgcalc/errors.hpp"
#include "sgcalc/spectral.hpp"

namespace sgcalc {

LinearFit least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  const auto rows = X.rows(), cols = X.cols();
  if (rows < cols || rows == 0) fail(ErrorCode::DegenerateFit, "fewer samples than parameters");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-12);
  if (qr.rank() < cols) fail(ErrorCode::IllConditionedFit, "design matrix is rank deficient");
  LinearFit f;
  f.coef = qr.solve(y);
  const Eigen::VectorXd res = y - X * f.coef;
  f.points = static_cast<std::size_t>(rows);
  f.rms_residual = std::sqrt(res.squaredNorm() / static_cast<double>(rows));
  f.stderr_ = Eigen::VectorXd::Zero(cols);
  f.ci95 = Eigen::VectorXd::Zero(cols);
  const auto dof = rows - cols;
  if (dof > 0) {
    const double s2 = res.squaredNorm() / static_cast<double>(dof);
    const Eigen::MatrixXd cov = (X.transpose() * X).inverse() * s2;
    const boost::math::students_t t(static_cast<double>(dof));
    const double q = boost::math::quantile(boost::math::complement(t, 0.025));
    for (Eigen::Index k = 0; k < cols; ++k) {
      f.stderr_(k) = std::sqrt(std::max(0.0, cov(k, k)));
      f.ci95(k) = q * f.stderr_(k);
    }
  }
  return f;
}

LinearFit line_fit(const std::vector<double>& x, const std::vector<double>& y) {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(x.size()), 2);
  Eigen::VectorXd Y(static_cast<Eigen::Index>(y.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    X(static_cast<Eigen::Index>(i), 0) = 1.0;
    X(static_cast<Eigen::Index>(i), 1) = x[i];
    Y(static_cast<Eigen::Index>(i)) = y[i];
  }
  return least_squares(X, Y);
}

DecayFit decay_fit(const GridFunction& u, double lo, double hi, double p) {
  if (u.dims() != 1) fail(ErrorCode::InvalidArgument, "decay_fit needs a 1-D grid function");
  if (!(hi > lo)) fail(ErrorCode::InvalidArgument, "empty decay window");
  const Axis& ax = u.axis(0);
  if (lo < std::min(ax.start, ax.end()) - 1e-12 || hi > std::max(ax.start, ax.end()) + 1e-12) {
    fail(ErrorCode::InvalidArgument, "decay window lies outside the sampled domain");
  }
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = ax.at(i);
    if (x < lo - 1e-12 || x > hi + 1e-12) continue;
    const double a = std::abs(u[i]);
    if (a == 0.0) continue;
    xs.push_back(-std::pow(std::abs(x), p));
    ys.push_back(std::log(a));
  }
  if (xs.size() < 2) fail(ErrorCode::AllZeroWindow, "no nonzero samples in the decay window");
  const LinearFit f = line_fit(xs, ys);
  DecayFit d;
  d.log_C = f.coef(0);
  d.epsilon = f.coef(1);
  d.residual = f.rms_residual;
  d.p = p;
  d.lo = lo;
  d.hi = hi;
  d.points = xs.size();
  return d;
}

SeminormFit seminorm_fit(const GridFunction& u, int alpha_max, int beta_max) {
  if (u.dims() != 1) fail(ErrorCode::InvalidArgument, "seminorm_fit needs a 1-D grid function");
  if (beta_max < 3) fail(ErrorCode::IllConditionedFit, "beta_max below 3 cannot separate D from mu");
  if (beta_max > 8) fail(ErrorCode::InvalidArgument, "beta_max above 8 is not resolved by the derivative stencils");
  std::vector<GridFunction> d;
  for (int b = 0; b <= beta_max; ++b) d.emplace_back(u.axes(), spectral_derivative(u.values(), u.axis(0).step, b));
  return seminorm_fit(d, alpha_max);
}

SeminormFit seminorm_fit(const std::vector<GridFunction>& derivatives, int alpha_max) {
  const int beta_max = static_cast<int>(derivatives.size()) - 1;
  if (beta_max < 3) fail(ErrorCode::IllConditionedFit, "beta_max below 3 cannot separate D from mu");
  if (alpha_max < 0) fail(ErrorCode::InvalidArgument, "alpha_max must be nonnegative");
  SeminormFit s;
  s.alpha_max = alpha_max;
  s.beta_max = beta_max;
  s.sup.assign(static_cast<std::size_t>((alpha_max + 1) * (beta_max + 1)), 0.0);
  for (int b = 0; b <= beta_max; ++b) {
    const GridFunction& d = derivatives[static_cast<std::size_t>(b)];
    if (d.dims() != 1) fail(ErrorCode::InvalidArgument, "seminorm_fit needs 1-D grid functions");
    const Axis& ax = d.axis(0);
    for (int a = 0; a <= alpha_max; ++a) {
      double m = 0.0;
      for (std::size_t i = 0; i < d.size(); ++i) m = std::max(m, std::pow(std::abs(ax.at(i)), a) * std::abs(d[i]));
      s.sup[static_cast<std::size_t>(a * (beta_max + 1) + b)] = m;
    }
  }
  if (derivatives[0].max_abs() == 0.0) return s;
  std::vector<std::array<double, 4>> rows;
  std::vector<double> ys;
  for (int a = 0; a <= alpha_max; ++a) {
    for (int b = 0; b <= beta_max; ++b) {
      const double m = s.sup[static_cast<std::size_t>(a * (beta_max + 1) + b)];
      if (m <= 0.0) continue;
      rows.push_back({1.0, static_cast<double>(a + b), std::lgamma(a + 1.0), std::lgamma(b + 1.0)});
      ys.push_back(std::log(m));
    }
  }
  // Without alpha variation the nu column is zero; fit it out.
  const int cols = alpha_max >= 2 ? 4 : 3;
  Eigen::MatrixXd X(static_cast<Eigen::Index>(rows.size()), cols);
  Eigen::VectorXd Y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    X(r, 0) = rows[i][0];
    X(r, 1) = rows[i][1];
    if (cols == 4) {
      X(r, 2) = rows[i][2];
      X(r, 3) = rows[i][3];
    } else {
      X(r, 2) = rows[i][3];
    }
    Y(r) = ys[i];
  }
  const LinearFit f = least_squares(X, Y);
  s.C = std::exp(f.coef(0));
  s.D = std::exp(f.coef(1));
  if (cols == 4) {
    s.nu = f.coef(2);
    s.mu = f.coef(3);
  } else {
    s.mu = f.coef(2);
  }
  s.residual = f.rms_residual;
  return s;
}

}  // namespace sgcalc
