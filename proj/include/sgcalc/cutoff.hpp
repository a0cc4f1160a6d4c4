#pragma once

#include <span>

#include "sgcalc/expr.hpp"
#include "sgcalc/jet.hpp"

namespace sgcalc {

/// Radial cutoff chi(x, xi) = H((|(x,xi)| - B)/B) where H is the normalized
/// primitive of the Gevrey bump phi(s) = exp(-(s(1-s))^{-1/(theta_c-1)}) on
/// [0, 1]. Zero on |(x,xi)| <= B and one on |(x,xi)| >= 2B.
class GevreyCutoff {
 public:
  GevreyCutoff(double B, double theta_c);

  double B() const { return B_; }
  double theta_c() const { return theta_c_; }

  /// Profile as a function of the phase-space radius.
  double radial(double rho) const;
  /// Requires real xi.
  double operator()(const Point& p) const;
  /// Taylor jet in the 2n phase coordinates (x first, then xi) up to order.
  Jet jet(const Point& p, int order) const;
  /// d_xi^alpha d_x^beta chi at p.
  double derivative(const Point& p, std::span<const int> alpha, std::span<const int> beta) const;

 private:
  double bump(double s) const;
  double primitive(double s) const;
  std::vector<double> profile_taylor(double s, int order) const;

  double B_;
  double theta_c_;
  double norm_;
};

}  // namespace sgcalc
