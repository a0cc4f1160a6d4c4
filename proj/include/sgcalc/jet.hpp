#pragma once

#include <memory>
#include <span>
#include <vector>

namespace sgcalc {

/// Truncated multivariate Taylor polynomial: sum over |gamma| <= order of
/// c_gamma h^gamma around an expansion point. Used to obtain exact partial
/// derivatives of composite smooth functions (cutoffs, Dzanasija bumps)
/// through the chain rule without symbolic expressions.
class Jet {
 public:
  struct Table;

  Jet(int dims, int order);

  static Jet constant(int dims, int order, double c);
  /// The coordinate y_i = at + h_i.
  static Jet variable(int dims, int order, int i, double at);

  int dims() const;
  int order() const;
  double value() const { return coef_[0]; }
  double coefficient(std::span<const int> gamma) const;
  /// d^gamma at the expansion point (coefficient times gamma!).
  double derivative(std::span<const int> gamma) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(double s);
  Jet& operator+=(double s);
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }

  /// f(this) given the normalized Taylor coefficients taylor[m] = f^(m)(v)/m!
  /// of f at v = value(). Missing high coefficients are treated as zero.
  Jet compose(std::span<const double> taylor) const;

 private:
  std::shared_ptr<const Table> table_;
  std::vector<double> coef_;
};

/// Normalized Taylor coefficients of y -> y^p at y0 up to the given order.
std::vector<double> taylor_pow(double y0, double p, int order);
/// Normalized Taylor coefficients of exp at y0.
std::vector<double> taylor_exp(double y0, int order);

}  // namespace sgcalc
