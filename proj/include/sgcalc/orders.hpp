#pragma once

namespace sgcalc {

/// SG order (m1, m2): m1 is the covariable order, m2 the weight order.
struct SGOrder {
  double m1 = 0.0;
  double m2 = 0.0;

  friend SGOrder operator+(SGOrder a, SGOrder b) { return {a.m1 + b.m1, a.m2 + b.m2}; }
  friend SGOrder operator-(SGOrder a) { return {-a.m1, -a.m2}; }
  friend bool operator==(SGOrder, SGOrder) = default;
};

/// Gevrey indices of a symbol class; theta is the regularity index of the
/// remainders and must satisfy theta >= mu + nu - 1.
struct GevreyIndices {
  double mu = 1.0;
  double nu = 1.0;
  double theta = 1.0;

  static GevreyIndices with_minimal_theta(double mu, double nu) { return {mu, nu, mu + nu - 1.0}; }
  bool valid() const { return mu >= 1.0 && nu >= 1.0 && theta >= mu + nu - 1.0; }
  friend bool operator==(GevreyIndices, GevreyIndices) = default;
};

}  // namespace sgcalc
