#pragma once

#include <cstdint>
#include <vector>

#include "sgcalc/expr.hpp"

namespace sgcalc {

/// Log-radial x directional sampling of {R <= |y| <= R_max} in R^dims. This
/// stands in for "for all |y| >= R" in uniform estimates.
struct RadialGridSpec {
  double r_min = 1.0;
  double r_max = 1e3;
  int radii = 12;
  /// Directions per circle-equivalent; dims > 2 add axes, diagonals and
  /// seeded random directions.
  int rays = 16;
  std::uint64_t seed = 0;
};

/// Sample points in R^dims. dims == 0 yields the single empty point.
std::vector<std::vector<double>> radial_grid(int dims, const RadialGridSpec& spec);

/// Unit directions used by radial_grid.
std::vector<std::vector<double>> grid_directions(int dims, const RadialGridSpec& spec);

/// Splits a 2n-vector (x, xi) into a phase-space point.
Point phase_point(const std::vector<double>& y, int n);

/// Phase-space point (x', 0, xi', xi_n) from tangential coordinates y = (x', xi').
Point boundary_point(const std::vector<double>& tangential, int n, cplx xi_n = 0.0);

std::vector<double> log_space(double lo, double hi, int count);

}  // namespace sgcalc
