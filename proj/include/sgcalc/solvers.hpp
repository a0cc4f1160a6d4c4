#pragma once

#include <functional>

#include "sgcalc/grid_function.hpp"
#include "sgcalc/problem.hpp"

namespace sgcalc {

/// c2(x) D^2 u + c1(x) D u + c0(x) u = f on [0, L] with D = -i d/dx,
/// b0 u(0) + b1 (D u)(0) = g and u(L) = 0.
struct NormalOde {
  std::function<cplx(double)> c0, c1, c2, f;
  cplx b0 = 1.0;
  cplx b1 = 0.0;
  cplx g = 0.0;
};

struct OdeSolution {
  GridFunction u;
  double residual = 0.0;  // relative residual of the linear system
};

/// Fourth-order finite differences (one-sided six-point stencils next to the
/// ends) and a sparse LU solve. Fails with SingularDiscretization.
OdeSolution solve_normal_ode(const NormalOde& ode, const Axis& grid);

/// Half-line solve of P u = f with the problem's single boundary row and
/// the clamp u(L) = 0. Grid defaults to [0, config.L] with config.points.
GridFunction solve_halfline(const ModelProblem& problem);
GridFunction solve_halfline(const ModelProblem& problem, const Axis& grid);

/// Half-plane solve for x-independent P, one mode of the x' DFT at a time.
/// Without f each mode is a combination of e^{i tau x_n} over the upper
/// roots tau; with f the mode ODE (second order only) is solved by
/// solve_normal_ode on [0, L_n]. Output axes (x', x_n). Fails with
/// RealRootDetected.
GridFunction solve_halfplane_ct(const ModelProblem& problem);
GridFunction solve_halfplane_ct(const ModelProblem& problem, const Axis& tangential, const Axis& normal);

/// Upper roots in xi_n of P(xi', xi_n) for x-independent P.
std::vector<cplx> upper_normal_roots(const DiffSymbol& P, double xi_t);

}  // namespace sgcalc
