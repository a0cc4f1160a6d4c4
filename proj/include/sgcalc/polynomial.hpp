#pragma once

#include <vector>

#include "sgcalc/expr.hpp"

namespace sgcalc {

/// Polynomials in one complex variable, coefficients in ascending order.
using Poly = std::vector<cplx>;

cplx poly_eval(const Poly& p, cplx z);
/// Degree ignoring exactly-zero leading coefficients (-1 for the zero polynomial).
int poly_degree(const Poly& p);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_add(const Poly& a, const Poly& b);
/// Monic polynomial prod (z - r).
Poly poly_from_roots(const std::vector<cplx>& roots);

struct PolyDivision {
  Poly quotient;
  Poly remainder;  // size deg(divisor)
};
/// Euclidean division by a monic divisor.
PolyDivision poly_divmod(const Poly& num, const Poly& monic);

/// Roots via companion-matrix eigenvalues. Exact zero roots (vanishing low
/// coefficients) are split off first. Fails with LeadingCoeffVanishes when the
/// top coefficient is below rel_tol times the largest coefficient.
std::vector<cplx> poly_roots(const Poly& p, double rel_tol = 1e-14);

/// Radius max_j (N |p_j / p_N|)^{1/(N-j)} enclosing every root.
double poly_root_bound(const Poly& p);

}  // namespace sgcalc
