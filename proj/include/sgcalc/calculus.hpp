#pragma once

#include "sgcalc/ellipticity.hpp"
#include "sgcalc/symbol.hpp"

namespace sgcalc {

inline constexpr int kDefaultTruncationCap = 6;

/// Asymptotic composition a # b truncated to N terms:
/// term l = sum_{j+k+|alpha|=l} (1/alpha!) d_xi^alpha a_j D_x^alpha b_k.
/// The result inherits the cutoff of a (else of b); cutoff derivatives are
/// not propagated, which is exact where the cutoff is identically one.
FormalSum compose(const FormalSum& a, const FormalSum& b, int N, int cap = kDefaultTruncationCap);

/// Formal adjoint: term l = sum_{j+|alpha|=l} (1/alpha!) d_xi^alpha D_x^alpha conj(a_j).
FormalSum adjoint(const FormalSum& a, int N, int cap = kDefaultTruncationCap);

struct ParametrixOptions {
  double theta_c = 2.0;
  RadialGridSpec grid;
  EllipticOptions elliptic;
  int cap = kDefaultTruncationCap;
};

/// Left parametrix b ~ sum_j b_j with b_0 = 1/a and
/// b_j = -b_0 sum_{k<j, k+|alpha|=j} (1/alpha!) d_xi^alpha b_k D_x^alpha a,
/// multiplied by the Gevrey cutoff of radius B. Fails with NotElliptic when
/// sg_elliptic_check at radius B does not pass.
FormalSum parametrix(const DiffSymbol& a, int N, double B, const ParametrixOptions& opt = {});

/// Number of extra composition terms needed for compose(b, a) to contain
/// every nonvanishing contribution of a differential symbol a with
/// polynomial coefficients.
int exact_extra_terms(const DiffSymbol& a);

}  // namespace sgcalc
