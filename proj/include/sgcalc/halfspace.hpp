#pragma once

#include <vector>

#include "sgcalc/extension.hpp"
#include "sgcalc/grid_function.hpp"
#include "sgcalc/symbol.hpp"

namespace sgcalc {

/// Upper-half-plane singularities of an x-independent formal sum on the
/// normal line at fixed xi'. For x_n > 0,
///   (1/2pi) int e^{i x_n xi_n} a(xi', xi_n) dxi_n = i sum_poles Res,
/// and each residue is e^{i x_n z0} times a polynomial in x_n built from the
/// Laurent coefficients. The cutoff of the formal sum is not applied.
class NormalKernel {
 public:
  struct Pole {
    cplx z0;
    std::vector<cplx> laurent;  // laurent[k] = coefficient of (z - z0)^{-(k+1)}
  };

  /// Fails with InvalidArgument when a term depends on x and with
  /// NotRational when xi_n does not enter rationally.
  explicit NormalKernel(const FormalSum& a);

  int n() const { return n_; }
  /// Fails with RealPoleOnPath when a pole sits on the real axis.
  std::vector<Pole> poles(const std::vector<double>& xi_t) const;
  /// Kernel value at x_n >= 0 (the limit from above at 0).
  static cplx value(const std::vector<Pole>& poles, double xn);
  /// The symbol at real (xi', xi_n).
  cplx symbol(const std::vector<double>& xi_t, double xi_n) const;

 private:
  int n_;
  std::vector<Expr> terms_;
  std::vector<CompiledExpr> compiled_;
};

/// Laurent coefficients kept per pole (pole orders above this are truncated).
inline constexpr int kLaurentTerms = 8;

/// r+ op(a)(v (x) delta(x_n)) on the x_n samples (all >= 0), n = 1.
GridFunction poisson_apply(const FormalSum& a, cplx v, const Axis& xn);

/// Same for n = 2 with v sampled on a uniform x' grid. Modes come from a DFT
/// of v, so v must be negligible at both ends of its grid. Output axes are
/// (x', x_n).
GridFunction poisson_apply(const FormalSum& a, const GridFunction& v, const Axis& xn);

struct TransmissionOptions {
  ExtensionParams extension;
  /// Samples of the extension on [-1, 0] used for the e- correction moments.
  std::size_t correction_samples = 16384;
};

/// r+ op(a) e+ f for n = 1 and x-independent a. f is sampled on a grid
/// starting at x = 0 and must decay to negligible values at its end; jet
/// holds f^(k)(0). op(a) is applied spectrally to the Gelfand-Shilov
/// extension of f and the contribution of the extension on x < 0 is removed
/// with the residue kernel.
GridFunction transmission_apply(const FormalSum& a, const GridFunction& f, const BoundaryJet& jet,
                                const TransmissionOptions& opt = {});

}  // namespace sgcalc
