#pragma once

#include <memory>
#include <vector>

#include "sgcalc/expr.hpp"

namespace sgcalc {

/// Complex 1-D DFT of fixed length. The plan is created once and executed
/// on caller buffers, so one plan may serve many threads.
class FourierPlan {
 public:
  explicit FourierPlan(std::size_t n);
  ~FourierPlan();
  FourierPlan(const FourierPlan&) = delete;
  FourierPlan& operator=(const FourierPlan&) = delete;

  std::size_t size() const { return n_; }
  /// X_k = sum_j x_j e^{-2 pi i jk/n}.
  std::vector<cplx> forward(const std::vector<cplx>& x) const;
  /// x_j = (1/n) sum_k X_k e^{2 pi i jk/n}.
  std::vector<cplx> inverse(const std::vector<cplx>& X) const;

 private:
  struct Impl;
  std::size_t n_;
  std::unique_ptr<Impl> impl_;
};

/// Angular frequencies 2 pi k/(n dx) in FFT order.
std::vector<double> fft_frequencies(std::size_t n, double dx);

/// d^order u/dx^order of periodic samples by spectral multiplication. The
/// Nyquist mode is dropped for odd orders.
std::vector<cplx> spectral_derivative(const std::vector<cplx>& u, double dx, int order);

}  // namespace sgcalc
