#include "sgcalc/spectral.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "sgcalc/errors.hpp"

namespace sgcalc {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct FourierPlan::Impl {
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
};

FourierPlan::FourierPlan(std::size_t n) : n_(n), impl_(std::make_unique<Impl>()) {
  if (n == 0) fail(ErrorCode::InvalidArgument, "empty transform");
  std::lock_guard lock(planner_mutex());
  auto* buf = fftw_alloc_complex(n);
  const int len = static_cast<int>(n);
  impl_->fwd = fftw_plan_dft_1d(len, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  impl_->inv = fftw_plan_dft_1d(len, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(buf);
}

FourierPlan::~FourierPlan() {
  std::lock_guard lock(planner_mutex());
  if (impl_->fwd) fftw_destroy_plan(impl_->fwd);
  if (impl_->inv) fftw_destroy_plan(impl_->inv);
}

std::vector<cplx> FourierPlan::forward(const std::vector<cplx>& x) const {
  if (x.size() != n_) fail(ErrorCode::InvalidArgument, "transform length mismatch");
  std::vector<cplx> out(x);
  auto* p = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(impl_->fwd, p, p);
  return out;
}

std::vector<cplx> FourierPlan::inverse(const std::vector<cplx>& X) const {
  if (X.size() != n_) fail(ErrorCode::InvalidArgument, "transform length mismatch");
  std::vector<cplx> out(X);
  auto* p = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(impl_->inv, p, p);
  const double s = 1.0 / static_cast<double>(n_);
  for (auto& v : out) v *= s;
  return out;
}

std::vector<double> fft_frequencies(std::size_t n, double dx) {
  std::vector<double> k(n);
  const double base = 2.0 * std::numbers::pi / (static_cast<double>(n) * dx);
  for (std::size_t i = 0; i < n; ++i) {
    const long m = i <= n / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(n);
    k[i] = base * static_cast<double>(m);
  }
  return k;
}

std::vector<cplx> spectral_derivative(const std::vector<cplx>& u, double dx, int order) {
  if (order == 0) return u;
  const std::size_t n = u.size();
  const FourierPlan plan(n);
  auto U = plan.forward(u);
  const auto k = fft_frequencies(n, dx);
  const cplx i(0.0, 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (order % 2 == 1 && n % 2 == 0 && j == n / 2) {
      U[j] = 0.0;
      continue;
    }
    U[j] *= std::pow(i * k[j], order);
  }
  return plan.inverse(U);
}

}  // namespace sgcalc
